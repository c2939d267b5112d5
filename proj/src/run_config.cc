/*
 * Copyright 2026 The Stress Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <sstream>

#include "stress/dcp_json.h"
#include "stress/error.h"
#include "stress/run.h"
#include "toml.hpp"

namespace stress {
namespace {

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& value) {
  const std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

Objective ObjectiveFromJson(const nlohmann::json& json) {
  if (json.is_string()) return Objective::Parse(json.get<std::string>());
  Objective objective = Objective::Parse(json.at("name").get<std::string>());
  objective.threshold = json.value("threshold", objective.threshold);
  if (json.contains("privileged")) objective.privileged = json.at("privileged").get<std::string>();
  return objective;
}

void SearchFromJson(const nlohmann::json& json, SearchConfig& search) {
  search.beam_width = json.value("beam_width", search.beam_width);
  search.max_depth = json.value("max_depth", search.max_depth);
  search.tpe.iterations = json.value("tpe_iterations", search.tpe.iterations);
  search.tpe.n_init = json.value("n_init", search.tpe.n_init);
  search.tpe.gamma = json.value("gamma", search.tpe.gamma);
  search.tpe.candidate_pool = json.value("candidate_pool", search.tpe.candidate_pool);
  search.tpe.repeats = json.value("repeats", search.tpe.repeats);
  search.max_pattern_attrs = json.value("max_pattern_attrs", search.max_pattern_attrs);
  search.min_support = json.value("min_support", search.min_support);
  if (json.contains("blocklist")) {
    for (const auto& pair : json.at("blocklist")) {
      const auto names = pair.get<std::vector<std::string>>();
      if (names.size() != 2) throw StressError(ErrorCode::kConfig, "blocklist entries are pairs");
      search.blocklist.emplace_back(names[0], names[1]);
    }
  }
}

}  // namespace

void RunConfig::Validate() const {
  if (pipeline.has_value() == external.has_value()) {
    throw StressError(ErrorCode::kConfig, "exactly one of pipeline and external is required");
  }
  if (pipeline) pipeline->Validate();
  if (proxy) {
    proxy->Validate();
    if (pipeline && !pipeline->expensive()) {
      throw StressError(ErrorCode::kConfig,
                        "a proxy needs an external or an expensive built-in target pipeline");
    }
    if (proxy->task != task) throw StressError(ErrorCode::kConfig, "proxy task differs from the target");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw StressError(ErrorCode::kConfig, "train_fraction must lie in (0, 1)");
  }
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
    throw StressError(ErrorCode::kConfig, "sample_fraction must lie in (0, 1]");
  }
  if (proxy && sample_fraction < 1.0) {
    throw StressError(ErrorCode::kConfig, "proxy and sample_fraction cannot be combined");
  }
  for (double b : budget_sweep) {
    if (!(b >= 0.0 && b <= 1.0)) throw StressError(ErrorCode::kConfig, "sweep budgets must lie in [0, 1]");
  }
  search.Validate();
}

RunConfig RunConfig::FromJson(const nlohmann::json& json, const std::filesystem::path& base_dir) {
  RunConfig config;
  try {
    config.dataset = Resolve(base_dir, json.at("dataset").get<std::string>());
    config.schema = Resolve(base_dir, json.at("schema").get<std::string>());
    config.missing_token = json.value("missing_token", config.missing_token);
    config.train_fraction = json.value("train_fraction", config.train_fraction);
    config.error = ErrorTypeFromJson(json.at("error"));
    config.objective = ObjectiveFromJson(json.at("objective"));
    config.search.budget = json.at("budget").get<double>();
    if (json.contains("search")) SearchFromJson(json.at("search"), config.search);
    if (json.contains("pipeline")) {
      config.pipeline = PipelineSpec::FromJson(json.at("pipeline"));
      config.task = config.pipeline->task;
    }
    if (json.contains("external")) {
      config.external = ExternalPipeline::FromJson(json.at("external"));
      config.task = ParseTask(json.value("task", std::string("classification")));
    }
    if (json.contains("proxy")) config.proxy = PipelineSpec::FromJson(json.at("proxy"));
    config.warm_start_iterations = json.value("warm_start_iterations", config.warm_start_iterations);
    config.sample_fraction = json.value("sample_fraction", config.sample_fraction);
    config.random_baseline_trials = json.value("random_baseline_trials", config.random_baseline_trials);
    config.budget_sweep = json.value("budget_sweep", config.budget_sweep);
    config.output_dir = Resolve(base_dir, json.value("output_dir", std::string("out")));
    config.seed = json.value("seed", config.seed);
    config.search.seed = config.seed;
  } catch (const nlohmann::json::exception& e) {
    throw StressError(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
  config.Validate();
  return config;
}

RunConfig RunConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StressError(ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  nlohmann::json json;
  if (path.extension() == ".toml") {
    try {
      const toml::table table = toml::parse(text.str(), path.string());
      std::stringstream converted;
      converted << toml::json_formatter{table};
      json = nlohmann::json::parse(converted.str());
    } catch (const toml::parse_error& e) {
      throw StressError(ErrorCode::kConfig, std::string("config: ") + std::string(e.description()));
    }
  } else {
    try {
      json = nlohmann::json::parse(text.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw StressError(ErrorCode::kConfig, std::string("config: ") + e.what());
    }
  }
  return FromJson(json, path.parent_path());
}

nlohmann::ordered_json RunConfig::ToJson() const {
  nlohmann::ordered_json out;
  out["dataset"] = dataset.string();
  out["schema"] = schema.string();
  out["missing_token"] = missing_token;
  out["train_fraction"] = train_fraction;
  out["error"] = ErrorTypeToJson(error);
  nlohmann::ordered_json objective_json = {{"name", objective.Name()},
                                           {"threshold", objective.threshold}};
  if (objective.privileged) objective_json["privileged"] = *objective.privileged;
  out["objective"] = objective_json;
  out["budget"] = search.budget;
  nlohmann::ordered_json s;
  s["beam_width"] = search.beam_width;
  s["max_depth"] = search.max_depth;
  s["tpe_iterations"] = search.tpe.iterations;
  s["n_init"] = search.tpe.n_init;
  s["gamma"] = search.tpe.gamma;
  s["candidate_pool"] = search.tpe.candidate_pool;
  s["repeats"] = search.tpe.repeats;
  s["max_pattern_attrs"] = search.max_pattern_attrs;
  s["min_support"] = search.min_support;
  s["blocklist"] = nlohmann::ordered_json::array();
  for (const auto& [a, b] : search.blocklist) s["blocklist"].push_back({a, b});
  out["search"] = s;
  out["task"] = TaskName(task);
  if (pipeline) out["pipeline"] = pipeline->ToJson();
  if (external) out["external"] = external->ToJson();
  if (proxy) out["proxy"] = proxy->ToJson();
  out["warm_start_iterations"] = warm_start_iterations;
  out["sample_fraction"] = sample_fraction;
  out["random_baseline_trials"] = random_baseline_trials;
  out["budget_sweep"] = budget_sweep;
  out["output_dir"] = output_dir.string();
  out["seed"] = seed;
  return out;
}

}  // namespace stress
