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

#ifndef STRESS_RUN_H_
#define STRESS_RUN_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stress/corruption.h"
#include "stress/external.h"
#include "stress/metrics.h"
#include "stress/pipeline.h"
#include "stress/search.h"

namespace stress {

// Everything a run needs. Relative paths resolve against the directory of
// the config file.
struct RunConfig {
  std::filesystem::path dataset;
  std::filesystem::path schema;
  std::string missing_token = "?";
  double train_fraction = 0.7;
  ErrorType error;
  Objective objective;
  SearchConfig search;  // carries budget and seed
  std::optional<PipelineSpec> pipeline;
  std::optional<ExternalPipeline> external;
  Task task = Task::kClassification;  // taken from the pipeline when built in
  std::optional<PipelineSpec> proxy;
  size_t warm_start_iterations = 0;  // 0 means tpe_iterations
  double sample_fraction = 1.0;
  size_t random_baseline_trials = 0;
  std::vector<double> budget_sweep;
  std::filesystem::path output_dir = "out";
  uint64_t seed = 0;

  // Throws StressError(kConfig).
  void Validate() const;

  static RunConfig FromJson(const nlohmann::json& json, const std::filesystem::path& base_dir);
  // .toml files are parsed as TOML, anything else as JSON.
  static RunConfig Load(const std::filesystem::path& path);
  // Effective configuration, echoed into the report.
  nlohmann::ordered_json ToJson() const;
};

struct StageTimings {
  double load = 0.0;
  double clean = 0.0;
  double search = 0.0;    // dependency search (beam, or the proxy search)
  double finetune = 0.0;  // warm start or full-data re-evaluation
  double baseline = 0.0;
  double sweep = 0.0;
  double total = 0.0;
};

struct StagedRecord {
  std::string stage;  // "clean", "search", "finetune", "transfer", "baseline"
  TraceRecord record;
};

struct RunReport {
  nlohmann::ordered_json config;
  double clean_psi = 0.0;
  double adversarial_psi = 0.0;
  Dcp best_dcp;
  std::string best_template;
  std::vector<DepthSummary> trajectory;
  std::vector<StagedRecord> trace;
  size_t evaluations = 0;
  std::optional<double> random_baseline_psi;
  std::vector<std::pair<double, double>> sweep;  // (budget, psi)
  std::string mode;  // "beam_search", "warm_start" or "sample_then_transfer"
  StageTimings timings;

  nlohmann::ordered_json ToJson(const Objective& objective) const;
};

// Seed tree: every random choice of a run derives from RunConfig::seed.
struct RunSeeds {
  uint64_t split;
  uint64_t noise;
  uint64_t pipeline;
  uint64_t search;

  static RunSeeds From(uint64_t seed);
};

// The loaded and split data of a run, plus its evaluators.
class RunContext {
 public:
  explicit RunContext(const RunConfig& config);

  const Dataset& data() const { return data_; }
  const Dataset& train() const { return split_.train; }
  const Dataset& test() const { return split_.test; }
  const RunSeeds& seeds() const { return seeds_; }

  // Normalized objective of a process applied to `train`, for the target
  // pipeline or the proxy.
  Evaluator MakeEvaluator(const Dataset& train, bool proxy = false) const;
  // Mean over the configured repeats.
  double Score(const Dcp& dcp, const Dataset& train) const;

 private:
  const RunConfig& config_;
  Dataset data_;
  SplitResult split_;
  RunSeeds seeds_;
};

// p = 0 process over a template's attributes.
Dcp IdentityDcp(const CorruptionTemplate& tmpl);

// Runs the clean baseline and the configured search, writes report.json,
// trace.jsonl, best_dcp.json and plotdata.csv into config.output_dir.
RunReport Run(const RunConfig& config);

// Re-scores a serialized process under the run's seeds.
double Replay(const RunConfig& config, const Dcp& dcp);

// Random search baseline over the run's train split.
RandomBaselineResult RunRandomBaseline(const RunConfig& config, size_t n_trials);

// report.json without its timing fields.
nlohmann::json StripTimings(nlohmann::json report);

}  // namespace stress

#endif  // STRESS_RUN_H_
