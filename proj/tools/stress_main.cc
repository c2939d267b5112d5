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

// Command line front end:
//   stress run --config <file> [--jobs N] [--replay dcp.json]
//   stress baseline --config <file> --trials 100 [--jobs N]
//   stress generate --kind adult_like --rows 5000 --seed 1 --out <dir>

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "stress/dcp_json.h"
#include "stress/error.h"
#include "stress/kernels.h"
#include "stress/run.h"
#include "stress/synthetic.h"

namespace {

int Fail(const std::string& stage, const std::exception& e) {
  if (const auto* s = dynamic_cast<const stress::StressError*>(&e)) {
    std::cerr << "stress: " << stage << ": " << stress::ErrorCodeName(s->code()) << ": " << e.what()
              << "\n";
  } else {
    std::cerr << "stress: " << stage << ": " << e.what() << "\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search for the data corruption that hurts an ML pipeline most."};
  app.require_subcommand(1);

  std::string config_path;
  size_t jobs = 1;
  std::string replay_path;
  auto* run = app.add_subcommand("run", "Clean baseline plus adversarial corruption search");
  run->add_option("--config", config_path, "JSON or TOML run configuration")->required();
  run->add_option("--jobs", jobs, "Worker threads for candidate evaluation")->check(CLI::PositiveNumber);
  run->add_option("--replay", replay_path, "Re-score a serialized corruption process instead");

  size_t trials = 100;
  auto* baseline = app.add_subcommand("baseline", "Random search over corruption processes");
  baseline->add_option("--config", config_path, "JSON or TOML run configuration")->required();
  baseline->add_option("--trials", trials, "Random processes to evaluate")->check(CLI::PositiveNumber);
  baseline->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::string kind = "adult_like";
  size_t rows = 5000;
  uint64_t seed = 1;
  std::string out_dir = ".";
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset and its schema");
  generate->add_option("--kind", kind, "adult_like, planted or regression");
  generate->add_option("--rows", rows, "Row count")->check(CLI::PositiveNumber);
  generate->add_option("--seed", seed, "Generator seed");
  generate->add_option("--out", out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  if (generate->parsed()) {
    try {
      const stress::Dataset data = stress::Generate(kind, rows, seed);
      std::filesystem::create_directories(out_dir);
      stress::WriteCsv(data, std::filesystem::path(out_dir) / "data.csv");
      std::ofstream(std::filesystem::path(out_dir) / "schema.json") << data.schema().ToJson().dump(2)
                                                                    << "\n";
      std::cout << "wrote " << data.rows() << " rows to " << out_dir << "\n";
      return 0;
    } catch (const std::exception& e) {
      return Fail("generate", e);
    }
  }

  stress::RunConfig config;
  try {
    config = stress::RunConfig::Load(config_path);
    config.search.jobs = jobs;
  } catch (const std::exception& e) {
    return Fail("config", e);
  }

  if (baseline->parsed()) {
    try {
      const auto result = stress::RunRandomBaseline(config, trials);
      nlohmann::ordered_json out;
      out["trials"] = trials;
      out["psi"] = result.best.psi;
      out["metric"] = config.objective.Denormalize(result.best.psi);
      out["template"] = result.template_key;
      out["dcp"] = stress::DcpToJson(result.best.dcp);
      std::filesystem::create_directories(config.output_dir);
      std::ofstream(config.output_dir / "baseline.json") << out.dump(2) << "\n";
      std::cout << out.dump(2) << "\n";
      return 0;
    } catch (const std::exception& e) {
      return Fail("baseline", e);
    }
  }

  if (!replay_path.empty()) {
    try {
      const stress::Dcp dcp = stress::LoadDcp(replay_path);
      const double psi = stress::Replay(config, dcp);
      nlohmann::ordered_json out;
      out["psi"] = psi;
      out["metric"] = config.objective.Denormalize(psi);
      std::cout << out.dump(2) << "\n";
      return 0;
    } catch (const std::exception& e) {
      return Fail("replay", e);
    }
  }

  try {
    const stress::RunReport report = stress::Run(config);
    std::cout << "isa " << stress::kernels::IsaName(stress::kernels::ActiveIsa()) << "\n"
              << "clean " << config.objective.Name() << " "
              << config.objective.Denormalize(report.clean_psi) << "\n"
              << "adversarial " << config.objective.Name() << " "
              << config.objective.Denormalize(report.adversarial_psi) << " via "
              << report.best_template << "\n"
              << "reports in " << config.output_dir.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    return Fail("run", e);
  }
}
