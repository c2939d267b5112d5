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

#include "stress/run.h"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "stress/dcp_json.h"
#include "stress/error.h"
#include "stress/rng.h"

namespace stress {

RunSeeds RunSeeds::From(uint64_t seed) {
  return {DeriveSeed(seed, "split"), DeriveSeed(seed, "noise"), DeriveSeed(seed, "pipeline"),
          DeriveSeed(seed, "search")};
}

namespace {

ErrorType ResolveError(const ErrorType& error, const Dataset& data) {
  if (error.kind == ErrorKind::kLabelError && error.classes.empty()) return LabelErrorFor(data);
  return error;
}

SearchConfig ResolveSearch(const RunConfig& config, const RunSeeds& seeds) {
  SearchConfig search = config.search;
  search.seed = seeds.search;
  return search;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  // Seconds since construction or the previous lap.
  double Lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

nlohmann::ordered_json PsiJson(double psi, const Objective& objective) {
  nlohmann::ordered_json out;
  out["psi"] = psi;
  out["metric"] = objective.Denormalize(psi);
  return out;
}

nlohmann::ordered_json TraceJson(const StagedRecord& staged) {
  const TraceRecord& r = staged.record;
  nlohmann::ordered_json out;
  out["stage"] = staged.stage;
  out["depth"] = r.depth;
  out["template"] = r.template_key;
  out["theta"] = r.trial.theta;
  out["p"] = r.trial.dcp.p;
  out["psi"] = r.trial.failed ? nlohmann::ordered_json() : nlohmann::ordered_json(r.trial.psi);
  out["failed"] = r.trial.failed;
  out["seconds"] = r.trial.seconds;
  return out;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw StressError(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace

RunContext::RunContext(const RunConfig& config) : config_(config), seeds_(RunSeeds::From(config.seed)) {
  config.Validate();
  const Schema schema = Schema::Load(config.schema);
  schema.ValidateFor(config.task);
  CsvOptions options;
  options.missing_token = config.missing_token;
  data_ = LoadCsv(config.dataset, schema, options);
  split_ = Split(data_, config.train_fraction, seeds_.split);
}

Evaluator RunContext::MakeEvaluator(const Dataset& train, bool proxy) const {
  return [this, &train, proxy](const Dcp& dcp, uint32_t repeat) {
    const CorruptedDataset corrupted = Apply(dcp, train, DeriveSeed(seeds_.noise, repeat));
    double metric;
    if (proxy) {
      metric = Evaluate(*config_.proxy, corrupted.dataset, test(), config_.objective, seeds_.pipeline);
    } else if (config_.pipeline) {
      metric = Evaluate(*config_.pipeline, corrupted.dataset, test(), config_.objective, seeds_.pipeline);
    } else {
      metric = ExternalEvaluate(*config_.external, corrupted.dataset, test());
    }
    return config_.objective.Normalize(metric);
  };
}

double RunContext::Score(const Dcp& dcp, const Dataset& train) const {
  const Evaluator evaluate = MakeEvaluator(train);
  double sum = 0.0;
  for (uint32_t r = 0; r < config_.search.tpe.repeats; ++r) sum += evaluate(dcp, r);
  return sum / static_cast<double>(config_.search.tpe.repeats);
}

Dcp IdentityDcp(const CorruptionTemplate& tmpl) {
  Theta theta(tmpl.space.size(), 0.0);
  for (size_t d = 0; d < tmpl.space.size(); ++d) {
    const ParamDim& dim = tmpl.space.dims[d];
    if (dim.kind == ParamDim::Kind::kContinuous) theta[d] = dim.name.ends_with(".width") ? dim.upper : dim.lower;
  }
  theta[0] = 0.0;
  return Instantiate(tmpl, theta);
}

RunReport Run(const RunConfig& config) {
  Stopwatch total;
  Stopwatch stage;
  RunReport report;
  report.config = config.ToJson();
  const RunContext context(config);
  const Dataset& train = context.train();
  const ErrorType error = ResolveError(config.error, context.data());
  const SearchConfig search = ResolveSearch(config, context.seeds());
  const Evaluator target = context.MakeEvaluator(train);
  report.timings.load = stage.Lap();

  const std::vector<CorruptionTemplate> seeds = DetermineSeeds(train, error, search);
  const Dcp identity = IdentityDcp(seeds.front());
  report.clean_psi = context.Score(identity, train);
  report.timings.clean = stage.Lap();

  double search_psi = std::numeric_limits<double>::infinity();
  Dcp search_dcp;
  std::string search_key;
  auto record = [&](const std::string& name, const std::vector<TraceRecord>& trace) {
    for (const TraceRecord& r : trace) report.trace.push_back({name, r});
  };

  if (config.proxy) {
    report.mode = "warm_start";
    const Evaluator proxy = context.MakeEvaluator(train, true);
    const SearchResult proxy_search = BeamSearch(train, error, proxy, search);
    record("proxy", proxy_search.trace);
    report.trajectory = proxy_search.depths;
    report.timings.search = stage.Lap();
    const size_t iterations =
        config.warm_start_iterations > 0 ? config.warm_start_iterations : search.tpe.iterations;
    const TpeResult tuned = WarmStart(proxy_search.best, train, target, search, iterations);
    std::vector<TraceRecord> trace;
    for (const Trial& t : tuned.trials) trace.push_back({0, proxy_search.best.tmpl.Key(), t});
    record("finetune", trace);
    report.evaluations = tuned.trials.size();
    search_psi = tuned.best.psi;
    search_dcp = tuned.best.dcp;
    search_key = proxy_search.best.tmpl.Key();
    report.timings.finetune = stage.Lap();
  } else if (config.sample_fraction < 1.0) {
    report.mode = "sample_then_transfer";
    const TransferResult transfer = SampleThenTransfer(
        train, config.sample_fraction,
        [&](const Dataset& d) { return context.MakeEvaluator(d); }, error, search);
    record("sample_search", transfer.sample_search.trace);
    report.trajectory = transfer.sample_search.depths;
    report.evaluations = transfer.sample_search.evaluations + search.tpe.repeats;
    search_psi = transfer.full_psi;
    search_dcp = transfer.full_dcp;
    search_key = transfer.sample_search.best.tmpl.Key();
    report.timings.search = stage.Lap();
  } else {
    report.mode = "beam_search";
    const SearchResult result = BeamSearch(train, error, target, search);
    record("search", result.trace);
    report.trajectory = result.depths;
    report.evaluations = result.evaluations;
    search_psi = result.best.psi();
    search_dcp = result.best.best.dcp;
    search_key = result.best.tmpl.Key();
    report.timings.search = stage.Lap();
  }

  // The clean point is always a candidate, so the reported damage is never
  // worse than no corruption at all.
  if (search_psi < report.clean_psi) {
    report.adversarial_psi = search_psi;
    report.best_dcp = search_dcp;
    report.best_template = search_key;
  } else {
    report.adversarial_psi = report.clean_psi;
    report.best_dcp = identity;
    report.best_template = seeds.front().Key();
  }

  if (config.random_baseline_trials > 0) {
    const RandomBaselineResult baseline =
        RandomBaseline(train, error, target, search, config.random_baseline_trials);
    record("baseline", baseline.trace);
    report.random_baseline_psi = std::min(baseline.best.psi, report.clean_psi);
    report.timings.baseline = stage.Lap();
  }

  for (double budget : config.budget_sweep) {
    SearchConfig swept = search;
    swept.budget = budget;
    const SearchResult result = BeamSearch(train, error, target, swept);
    report.sweep.emplace_back(budget, std::min(result.best.psi(), report.clean_psi));
  }
  report.timings.sweep = stage.Lap();
  report.timings.total = total.Lap();

  std::filesystem::create_directories(config.output_dir);
  WriteText(config.output_dir / "report.json", report.ToJson(config.objective).dump(2) + "\n");
  std::string trace;
  for (const StagedRecord& r : report.trace) trace += TraceJson(r).dump() + "\n";
  WriteText(config.output_dir / "trace.jsonl", trace);
  SaveDcp(report.best_dcp, config.output_dir / "best_dcp.json");
  std::string plot = "series,x,psi,metric\n";
  auto row = [&](const std::string& series, double x, double psi) {
    const nlohmann::json values = {x, psi, config.objective.Denormalize(psi)};
    plot += series + "," + values[0].dump() + "," + values[1].dump() + "," + values[2].dump() + "\n";
  };
  for (const DepthSummary& d : report.trajectory) row("depth", static_cast<double>(d.depth), d.best_psi);
  for (const auto& [budget, psi] : report.sweep) row("budget", budget, psi);
  WriteText(config.output_dir / "plotdata.csv", plot);
  return report;
}

nlohmann::ordered_json RunReport::ToJson(const Objective& objective) const {
  nlohmann::ordered_json out;
  out["mode"] = mode;
  out["config"] = config;
  out["clean"] = PsiJson(clean_psi, objective);
  nlohmann::ordered_json adversarial = PsiJson(adversarial_psi, objective);
  adversarial["template"] = best_template;
  adversarial["dcp"] = DcpToJson(best_dcp);
  out["adversarial"] = adversarial;
  out["psi_drop"] = clean_psi - adversarial_psi;
  out["trajectory"] = nlohmann::ordered_json::array();
  for (const DepthSummary& d : trajectory) {
    nlohmann::ordered_json depth;
    depth["depth"] = d.depth;
    depth["candidates"] = d.candidates;
    depth["best_psi"] = d.best_psi;
    depth["beam"] = nlohmann::ordered_json::array();
    for (size_t i = 0; i < d.beam_keys.size(); ++i) {
      depth["beam"].push_back({{"template", d.beam_keys[i]}, {"psi", d.beam_psi[i]}});
    }
    out["trajectory"].push_back(std::move(depth));
  }
  out["evaluations"] = evaluations;
  if (random_baseline_psi) out["random_baseline"] = PsiJson(*random_baseline_psi, objective);
  if (!sweep.empty()) {
    out["budget_sweep"] = nlohmann::ordered_json::array();
    for (const auto& [budget, psi] : sweep) {
      nlohmann::ordered_json point = PsiJson(psi, objective);
      point["budget"] = budget;
      out["budget_sweep"].push_back(std::move(point));
    }
  }
  out["timings"] = {{"load", timings.load},         {"clean", timings.clean},
                    {"dependency_search", timings.search}, {"finetuning", timings.finetune},
                    {"baseline", timings.baseline}, {"sweep", timings.sweep},
                    {"total", timings.total}};
  return out;
}

double Replay(const RunConfig& config, const Dcp& dcp) {
  const RunContext context(config);
  CheckCompatible(dcp, context.train().schema());
  return context.Score(dcp, context.train());
}

RandomBaselineResult RunRandomBaseline(const RunConfig& config, size_t n_trials) {
  const RunContext context(config);
  const ErrorType error = ResolveError(config.error, context.data());
  return RandomBaseline(context.train(), error, context.MakeEvaluator(context.train()),
                        ResolveSearch(config, context.seeds()), n_trials);
}

nlohmann::json StripTimings(nlohmann::json report) {
  report.erase("timings");
  return report;
}

}  // namespace stress
