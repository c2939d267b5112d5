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

#include "stress/search.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>

#include "stress/error.h"
#include "stress/rng.h"

namespace stress {

void SearchConfig::Validate() const {
  if (beam_width < 1) throw StressError(ErrorCode::kConfig, "beam_width must be >= 1");
  if (max_depth < 1) throw StressError(ErrorCode::kConfig, "max_depth must be >= 1");
  tpe.Validate();
  if (max_pattern_attrs < 1) throw StressError(ErrorCode::kConfig, "max_pattern_attrs must be >= 1");
  if (!(min_support > 0.0 && min_support < 1.0)) {
    throw StressError(ErrorCode::kConfig, "min_support must lie in (0, 1)");
  }
  if (!(budget >= 0.0 && budget <= 1.0)) throw StressError(ErrorCode::kConfig, "budget must lie in [0, 1]");
  if (jobs < 1) throw StressError(ErrorCode::kConfig, "jobs must be >= 1");
}

bool SearchConfig::Blocked(std::span<const std::string> attributes) const {
  auto has = [&](const std::string& name) {
    return std::find(attributes.begin(), attributes.end(), name) != attributes.end();
  };
  for (const auto& [a, b] : blocklist) {
    if (has(a) && has(b)) return true;
  }
  return false;
}

bool BeamBefore(const BeamEntry& a, const BeamEntry& b) {
  if (a.psi() != b.psi()) return a.psi() < b.psi();
  if (a.tmpl.pattern_attributes.size() != b.tmpl.pattern_attributes.size()) {
    return a.tmpl.pattern_attributes.size() < b.tmpl.pattern_attributes.size();
  }
  return a.tmpl.Key() < b.tmpl.Key();
}

double MaxSupport(const Dataset& data, std::span<const std::string> attributes) {
  if (data.rows() == 0) return 0.0;
  std::vector<size_t> columns;
  for (const auto& name : attributes) columns.push_back(data.schema().IndexOf(name));
  std::map<std::vector<int32_t>, size_t> joint;
  std::vector<int32_t> key;
  size_t best = 0;
  for (size_t r = 0; r < data.rows(); ++r) {
    key.clear();
    bool observed = true;
    for (size_t c : columns) {
      if (data.IsMissing(r, c)) {
        observed = false;
        break;
      }
      if (data.column(c).kind == AttributeKind::kCategorical) key.push_back(data.column(c).codes[r]);
    }
    if (!observed) continue;
    best = std::max(best, ++joint[key]);
  }
  return static_cast<double>(best) / static_cast<double>(data.rows());
}

namespace {

// Attribute names in schema order, duplicates removed.
std::vector<std::string> Canonical(const Schema& schema, std::vector<std::string> names) {
  std::vector<size_t> indices;
  for (const auto& n : names) indices.push_back(schema.IndexOf(n));
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::vector<std::string> out;
  for (size_t i : indices) out.push_back(schema.attributes[i].name);
  return out;
}

bool Admissible(const Dataset& data, const SearchConfig& config,
                std::span<const std::string> attributes) {
  return attributes.size() <= config.max_pattern_attrs && !config.Blocked(attributes) &&
         MaxSupport(data, attributes) >= config.min_support;
}

// Runs fn(0..n-1) on up to `jobs` threads. The first exception by index is
// rethrown after every task finished.
template <typename Fn>
void ParallelFor(size_t n, size_t jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const size_t workers = std::min(jobs, n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next++; i < n; i = next++) guarded(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

uint64_t CandidateSeed(const SearchConfig& config, const CorruptionTemplate& tmpl) {
  return DeriveSeed(DeriveSeed(config.seed, "tpe"), tmpl.Key());
}

double MeanPsi(const Evaluator& evaluate, const Dcp& dcp, uint32_t repeats) {
  double sum = 0.0;
  for (uint32_t r = 0; r < repeats; ++r) sum += evaluate(dcp, r);
  return sum / static_cast<double>(repeats);
}

}  // namespace

std::vector<CorruptionTemplate> DetermineSeeds(const Dataset& data, const ErrorType& error,
                                               const SearchConfig& config) {
  const Schema& schema = data.schema();
  std::vector<CorruptionTemplate> seeds;
  std::set<std::string> seen;
  auto add = [&](const ErrorType& type, std::vector<std::string> names) {
    names = Canonical(schema, std::move(names));
    if (!Admissible(data, config, names)) return;
    CorruptionTemplate tmpl = MakeTemplate(data, type, names);
    if (seen.insert(tmpl.Key()).second) seeds.push_back(std::move(tmpl));
  };

  switch (error.kind) {
    case ErrorKind::kSelectionBias:
      for (const auto& a : schema.attributes) add(error, {a.name});
      break;
    case ErrorKind::kLabelError:
      for (const auto& a : schema.attributes) add(error, {a.name, schema.label});
      break;
    case ErrorKind::kMissingValue: {
      std::vector<std::string> targets;
      if (error.target.empty()) {
        for (const auto& a : schema.attributes) {
          if (a.name != schema.label) targets.push_back(a.name);
        }
      } else {
        targets.push_back(error.target);
      }
      for (const auto& target : targets) {
        const ErrorType type = ErrorType::MissingValue(target);
        for (const auto& a : schema.attributes) add(type, {a.name, target, schema.label});
      }
      break;
    }
  }
  if (seeds.empty()) {
    throw StressError(ErrorCode::kSearch, "no admissible seed pattern for " + error.Tag());
  }
  return seeds;
}

std::vector<CorruptionTemplate> Expand(std::span<const BeamEntry> beam, const Dataset& data,
                                       const SearchConfig& config, std::set<std::string>& visited) {
  const Schema& schema = data.schema();
  std::vector<CorruptionTemplate> children;
  for (const BeamEntry& entry : beam) {
    const auto& used = entry.tmpl.pattern_attributes;
    if (used.size() >= config.max_pattern_attrs) continue;
    for (const auto& a : schema.attributes) {
      if (std::find(used.begin(), used.end(), a.name) != used.end()) continue;
      std::vector<std::string> names = used;
      names.push_back(a.name);
      names = Canonical(schema, std::move(names));
      CorruptionTemplate probe;
      probe.error = entry.tmpl.error;
      probe.pattern_attributes = names;
      if (visited.count(probe.Key()) > 0) continue;
      visited.insert(probe.Key());
      if (!Admissible(data, config, names)) continue;
      children.push_back(MakeTemplate(data, entry.tmpl.error, names));
    }
  }
  return children;
}

SearchResult BeamSearch(const Dataset& data, const ErrorType& error, const Evaluator& evaluate,
                        const SearchConfig& config) {
  config.Validate();
  SearchResult result;
  std::vector<CorruptionTemplate> candidates = DetermineSeeds(data, error, config);
  std::set<std::string> visited;
  for (const auto& c : candidates) visited.insert(c.Key());

  std::vector<BeamEntry> beam;
  double best = std::numeric_limits<double>::infinity();
  for (size_t depth = 1; depth <= config.max_depth && !candidates.empty(); ++depth) {
    std::vector<BeamEntry> evaluated(candidates.size());
    ParallelFor(candidates.size(), config.jobs, [&](size_t i) {
      TpeResult run = TpeRun(candidates[i], data, config.budget, evaluate, config.tpe,
                             CandidateSeed(config, candidates[i]));
      evaluated[i] = {candidates[i], std::move(run.best), std::move(run.trials)};
    });

    for (const BeamEntry& e : evaluated) {
      const std::string key = e.tmpl.Key();
      for (const Trial& t : e.trials) result.trace.push_back({depth, key, t});
      result.evaluations += e.trials.size();
    }
    beam.insert(beam.end(), std::make_move_iterator(evaluated.begin()),
                std::make_move_iterator(evaluated.end()));
    std::stable_sort(beam.begin(), beam.end(), BeamBefore);
    if (beam.size() > config.beam_width) beam.resize(config.beam_width);

    DepthSummary summary;
    summary.depth = depth;
    summary.candidates = candidates.size();
    for (const BeamEntry& e : beam) {
      summary.beam_keys.push_back(e.tmpl.Key());
      summary.beam_psi.push_back(e.psi());
    }
    summary.best_psi = beam.front().psi();
    result.depths.push_back(std::move(summary));

    const double now = beam.front().psi();
    const bool improved = std::isinf(best) ? std::isfinite(now) : now < best - 1e-4;
    if (!improved) break;
    best = now;
    candidates = Expand(beam, data, config, visited);
  }
  result.best = beam.front();
  return result;
}

TpeResult WarmStart(const BeamEntry& proxy_best, const Dataset& data, const Evaluator& evaluate,
                    const SearchConfig& config, size_t iterations) {
  CheckCompatible(proxy_best.best.dcp, data.schema());
  TpeOptions options = config.tpe;
  options.iterations = iterations;
  options.n_init = std::min(options.n_init, std::max<size_t>(iterations, 1));
  const std::vector<Theta> initial = {proxy_best.best.theta};
  return TpeRun(proxy_best.tmpl, data, config.budget, evaluate, options,
                DeriveSeed(CandidateSeed(config, proxy_best.tmpl), "warm"), proxy_best.trials,
                initial);
}

TransferResult SampleThenTransfer(const Dataset& data, double sample_fraction,
                                  const EvaluatorFactory& make_evaluator, const ErrorType& error,
                                  const SearchConfig& config) {
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
    throw StressError(ErrorCode::kConfig, "sample_fraction must lie in (0, 1]");
  }
  TransferResult result;
  const Dataset sample =
      sample_fraction == 1.0
          ? data
          : data.SelectRows(SampleRows(data.rows(), sample_fraction, DeriveSeed(config.seed, "sample")));
  if (sample.rows() < 2) throw StressError(ErrorCode::kDatasetTooSmall, "sample has fewer than 2 rows");
  result.sample_rows = sample.rows();
  result.sample_search = BeamSearch(sample, error, make_evaluator(sample), config);
  result.sample_psi = result.sample_search.best.psi();
  if (sample_fraction == 1.0) {
    result.full_dcp = result.sample_search.best.best.dcp;
    result.full_psi = result.sample_psi;
    return result;
  }
  result.full_dcp = ProjectToBudget(result.sample_search.best.best.dcp, data, config.budget);
  result.full_psi = MeanPsi(make_evaluator(data), result.full_dcp, config.tpe.repeats);
  return result;
}

RandomBaselineResult RandomBaseline(const Dataset& data, const ErrorType& error,
                                    const Evaluator& evaluate, const SearchConfig& config,
                                    size_t n_trials) {
  config.Validate();
  if (n_trials == 0) throw StressError(ErrorCode::kConfig, "random baseline needs n_trials >= 1");
  const Schema& schema = data.schema();
  Rng rng(DeriveSeed(config.seed, "random_baseline"));

  struct Draw {
    CorruptionTemplate tmpl;
    Dcp dcp;
    Theta theta;
  };
  std::vector<Draw> draws;
  const size_t limit = std::min(config.max_pattern_attrs, schema.size());
  for (size_t t = 0; t < n_trials; ++t) {
    ErrorType type = error;
    if (type.kind == ErrorKind::kMissingValue && type.target.empty()) {
      std::vector<std::string> targets;
      for (const auto& a : schema.attributes) {
        if (a.name != schema.label) targets.push_back(a.name);
      }
      type.target = targets[rng.UniformIndex(targets.size())];
    }
    std::vector<std::string> names;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 10000) throw StressError(ErrorCode::kSearch, "no admissible random pattern");
      const size_t k = 1 + rng.UniformIndex(limit);
      std::vector<size_t> order(schema.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      for (size_t i = 0; i < k; ++i) std::swap(order[i], order[i + rng.UniformIndex(order.size() - i)]);
      names.clear();
      for (size_t i = 0; i < k; ++i) names.push_back(schema.attributes[order[i]].name);
      names = Canonical(schema, std::move(names));
      if (Admissible(data, config, names)) break;
    }
    Draw draw{MakeTemplate(data, type, names), {}, {}};
    draw.theta = SampleUniform(draw.tmpl.space, rng);
    draw.dcp = ProjectToBudget(Instantiate(draw.tmpl, draw.theta), data, config.budget);
    draw.theta[0] = draw.dcp.p;
    draws.push_back(std::move(draw));
  }

  std::vector<Trial> trials(draws.size());
  ParallelFor(draws.size(), config.jobs, [&](size_t i) {
    Trial& trial = trials[i];
    trial.theta = draws[i].theta;
    trial.dcp = draws[i].dcp;
    try {
      trial.psi = MeanPsi(evaluate, trial.dcp, config.tpe.repeats);
      if (std::isnan(trial.psi)) throw StressError(ErrorCode::kMetric, "objective is NaN");
    } catch (const std::exception&) {
      trial.psi = std::numeric_limits<double>::infinity();
      trial.failed = true;
    }
  });

  RandomBaselineResult result;
  size_t best = 0;
  for (size_t i = 0; i < trials.size(); ++i) {
    result.trace.push_back({0, draws[i].tmpl.Key(), trials[i]});
    if (trials[i].psi < trials[best].psi) best = i;
  }
  result.best = trials[best];
  result.template_key = draws[best].tmpl.Key();
  return result;
}

}  // namespace stress
