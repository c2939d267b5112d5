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

#ifndef STRESS_SEARCH_H_
#define STRESS_SEARCH_H_

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stress/corruption.h"
#include "stress/tpe.h"

namespace stress {

struct SearchConfig {
  size_t beam_width = 3;
  size_t max_depth = 3;
  TpeOptions tpe;
  size_t max_pattern_attrs = 3;
  double min_support = 0.01;
  double budget = 0.1;
  uint64_t seed = 0;
  // Attribute pairs that may not share a pattern.
  std::vector<std::pair<std::string, std::string>> blocklist;
  // Worker threads for candidate evaluation within a depth.
  size_t jobs = 1;

  // Throws StressError(kConfig).
  void Validate() const;
  bool Blocked(std::span<const std::string> attributes) const;
};

struct BeamEntry {
  CorruptionTemplate tmpl;
  Trial best;
  std::vector<Trial> trials;

  double psi() const { return best.psi; }
};

// psi first, then fewer pattern attributes, then template key.
bool BeamBefore(const BeamEntry& a, const BeamEntry& b);

struct TraceRecord {
  size_t depth = 0;
  std::string template_key;
  Trial trial;
};

struct DepthSummary {
  size_t depth = 0;
  size_t candidates = 0;
  std::vector<std::string> beam_keys;
  std::vector<double> beam_psi;
  double best_psi = 0.0;
};

struct SearchResult {
  BeamEntry best;
  std::vector<DepthSummary> depths;
  std::vector<TraceRecord> trace;
  size_t evaluations = 0;
};

// Largest fraction of rows a pattern over `attributes` can select: the most
// frequent joint value of its categorical attributes among rows where every
// pattern attribute is observed. Numeric attributes are unconstrained.
double MaxSupport(const Dataset& data, std::span<const std::string> attributes);

// Depth-one templates. Selection bias: every single attribute. Label errors:
// {label} and {X, label}. Missing values: {X} joined with {target, label}.
// A missing-value type without a target enumerates every non-label target.
std::vector<CorruptionTemplate> DetermineSeeds(const Dataset& data, const ErrorType& error,
                                               const SearchConfig& config);

// One child per unused attribute of every entry, skipping attribute sets in
// `visited` and those beyond max_pattern_attrs, under min_support, or
// blocklisted. Children come out in beam order, then schema order; every
// emitted key is added to `visited`.
std::vector<CorruptionTemplate> Expand(std::span<const BeamEntry> beam, const Dataset& data,
                                       const SearchConfig& config, std::set<std::string>& visited);

// Beam search over templates with TPE on each candidate. Candidates of one
// depth may run on config.jobs threads; the result does not depend on it.
SearchResult BeamSearch(const Dataset& data, const ErrorType& error, const Evaluator& evaluate,
                        const SearchConfig& config);

// Fine-tunes the proxy's best template against another evaluator. The proxy
// trials of that template seed the densities; the proxy's best binding is
// the first evaluation.
TpeResult WarmStart(const BeamEntry& proxy_best, const Dataset& data, const Evaluator& evaluate,
                    const SearchConfig& config, size_t iterations);

struct TransferResult {
  SearchResult sample_search;
  Dcp full_dcp;  // winner re-projected on the full data
  double sample_psi = 0.0;
  double full_psi = 0.0;
  size_t sample_rows = 0;
};

using EvaluatorFactory = std::function<Evaluator(const Dataset& train)>;

// Searches on a seeded subsample of `data` and re-scores the winner on all of it.
TransferResult SampleThenTransfer(const Dataset& data, double sample_fraction,
                                  const EvaluatorFactory& make_evaluator, const ErrorType& error,
                                  const SearchConfig& config);

struct RandomBaselineResult {
  Trial best;
  std::string template_key;
  std::vector<TraceRecord> trace;
};

// n_trials independent draws of a random admissible attribute set and a
// uniform binding; returns the lowest psi.
RandomBaselineResult RandomBaseline(const Dataset& data, const ErrorType& error,
                                    const Evaluator& evaluate, const SearchConfig& config,
                                    size_t n_trials);

}  // namespace stress

#endif  // STRESS_SEARCH_H_
