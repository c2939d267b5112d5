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

#ifndef STRESS_TPE_H_
#define STRESS_TPE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stress/corruption.h"
#include "stress/rng.h"

namespace stress {

// Normalized objective of a concrete process; lower means more damage.
// `repeat` selects the noise draw. Throws on failure.
using Evaluator = std::function<double(const Dcp& dcp, uint32_t repeat)>;

struct Trial {
  Theta theta;  // effective binding, p already projected onto the budget
  Dcp dcp;
  double psi = 0.0;  // +inf for failed evaluations
  bool failed = false;
  double seconds = 0.0;
};

struct TpeOptions {
  size_t iterations = 60;
  size_t n_init = 10;
  double gamma = 0.25;
  size_t candidate_pool = 24;
  uint32_t repeats = 1;

  // Throws StressError(kConfig).
  void Validate() const;
};

// Uniform point of the box.
Theta SampleUniform(const ParameterSpace& space, Rng& rng);

// Next binding to try. Falls back to uniform sampling while fewer than
// n_init successful trials exist or when no trial lands above the quantile.
Theta TpeSuggest(std::span<const Trial> history, const ParameterSpace& space,
                 const TpeOptions& options, Rng& rng);

// log g(x) - log l(x) under the densities TpeSuggest fits; exposed for tests.
// Returns nullopt in the cold-start regime.
std::optional<double> TpeLogRatio(std::span<const Trial> history, const ParameterSpace& space,
                                  const TpeOptions& options, std::span<const double> theta);

struct TpeResult {
  Trial best;
  std::vector<Trial> trials;  // new evaluations only, in order
};

// Runs options.iterations evaluations. Each suggestion is instantiated,
// projected onto the budget over `data`, and scored as the mean of
// options.repeats evaluator calls. `prior` trials shape the densities (and
// count toward n_init) but are not re-evaluated; `initial` bindings are
// evaluated first, before any suggestion.
TpeResult TpeRun(const CorruptionTemplate& tmpl, const Dataset& data, double budget,
                 const Evaluator& evaluate, const TpeOptions& options, uint64_t seed,
                 std::span<const Trial> prior = {}, std::span<const Theta> initial = {});

// The binding of `dcp` in the template's parameter space.
Theta ThetaOf(const CorruptionTemplate& tmpl, const Dcp& dcp);

}  // namespace stress

#endif  // STRESS_TPE_H_
