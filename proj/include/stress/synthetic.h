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

#ifndef STRESS_SYNTHETIC_H_
#define STRESS_SYNTHETIC_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "stress/dataset.h"

namespace stress {

// Census-style classification table: numeric age, education_num and hours,
// categorical workclass, marital, race and sex; label income (">50K" is
// positive, about a quarter of rows); sensitive attribute sex. education_num
// carries most of the signal.
Dataset AdultLike(size_t rows, uint64_t seed);

// All-categorical table with small domains. The label depends on A only:
// P(y = "pos" | A) is 0.85 / 0.5 / 0.2 for a0 / a1 / a2. B, C and D are noise.
Dataset Planted(size_t rows, uint64_t seed);

// Regression table: y = 2 x1 - x2 + 0.5 x3 + [g == "g1"] + N(0, 1).
Dataset RegressionLike(size_t rows, uint64_t seed);

// Generator by name: "adult_like", "planted" or "regression".
Dataset Generate(std::string_view kind, size_t rows, uint64_t seed);

}  // namespace stress

#endif  // STRESS_SYNTHETIC_H_
