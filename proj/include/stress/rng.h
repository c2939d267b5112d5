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

#ifndef STRESS_RNG_H_
#define STRESS_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace stress {

// Stateless 64-bit finalizer (splitmix64). Building block of every seed
// derivation and of the corruption noise source.
uint64_t Mix64(uint64_t x);

// Child seed for a named branch of the seed tree. Stable across platforms.
uint64_t DeriveSeed(uint64_t parent, std::string_view label);
uint64_t DeriveSeed(uint64_t parent, uint64_t index);

// Counter-based uniform draw in [0, 1) keyed by (seed, row, attribute).
// Order independent: the value for a cell never depends on which other cells
// were drawn before it.
double CounterUniform(uint64_t seed, uint64_t row, uint64_t attribute);

// Sequential generator. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; the distributions below are implemented here
// because the standard library's are not portable across implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform01();
  double Uniform(double lower, double upper);
  // Uniform in [0, n). n must be positive.
  uint64_t UniformIndex(uint64_t n);
  double Normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace stress

#endif  // STRESS_RNG_H_
