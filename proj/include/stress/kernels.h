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

#ifndef STRESS_KERNELS_H_
#define STRESS_KERNELS_H_

// Data-parallel inner loops shared by the pipelines and the corruption
// engine. Each kernel has a scalar reference implementation and, on x86-64,
// an AVX2/FMA variant. The variant is chosen once per process from CPUID;
// setting STRESS_ISA=scalar in the environment forces the reference path.
//
// The vector variants reassociate floating point sums, so results may differ
// from the scalar path in the last bits. Within one process the choice is
// fixed, which keeps every evaluation bit-reproducible.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace stress::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

struct KernelTable {
  double (*dot)(const double* a, const double* b, size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, size_t n);
  double (*squared_distance)(const double* a, const double* b, size_t n);
  // out[i] = bias + sum_j w[j] * columns[j * stride + i], column-major matrix.
  void (*gemv_columns)(const double* columns, size_t rows, size_t cols, size_t stride,
                       const double* w, double bias, double* out);
  // mask[i] &= lower <= x[i] <= upper. NaN never satisfies the condition.
  void (*range_mask)(const double* x, size_t n, double lower, double upper, uint8_t* mask);
};

const KernelTable& ScalarTable();
// Null when the build or the CPU lacks AVX2.
const KernelTable* Avx2Table();

// Active table, resolved on first use.
const KernelTable& Active();
Isa ActiveIsa();

inline double Dot(std::span<const double> a, std::span<const double> b) {
  return Active().dot(a.data(), b.data(), a.size());
}

inline void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  Active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  return Active().squared_distance(a.data(), b.data(), a.size());
}

inline void RangeMask(std::span<const double> x, double lower, double upper,
                      std::span<uint8_t> mask) {
  Active().range_mask(x.data(), x.size(), lower, upper, mask.data());
}

}  // namespace stress::kernels

#endif  // STRESS_KERNELS_H_
