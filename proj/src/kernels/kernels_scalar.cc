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

#include "stress/kernels.h"

namespace stress::kernels {
namespace {

double DotScalar(const double* a, const double* b, size_t n) {
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void AxpyScalar(double alpha, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double SquaredDistanceScalar(const double* a, const double* b, size_t n) {
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void GemvColumnsScalar(const double* columns, size_t rows, size_t cols, size_t stride,
                       const double* w, double bias, double* out) {
  for (size_t i = 0; i < rows; ++i) out[i] = bias;
  for (size_t j = 0; j < cols; ++j) AxpyScalar(w[j], columns + j * stride, out, rows);
}

void RangeMaskScalar(const double* x, size_t n, double lower, double upper, uint8_t* mask) {
  for (size_t i = 0; i < n; ++i) {
    const bool inside = x[i] >= lower && x[i] <= upper;
    mask[i] = static_cast<uint8_t>(mask[i] & (inside ? 1 : 0));
  }
}

}  // namespace

const KernelTable& ScalarTable() {
  static const KernelTable table{DotScalar, AxpyScalar, SquaredDistanceScalar,
                                 GemvColumnsScalar, RangeMaskScalar};
  return table;
}

}  // namespace stress::kernels
