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

#include <immintrin.h>

#include "kernels_internal.h"

namespace stress::kernels::internal {
namespace {

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double DotAvx2(const double* a, const double* b, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  // Two accumulators hide FMA latency.
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double sum = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void AxpyAvx2(double alpha, const double* x, double* y, size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double SquaredDistanceAvx2(const double* a, const double* b, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double sum = HorizontalSum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void GemvColumnsAvx2(const double* columns, size_t rows, size_t cols, size_t stride,
                     const double* w, double bias, double* out) {
  const __m256d vb = _mm256_set1_pd(bias);
  size_t i = 0;
  for (; i + 4 <= rows; i += 4) _mm256_storeu_pd(out + i, vb);
  for (; i < rows; ++i) out[i] = bias;
  for (size_t j = 0; j < cols; ++j) AxpyAvx2(w[j], columns + j * stride, out, rows);
}

void RangeMaskAvx2(const double* x, size_t n, double lower, double upper, uint8_t* mask) {
  const __m256d lo = _mm256_set1_pd(lower);
  const __m256d hi = _mm256_set1_pd(upper);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    // Ordered, non-signalling compares: NaN lanes come out false.
    const __m256d inside =
        _mm256_and_pd(_mm256_cmp_pd(v, lo, _CMP_GE_OQ), _mm256_cmp_pd(v, hi, _CMP_LE_OQ));
    const int bits = _mm256_movemask_pd(inside);
    for (int k = 0; k < 4; ++k) {
      mask[i + k] = static_cast<uint8_t>(mask[i + k] & ((bits >> k) & 1));
    }
  }
  for (; i < n; ++i) {
    const bool inside = x[i] >= lower && x[i] <= upper;
    mask[i] = static_cast<uint8_t>(mask[i] & (inside ? 1 : 0));
  }
}

}  // namespace

const KernelTable& Avx2TableUnchecked() {
  static const KernelTable table{DotAvx2, AxpyAvx2, SquaredDistanceAvx2, GemvColumnsAvx2,
                                 RangeMaskAvx2};
  return table;
}

}  // namespace stress::kernels::internal
