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

#ifndef STRESS_SRC_KERNELS_KERNELS_INTERNAL_H_
#define STRESS_SRC_KERNELS_KERNELS_INTERNAL_H_

#include "stress/kernels.h"

namespace stress::kernels::internal {

// Defined in kernels_avx2.cc, which is compiled with -mavx2 -mfma. Only call
// after confirming CPU support.
const KernelTable& Avx2TableUnchecked();

}  // namespace stress::kernels::internal

#endif  // STRESS_SRC_KERNELS_KERNELS_INTERNAL_H_
