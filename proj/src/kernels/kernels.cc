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

#include <cstdlib>
#include <string>

#include "kernels_internal.h"
#include "stress/kernels.h"

namespace stress::kernels {

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable* Avx2Table() {
#if defined(STRESS_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (supported) return &internal::Avx2TableUnchecked();
#endif
  return nullptr;
}

namespace {

Isa ResolveIsa() {
  if (const char* forced = std::getenv("STRESS_ISA"); forced != nullptr) {
    if (std::string(forced) == "scalar") return Isa::kScalar;
  }
  return Avx2Table() != nullptr ? Isa::kAvx2 : Isa::kScalar;
}

}  // namespace

Isa ActiveIsa() {
  static const Isa isa = ResolveIsa();
  return isa;
}

const KernelTable& Active() {
  static const KernelTable& table =
      ActiveIsa() == Isa::kAvx2 ? *Avx2Table() : ScalarTable();
  return table;
}

}  // namespace stress::kernels
