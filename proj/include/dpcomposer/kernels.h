//
// Copyright 2026 The DP Composer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Data-parallel inner loops shared by the estimators and mechanisms.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant is chosen once at startup from CPUID; tests can pin a
// backend with SetKernelBackend() to check the two agree.

#ifndef DPCOMPOSER_KERNELS_H_
#define DPCOMPOSER_KERNELS_H_

#include <cstdint>
#include <span>
#include <string_view>

namespace dpcomposer {

enum class KernelBackend { kScalar, kAvx2 };

// Backend used by the dispatching entry points below.
KernelBackend ActiveKernelBackend();

// True when the CPU and the build both support the AVX2 variants.
bool Avx2Available();

// Pins the dispatching entry points to a backend. Requesting kAvx2 on a
// machine without AVX2 falls back to kScalar; the return value is the backend
// actually selected.
KernelBackend SetKernelBackend(KernelBackend backend);

std::string_view KernelBackendName(KernelBackend backend);

// Sum of values.
double Sum(std::span<const double> values);

// Sum of (v - center)^2.
double SumSquaredDeviations(std::span<const double> values, double center);

// Sum of min(max(v, lo), hi), i.e. the sum of projections onto [lo, hi].
double ClampedSum(std::span<const double> values, double lo, double hi);

// Sum of min(c, cap) over non-negative counts.
int64_t SumMinCap(std::span<const int64_t> counts, int64_t cap);

namespace kernels_internal {

// Kernel table; the two implementations live in separate translation units so
// that only the AVX2 one is compiled with -mavx2.
struct KernelTable {
  double (*sum)(const double*, size_t);
  double (*sum_squared_deviations)(const double*, size_t, double);
  double (*clamped_sum)(const double*, size_t, double, double);
  int64_t (*sum_min_cap)(const int64_t*, size_t, int64_t);
};

const KernelTable& ScalarKernels();
// Null when the build has no AVX2 translation unit.
const KernelTable* Avx2Kernels();

}  // namespace kernels_internal
}  // namespace dpcomposer

#endif  // DPCOMPOSER_KERNELS_H_
