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

#include "dpcomposer/kernels.h"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace dpcomposer {
namespace {

using kernels_internal::KernelTable;

bool CpuHasAvx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

KernelBackend DefaultBackend() {
  // DP_COMPOSER_KERNELS=scalar forces the reference loops.
  const char* forced = std::getenv("DP_COMPOSER_KERNELS");
  if (forced != nullptr && std::string_view(forced) == "scalar") {
    return KernelBackend::kScalar;
  }
  return Avx2Available() ? KernelBackend::kAvx2 : KernelBackend::kScalar;
}

std::atomic<KernelBackend>& BackendSlot() {
  static std::atomic<KernelBackend> slot(DefaultBackend());
  return slot;
}

const KernelTable& Table() {
  if (BackendSlot().load(std::memory_order_relaxed) == KernelBackend::kAvx2) {
    return *kernels_internal::Avx2Kernels();
  }
  return kernels_internal::ScalarKernels();
}

}  // namespace

bool Avx2Available() {
  return kernels_internal::Avx2Kernels() != nullptr && CpuHasAvx2();
}

KernelBackend ActiveKernelBackend() {
  return BackendSlot().load(std::memory_order_relaxed);
}

KernelBackend SetKernelBackend(KernelBackend backend) {
  if (backend == KernelBackend::kAvx2 && !Avx2Available()) {
    backend = KernelBackend::kScalar;
  }
  BackendSlot().store(backend, std::memory_order_relaxed);
  return backend;
}

std::string_view KernelBackendName(KernelBackend backend) {
  return backend == KernelBackend::kAvx2 ? "avx2" : "scalar";
}

double Sum(std::span<const double> values) {
  return Table().sum(values.data(), values.size());
}

double SumSquaredDeviations(std::span<const double> values, double center) {
  return Table().sum_squared_deviations(values.data(), values.size(), center);
}

double ClampedSum(std::span<const double> values, double lo, double hi) {
  return Table().clamped_sum(values.data(), values.size(), lo, hi);
}

int64_t SumMinCap(std::span<const int64_t> counts, int64_t cap) {
  return Table().sum_min_cap(counts.data(), counts.size(), cap);
}

}  // namespace dpcomposer
