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

#include <algorithm>
#include <cstddef>
#include <cstdint>

#include "dpcomposer/kernels.h"

namespace dpcomposer {
namespace kernels_internal {
namespace {

// Reference loops. Four independent accumulators so the summation order
// matches the 4-lane AVX2 variant.
double SumScalar(const double* v, size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int k = 0; k < 4; ++k) acc[k] += v[i + k];
  }
  double total = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; i < n; ++i) total += v[i];
  return total;
}

double SumSquaredDeviationsScalar(const double* v, size_t n, double center) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int k = 0; k < 4; ++k) {
      const double d = v[i + k] - center;
      acc[k] += d * d;
    }
  }
  double total = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; i < n; ++i) {
    const double d = v[i] - center;
    total += d * d;
  }
  return total;
}

double ClampedSumScalar(const double* v, size_t n, double lo, double hi) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int k = 0; k < 4; ++k) acc[k] += std::min(std::max(v[i + k], lo), hi);
  }
  double total = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; i < n; ++i) total += std::min(std::max(v[i], lo), hi);
  return total;
}

int64_t SumMinCapScalar(const int64_t* c, size_t n, int64_t cap) {
  int64_t total = 0;
  for (size_t i = 0; i < n; ++i) total += std::min(c[i], cap);
  return total;
}

}  // namespace

const KernelTable& ScalarKernels() {
  static constexpr KernelTable kTable = {
      &SumScalar, &SumSquaredDeviationsScalar, &ClampedSumScalar,
      &SumMinCapScalar};
  return kTable;
}

}  // namespace kernels_internal
}  // namespace dpcomposer
