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

// Exact user-level sensitivities of the sample mean and population variance
// of one grid, with and without contribution clipping.

#ifndef DPCOMPOSER_SENSITIVITY_H_
#define DPCOMPOSER_SENSITIVITY_H_

#include <cstdint>
#include <span>
#include <string_view>

#include "absl/status/statusor.h"
#include "dpcomposer/grouping.h"

namespace dpcomposer {

// Which case of the three-way variance sensitivity formula applied, keyed on
// the total n and the largest per-user count c:
//   kAboveTwice: n > 2c,             U^2 c (n - c) / n^2
//   kEvenCap:    n <= 2c and n even, U^2 / 4
//   kOddCap:     n <= 2c and n odd,  U^2 / 4 * (1 - 1/n^2)
enum class VarianceBranch { kAboveTwice, kEvenCap, kOddCap };

std::string_view VarianceBranchName(VarianceBranch branch);

struct SensitivityReport {
  double delta_mu = 0.0;
  double delta_var = 0.0;
  VarianceBranch branch = VarianceBranch::kAboveTwice;
};

struct GainReport {
  double delta_f = 0.0;      // U m* / sum m_l (unclipped mean)
  double delta_tilde = 0.0;  // U m_UB / sum min(m_l, m_UB)
  double opt = 0.0;          // m* L / sum m_l
  double gain = 0.0;         // delta_f / delta_tilde
};

// Sensitivities from the two sufficient statistics: total count and the
// largest single-user count. Requires 0 < max_count <= total.
SensitivityReport SensitivityFromTotals(int64_t total, int64_t max_count,
                                        double bound_u);

// U m* / sum m_l. Errors: ZeroTotal (also for negative counts).
absl::StatusOr<double> MeanSensitivity(std::span<const int64_t> counts,
                                       double bound_u);

// Errors: ZeroTotal.
absl::StatusOr<SensitivityReport> VarianceSensitivity(
    std::span<const int64_t> counts, double bound_u);

// Same formulas over retained counts Gamma_l; zero entries are suppressed
// users and do not contribute. Errors: ZeroRetained.
absl::StatusOr<double> ClippedMeanSensitivity(
    std::span<const int64_t> retained, double bound_u);
absl::StatusOr<SensitivityReport> ClippedVarianceSensitivity(
    std::span<const int64_t> retained, double bound_u);

// 2U/K under WrapAround (a user can straddle two arrays), U/Kbar under
// BestFit. count must be >= 1.
double ArrayAverageSensitivity(GroupingStrategy strategy, int64_t count,
                               double bound_u);

// Compares the unclipped mean sensitivity with the array-averaging proxy
// for a given m_UB. Counts must be non-empty with a positive sum.
GainReport ComputeGainReport(std::span<const int64_t> counts, int64_t m_ub,
                             double bound_u);

// Test oracle: max |Var(D) - Var(D')| over all user-level neighbouring pairs
// whose samples all lie in {0, U}. The extremal configurations of the
// variance sensitivity place every sample at an endpoint, so this equals the
// exact sensitivity. Errors: ZeroTotal, TooLarge (sum of counts > 10).
absl::StatusOr<double> BruteForceVarianceSensitivity(
    std::span<const int64_t> counts, double bound_u);

}  // namespace dpcomposer

#endif  // DPCOMPOSER_SENSITIVITY_H_
