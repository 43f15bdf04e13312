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

// Worst-case (over all datasets) clipping bias of the mean and variance
// estimators of one grid under a fixed retained-count plan.
//
// The retained set A holds the first Gamma_l samples of every user and the
// dropped set A^c the rest; n = |A| + |A^c| = sum m_l.
//
//   E_mu  = U (1 - |A| / n)
//   E_Var = 0                            if nothing is dropped
//         = U^2 |A| |A^c| / n^2          if |A| > |A^c|
//         = U^2 / 4                      if |A| <= |A^c| and n even
//         = U^2 / 4 (1 - 1/n^2)          if |A| <= |A^c| and n odd
//
// When more samples are dropped than kept, the retained block can be made
// constant while the full data reaches the largest possible variance; when
// most are kept, the gap is bounded by the between-block term with all
// retained samples equal.

#ifndef DPCOMPOSER_WORST_CASE_BIAS_H_
#define DPCOMPOSER_WORST_CASE_BIAS_H_

#include <cstdint>
#include <span>
#include <string_view>

#include "absl/status/statusor.h"
#include "dpcomposer/dataset.h"

namespace dpcomposer {

enum class BiasBranch {
  kNoClipping,
  kRetainedMajority,  // |A| > |A^c|
  kEvenTotal,         // |A| <= |A^c|, n even
  kOddTotal,          // |A| <= |A^c|, n odd
};

std::string_view BiasBranchName(BiasBranch branch);

struct BiasReport {
  double e_mu = 0.0;
  double e_var = 0.0;
  BiasBranch var_branch = BiasBranch::kNoClipping;
};

enum class BiasTarget { kMean, kVariance };

// Bias from totals: n = sum m_l, retained = sum Gamma_l, 0 < retained <= n.
BiasReport BiasFromTotals(int64_t total, int64_t retained, double bound_u);

// Errors: InvalidPlan (length mismatch, Gamma_l outside [0, m_l], or nothing
// retained).
absl::StatusOr<double> MeanBias(std::span<const int64_t> counts,
                                std::span<const int64_t> retained,
                                double bound_u);
absl::StatusOr<BiasReport> VarianceBias(std::span<const int64_t> counts,
                                        std::span<const int64_t> retained,
                                        double bound_u);

// A concrete single-grid dataset (grid "g", zero-padded users "u1".."uL" whose token order is the input order)
// whose clipping bias for `target` equals the closed form. Samples take only
// the values 0 and U. Errors: InvalidPlan, also when Gamma == m.
absl::StatusOr<Dataset> ExtremalBiasDataset(std::span<const int64_t> counts,
                                            std::span<const int64_t> retained,
                                            double bound_u, BiasTarget target);

// |mu(D) - mu_clip(D)| and |Var(D) - Var_clip(D)| for one grid of a dataset,
// with the first Gamma_l samples of each user retained. `retained` follows the
// user order of Dataset::GridSamples. Errors: InvalidPlan.
absl::StatusOr<BiasReport> MeasuredBias(const std::vector<UserSamples>& users,
                                        std::span<const int64_t> retained);

}  // namespace dpcomposer

#endif  // DPCOMPOSER_WORST_CASE_BIAS_H_
