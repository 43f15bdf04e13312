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

// Laplace-based release mechanisms for one grid: Baseline, Clip,
// Array-Averaging, Levy and Quantile, plus the private interval and private
// quantile subroutines they use.

#ifndef DPCOMPOSER_MECHANISMS_H_
#define DPCOMPOSER_MECHANISMS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcomposer/dataset.h"
#include "dpcomposer/grouping.h"
#include "dpcomposer/rng.h"

namespace dpcomposer {

struct MechanismParams {
  double epsilon = 1.0;  // total budget for the grid
  double bound_u = 1.0;
  double gamma = 0.2;  // concentration failure probability (Levy)
  GroupingStrategy strategy = GroupingStrategy::kBestFit;
};

struct IntervalEstimate {
  double lo = 0.0;
  double hi = 0.0;
};

struct MechanismOutput {
  double noisy_mean = 0.0;
  double mean_estimate = 0.0;  // estimator value before noise
  double noise_scale_mean = 0.0;
  std::optional<double> noisy_variance;
  std::optional<double> variance_estimate;
  std::optional<double> noise_scale_var;
  std::optional<IntervalEstimate> interval;
  // Budget spent by each randomized step, in order. Sums to epsilon.
  std::vector<double> budget_split;
  // Pseudo-user arrays used (array-based mechanisms only).
  int64_t num_arrays = 0;
  int64_t m_ub = 0;
  // Set when OptimizedQuantile had to clamp its rank to keep a' <= b'.
  bool degenerate_ranks = false;
};

enum class QuantileMode { kFixed, kOptimized };

// Laplace(0, scale) draw. Errors: NonPositiveScale.
absl::StatusOr<double> SampleLaplace(RngStream& rng, double scale);

// min(hi, max(lo, x)).
inline double Project(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

// Mean + Lap(2 Delta_mu / eps) and variance + Lap(2 Delta_Var / eps), each
// with budget eps/2. Errors: EmptyGrid, InvalidParams.
absl::StatusOr<MechanismOutput> BaselineRelease(
    const std::vector<UserSamples>& users, const MechanismParams& params,
    RngStream& rng);

// Like Baseline but on the first Gamma_l samples of each user, with the
// clipped sensitivities. `retained` maps user -> Gamma_l; users missing from
// it keep all samples. Errors: ZeroRetained, InvalidPlan, InvalidParams.
absl::StatusOr<MechanismOutput> ClipRelease(
    const std::vector<UserSamples>& users,
    const std::map<std::string, int64_t>& retained,
    const MechanismParams& params, RngStream& rng);

// Mean of array means + Lap(Delta / eps), Delta = 2U/K (WrapAround) or U/Kbar
// (BestFit), full budget on the mean. Errors: EmptyGrid, InvalidCapacity.
absl::StatusOr<MechanismOutput> ArrayAverageRelease(
    const std::vector<UserSamples>& users, int64_t m_ub,
    const MechanismParams& params, RngStream& rng);

// Bin midpoints over (0, U] with width tau (last bin may be shorter) and the
// cost c(x) = max(#{mu_i < x}, #{mu_i > x}) where mu_i is the midpoint
// nearest to each mean.
struct IntervalCosts {
  std::vector<double> midpoints;
  std::vector<int64_t> costs;
};
absl::StatusOr<IntervalCosts> ComputeIntervalCosts(
    std::span<const double> means, double tau, double bound_u);

// Exponential-mechanism interval: picks a midpoint x with probability
// proportional to exp(-eps_half * c(x) / 2) and returns
// [max(0, x - 3tau/2), min(x + 3tau/2, U)]. Errors: NoBins,
// InvalidParams, EmptyGrid.
absl::StatusOr<IntervalEstimate> PrivateInterval(std::span<const double> means,
                                                 double eps_half, double tau,
                                                 double bound_u,
                                                 RngStream& rng);

// U sqrt(ln(2 Kbar / gamma) / (2 m_UB)).
double ConcentrationTau(double bound_u, int64_t kbar, double gamma,
                        int64_t m_ub);

// min(3 tau, U) / Kbar for the given m_UB.
double LevyHeuristicSensitivity(double bound_u, int64_t kbar, double gamma,
                                int64_t m_ub);

// BestFit arrays at the optimized m_UB, private interval with eps/2, mean of
// projected array means + Lap(2 (b - a) / (Kbar eps)). Errors: EmptyGrid,
// InvalidParams.
absl::StatusOr<MechanismOutput> LevyRelease(
    const std::vector<UserSamples>& users, const MechanismParams& params,
    RngStream& rng);

// Exponential mechanism over the gaps between sorted values (with sentinels
// 0 and U): gap i, between the i-th and (i+1)-th order statistic, has mass
// width * exp(-(eps_q / 2) |i - q n|); the output is uniform in the chosen
// gap. Errors: EmptyValues, InvalidParams.
absl::StatusOr<double> PrivateQuantile(std::span<const double> values,
                                       double q, double eps_q, double bound_u,
                                       RngStream& rng);

// Log-masses of the gaps used by PrivateQuantile, with their endpoints.
struct QuantileGaps {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> log_mass;  // -inf for empty gaps
};
QuantileGaps ComputeQuantileGaps(std::span<const double> values, double q,
                                 double eps_q, double bound_u);

// Noisy mean of projections onto a privately estimated [a', b']: budget
// eps/4 for each endpoint and eps/2 for the mean. Fixed mode estimates the
// (0.1, 0.9) quantiles; Optimized mode the (t/Kbar, 1 - t/Kbar) quantiles
// with t = ceil(2/eps). Errors: EmptyGrid, InvalidParams.
absl::StatusOr<MechanismOutput> QuantileRelease(
    const std::vector<UserSamples>& users, const MechanismParams& params,
    QuantileMode mode, RngStream& rng);

// Rank used by OptimizedQuantile and whether it had to be clamped.
struct OptimizedRank {
  int64_t t = 1;
  double lower_level = 0.0;
  double upper_level = 1.0;
  bool degenerate = false;
};
OptimizedRank ComputeOptimizedRank(double epsilon, int64_t kbar);

}  // namespace dpcomposer

#endif  // DPCOMPOSER_MECHANISMS_H_
