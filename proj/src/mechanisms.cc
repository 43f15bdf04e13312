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

#include "dpcomposer/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpcomposer/kernels.h"
#include "dpcomposer/sensitivity.h"
#include "dpcomposer/status_macros.h"

namespace dpcomposer {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMaxBins = 1e7;

absl::Status CheckParams(const MechanismParams& params) {
  if (!(params.epsilon > 0.0) || !std::isfinite(params.epsilon)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidParams: epsilon must be positive and finite, got ",
        params.epsilon));
  }
  if (!(params.bound_u > 0.0) || !std::isfinite(params.bound_u)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidParams: U must be positive, got ", params.bound_u));
  }
  if (!(params.gamma > 0.0 && params.gamma < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidParams: gamma must lie in (0, 1), got ", params.gamma));
  }
  return absl::OkStatus();
}

absl::Status CheckNonEmpty(const std::vector<UserSamples>& users) {
  for (const UserSamples& u : users) {
    if (!u.values.empty()) return absl::OkStatus();
  }
  return absl::InvalidArgumentError("EmptyGrid: grid has no samples");
}

std::vector<int64_t> CountsOf(const std::vector<UserSamples>& users) {
  std::vector<int64_t> counts;
  counts.reserve(users.size());
  for (const UserSamples& u : users) {
    if (!u.values.empty()) {
      counts.push_back(static_cast<int64_t>(u.values.size()));
    }
  }
  return counts;
}

std::vector<double> Flatten(const std::vector<UserSamples>& users) {
  std::vector<double> all;
  for (const UserSamples& u : users) {
    all.insert(all.end(), u.values.begin(), u.values.end());
  }
  return all;
}

// Mean and variance releases with budget eps/2 each, shared by Baseline and
// Clip.
absl::StatusOr<MechanismOutput> ReleaseMoments(
    const std::vector<double>& values, const SensitivityReport& sens,
    const MechanismParams& params, RngStream& rng) {
  const GridStats stats = ComputeStats(values);
  MechanismOutput out;
  out.mean_estimate = stats.mean;
  out.variance_estimate = stats.variance;
  out.noise_scale_mean = 2.0 * sens.delta_mu / params.epsilon;
  out.noise_scale_var = 2.0 * sens.delta_var / params.epsilon;
  DPC_ASSIGN_OR_RETURN(const double z_mean,
                       SampleLaplace(rng, out.noise_scale_mean));
  DPC_ASSIGN_OR_RETURN(const double z_var,
                       SampleLaplace(rng, *out.noise_scale_var));
  out.noisy_mean = stats.mean + z_mean;
  out.noisy_variance = stats.variance + z_var;
  out.budget_split = {params.epsilon / 2.0, params.epsilon / 2.0};
  return out;
}

struct BestFitMeans {
  int64_t m_ub = 0;
  ArrayMeans means;
};

absl::StatusOr<BestFitMeans> OptimizedBestFitMeans(
    const std::vector<UserSamples>& users) {
  BestFitMeans out;
  out.m_ub = OptimizedMub(CountsOf(users));
  DPC_ASSIGN_OR_RETURN(const ArrayGroup group, BestFit(users, out.m_ub));
  out.means = ComputeArrayMeans(group);
  return out;
}

}  // namespace

absl::StatusOr<double> SampleLaplace(RngStream& rng, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NonPositiveScale: Laplace scale ", scale));
  }
  return rng.Laplace(scale);
}

absl::StatusOr<MechanismOutput> BaselineRelease(
    const std::vector<UserSamples>& users, const MechanismParams& params,
    RngStream& rng) {
  DPC_RETURN_IF_ERROR(CheckParams(params));
  DPC_RETURN_IF_ERROR(CheckNonEmpty(users));
  DPC_ASSIGN_OR_RETURN(const SensitivityReport sens,
                       VarianceSensitivity(CountsOf(users), params.bound_u));
  return ReleaseMoments(Flatten(users), sens, params, rng);
}

absl::StatusOr<MechanismOutput> ClipRelease(
    const std::vector<UserSamples>& users,
    const std::map<std::string, int64_t>& retained,
    const MechanismParams& params, RngStream& rng) {
  DPC_RETURN_IF_ERROR(CheckParams(params));
  std::vector<double> kept;
  std::vector<int64_t> gamma;
  for (const UserSamples& u : users) {
    const int64_t m = static_cast<int64_t>(u.values.size());
    int64_t g = m;
    if (auto it = retained.find(u.user); it != retained.end()) g = it->second;
    if (g < 0 || g > m) {
      return absl::InvalidArgumentError(absl::StrCat(
          "InvalidPlan: retained ", g, " outside [0, ", m, "] for ", u.user));
    }
    kept.insert(kept.end(), u.values.begin(), u.values.begin() + g);
    gamma.push_back(g);
  }
  DPC_ASSIGN_OR_RETURN(const SensitivityReport sens,
                       ClippedVarianceSensitivity(gamma, params.bound_u));
  return ReleaseMoments(kept, sens, params, rng);
}

absl::StatusOr<MechanismOutput> ArrayAverageRelease(
    const std::vector<UserSamples>& users, int64_t m_ub,
    const MechanismParams& params, RngStream& rng) {
  DPC_RETURN_IF_ERROR(CheckParams(params));
  DPC_RETURN_IF_ERROR(CheckNonEmpty(users));
  DPC_ASSIGN_OR_RETURN(const ArrayGroup group,
                       GroupSamples(params.strategy, users, m_ub));
  if (group.arrays.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidCapacity: m_UB ", m_ub, " produced no full arrays"));
  }
  const ArrayMeans means = ComputeArrayMeans(group);
  const int64_t count = static_cast<int64_t>(means.means.size());
  MechanismOutput out;
  out.num_arrays = count;
  out.m_ub = m_ub;
  out.mean_estimate = Sum(means.means) / static_cast<double>(count);
  out.noise_scale_mean =
      ArrayAverageSensitivity(params.strategy, count, params.bound_u) /
      params.epsilon;
  DPC_ASSIGN_OR_RETURN(const double z, SampleLaplace(rng, out.noise_scale_mean));
  out.noisy_mean = out.mean_estimate + z;
  out.budget_split = {params.epsilon};
  return out;
}

absl::StatusOr<IntervalCosts> ComputeIntervalCosts(
    std::span<const double> means, double tau, double bound_u) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NoBins: tau must be positive, got ", tau));
  }
  if (!(bound_u > 0.0)) {
    return absl::InvalidArgumentError("InvalidParams: U must be positive");
  }
  const double raw_bins = std::ceil(bound_u / tau);
  if (raw_bins > kMaxBins) {
    return absl::InvalidArgumentError(
        absl::StrCat("NoBins: tau ", tau, " yields too many bins"));
  }
  const int64_t num_bins = std::max<int64_t>(1, static_cast<int64_t>(raw_bins));
  IntervalCosts out;
  out.midpoints.reserve(num_bins);
  for (int64_t i = 0; i < num_bins; ++i) {
    const double lo = static_cast<double>(i) * tau;
    const double hi = std::min(static_cast<double>(i + 1) * tau, bound_u);
    out.midpoints.push_back(0.5 * (lo + hi));
  }
  // Histogram of nearest-midpoint bins; ties go to the lower midpoint.
  std::vector<int64_t> hist(num_bins, 0);
  for (double x : means) {
    int64_t k = static_cast<int64_t>(std::ceil(x / tau)) - 1;
    k = std::clamp<int64_t>(k, 0, num_bins - 1);
    int64_t best = k;
    for (int64_t c = std::max<int64_t>(0, k - 1);
         c <= std::min<int64_t>(num_bins - 1, k + 1); ++c) {
      const double dc = std::abs(x - out.midpoints[c]);
      const double db = std::abs(x - out.midpoints[best]);
      if (dc < db || (dc == db && c < best)) best = c;
    }
    ++hist[best];
  }
  const int64_t total = static_cast<int64_t>(means.size());
  out.costs.resize(num_bins);
  int64_t below = 0;
  for (int64_t i = 0; i < num_bins; ++i) {
    const int64_t above = total - below - hist[i];
    out.costs[i] = std::max(below, above);
    below += hist[i];
  }
  return out;
}

absl::StatusOr<IntervalEstimate> PrivateInterval(std::span<const double> means,
                                                 double eps_half, double tau,
                                                 double bound_u,
                                                 RngStream& rng) {
  if (!(eps_half > 0.0) || !std::isfinite(eps_half)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidParams: epsilon must be positive, got ", eps_half));
  }
  if (means.empty()) {
    return absl::InvalidArgumentError("EmptyGrid: no array means");
  }
  DPC_ASSIGN_OR_RETURN(const IntervalCosts costs,
                       ComputeIntervalCosts(means, tau, bound_u));
  std::vector<double> log_weights;
  log_weights.reserve(costs.costs.size());
  for (int64_t c : costs.costs) {
    log_weights.push_back(-eps_half * static_cast<double>(c) / 2.0);
  }
  const double center = costs.midpoints[rng.Categorical(log_weights)];
  return IntervalEstimate{std::max(0.0, center - 1.5 * tau),
                          std::min(center + 1.5 * tau, bound_u)};
}

double ConcentrationTau(double bound_u, int64_t kbar, double gamma,
                        int64_t m_ub) {
  return bound_u * std::sqrt(std::log(2.0 * static_cast<double>(kbar) / gamma) /
                             (2.0 * static_cast<double>(m_ub)));
}

double LevyHeuristicSensitivity(double bound_u, int64_t kbar, double gamma,
                                int64_t m_ub) {
  const double tau = ConcentrationTau(bound_u, kbar, gamma, m_ub);
  return std::min(3.0 * tau, bound_u) / static_cast<double>(kbar);
}

absl::StatusOr<MechanismOutput> LevyRelease(
    const std::vector<UserSamples>& users, const MechanismParams& params,
    RngStream& rng) {
  DPC_RETURN_IF_ERROR(CheckParams(params));
  DPC_RETURN_IF_ERROR(CheckNonEmpty(users));
  DPC_ASSIGN_OR_RETURN(const BestFitMeans grouped,
                       OptimizedBestFitMeans(users));
  const std::vector<double>& means = grouped.means.means;
  const int64_t kbar = static_cast<int64_t>(means.size());
  const double tau =
      ConcentrationTau(params.bound_u, kbar, params.gamma, grouped.m_ub);
  DPC_ASSIGN_OR_RETURN(
      const IntervalEstimate interval,
      PrivateInterval(means, params.epsilon / 2.0, tau, params.bound_u, rng));
  MechanismOutput out;
  out.num_arrays = kbar;
  out.m_ub = grouped.m_ub;
  out.interval = interval;
  out.mean_estimate = ClampedSum(means, interval.lo, interval.hi) /
                      static_cast<double>(kbar);
  const double sensitivity =
      (interval.hi - interval.lo) / static_cast<double>(kbar);
  out.noise_scale_mean = 2.0 * sensitivity / params.epsilon;
  out.noisy_mean = out.mean_estimate;
  // A degenerate interval has zero sensitivity: nothing to add.
  if (out.noise_scale_mean > 0.0) {
    DPC_ASSIGN_OR_RETURN(const double z,
                         SampleLaplace(rng, out.noise_scale_mean));
    out.noisy_mean += z;
  }
  out.budget_split = {params.epsilon / 2.0, params.epsilon / 2.0};
  return out;
}

QuantileGaps ComputeQuantileGaps(std::span<const double> values, double q,
                                 double eps_q, double bound_u) {
  std::vector<double> sorted(values.begin(), values.end());
  for (double& v : sorted) v = Project(v, 0.0, bound_u);
  std::sort(sorted.begin(), sorted.end());
  const int64_t n = static_cast<int64_t>(sorted.size());
  const double target = q * static_cast<double>(n);
  QuantileGaps gaps;
  gaps.lo.reserve(n + 1);
  gaps.hi.reserve(n + 1);
  gaps.log_mass.reserve(n + 1);
  for (int64_t i = 0; i <= n; ++i) {
    const double lo = i == 0 ? 0.0 : sorted[i - 1];
    const double hi = i == n ? bound_u : sorted[i];
    const double width = hi - lo;
    gaps.lo.push_back(lo);
    gaps.hi.push_back(hi);
    gaps.log_mass.push_back(
        width > 0.0 ? std::log(width) -
                          (eps_q / 2.0) *
                              std::abs(static_cast<double>(i) - target)
                    : kNegInf);
  }
  return gaps;
}

absl::StatusOr<double> PrivateQuantile(std::span<const double> values,
                                       double q, double eps_q, double bound_u,
                                       RngStream& rng) {
  if (values.empty()) {
    return absl::InvalidArgumentError("EmptyValues: no values");
  }
  if (!(q >= 0.0 && q <= 1.0) || !(eps_q > 0.0) || !std::isfinite(eps_q) ||
      !(bound_u > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidParams: q=", q, " eps=", eps_q, " U=", bound_u));
  }
  const QuantileGaps gaps = ComputeQuantileGaps(values, q, eps_q, bound_u);
  const size_t i = rng.Categorical(gaps.log_mass);
  return gaps.lo[i] + rng.Uniform01() * (gaps.hi[i] - gaps.lo[i]);
}

OptimizedRank ComputeOptimizedRank(double epsilon, int64_t kbar) {
  OptimizedRank rank;
  const int64_t wanted =
      std::max<int64_t>(1, static_cast<int64_t>(std::ceil(2.0 / epsilon - 1e-9)));
  const int64_t limit = std::max<int64_t>(1, (kbar - 1) / 2);
  rank.t = std::min(wanted, limit);
  rank.degenerate = wanted > limit;
  const double level = static_cast<double>(rank.t) / static_cast<double>(kbar);
  rank.lower_level = std::min(level, 0.5);
  rank.upper_level = std::max(1.0 - level, 0.5);
  if (level > 0.5) rank.degenerate = true;
  return rank;
}

absl::StatusOr<MechanismOutput> QuantileRelease(
    const std::vector<UserSamples>& users, const MechanismParams& params,
    QuantileMode mode, RngStream& rng) {
  DPC_RETURN_IF_ERROR(CheckParams(params));
  DPC_RETURN_IF_ERROR(CheckNonEmpty(users));
  DPC_ASSIGN_OR_RETURN(const BestFitMeans grouped,
                       OptimizedBestFitMeans(users));
  const std::vector<double>& means = grouped.means.means;
  const int64_t kbar = static_cast<int64_t>(means.size());
  MechanismOutput out;
  double lower_level = 0.1;
  double upper_level = 0.9;
  if (mode == QuantileMode::kOptimized) {
    const OptimizedRank rank = ComputeOptimizedRank(params.epsilon, kbar);
    lower_level = rank.lower_level;
    upper_level = rank.upper_level;
    out.degenerate_ranks = rank.degenerate;
  }
  const double eps_quarter = params.epsilon / 4.0;
  DPC_ASSIGN_OR_RETURN(
      double a, PrivateQuantile(means, lower_level, eps_quarter,
                                params.bound_u, rng));
  DPC_ASSIGN_OR_RETURN(
      double b, PrivateQuantile(means, upper_level, eps_quarter,
                                params.bound_u, rng));
  if (a > b) std::swap(a, b);
  out.num_arrays = kbar;
  out.m_ub = grouped.m_ub;
  out.interval = IntervalEstimate{a, b};
  out.mean_estimate = ClampedSum(means, a, b) / static_cast<double>(kbar);
  out.noise_scale_mean =
      2.0 * (b - a) / (static_cast<double>(kbar) * params.epsilon);
  out.noisy_mean = out.mean_estimate;
  if (out.noise_scale_mean > 0.0) {
    DPC_ASSIGN_OR_RETURN(const double z,
                         SampleLaplace(rng, out.noise_scale_mean));
    out.noisy_mean += z;
  }
  out.budget_split = {eps_quarter, eps_quarter, params.epsilon / 2.0};
  return out;
}

}  // namespace dpcomposer
