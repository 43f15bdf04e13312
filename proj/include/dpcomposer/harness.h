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

// Experiment drivers: Monte Carlo privacy and error curves over synthetic
// occupancies, mean-absolute-error evaluation of the release mechanisms and
// scaling-law checks.

#ifndef DPCOMPOSER_HARNESS_H_
#define DPCOMPOSER_HARNESS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcomposer/composition.h"
#include "dpcomposer/dataset.h"
#include "dpcomposer/grouping.h"
#include "dpcomposer/mechanisms.h"
#include "dpcomposer/output.h"
#include "dpcomposer/synth.h"

namespace dpcomposer {

// 0.1, 0.2, ..., 2.0.
std::vector<double> DefaultEpsilonGrid();

struct ExperimentConfig {
  std::vector<double> epsilons = DefaultEpsilonGrid();
  int64_t trials = 10;
  uint64_t seed = 0;
};

// Errors: InvalidParams.
absl::Status ValidateConfig(const ExperimentConfig& config);

struct CurvePoint {
  double epsilon = 0.0;
  double value = 0.0;
  std::string label;
};

Table CurveTable(const std::vector<CurvePoint>& points);

// Worker count for n independent tasks: DP_COMPOSER_THREADS if set to a
// positive integer, otherwise the hardware concurrency; at most n.
int WorkerCount(int64_t tasks);

// Calls fn(i) for every i in [0, n), spread over WorkerCount(n) threads.
void ParallelFor(int64_t n, const std::function<void(int64_t)>& fn);

// K * eps ("clip_user") and G_1 * eps ("naive") for one occupancy.
absl::StatusOr<std::vector<CurvePoint>> PrivacyCurve(
    const OccupancyArray& occupancy, double bound_u,
    std::span<const double> epsilons, const ClipUserOptions& options = {});

// E-bar after pseudo-user re-optimization ("pseudo_user") and the original
// E ("original") for one occupancy.
absl::StatusOr<std::vector<CurvePoint>> ErrorCurve(
    const OccupancyArray& occupancy, double bound_u,
    std::span<const double> epsilons, const ClipUserOptions& options = {});

// Averages of PrivacyCurve / ErrorCurve over config.trials occupancies, trial
// i drawn from RngStream(config.seed).Split("trial-i"). params.seed is not
// used.
absl::StatusOr<std::vector<CurvePoint>> MonteCarloPrivacy(
    const SynthParams& params, const ExperimentConfig& config,
    const ClipUserOptions& options = {});
absl::StatusOr<std::vector<CurvePoint>> MonteCarloError(
    const SynthParams& params, const ExperimentConfig& config,
    const ClipUserOptions& options = {});

enum class MechanismKind {
  kBaseline,
  kArrayAverage,
  kLevy,
  kFixedQuantile,
  kOptimizedQuantile,
};

enum class MubChoice { kMedian, kOptimized };

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kBaseline;
  GroupingStrategy strategy = GroupingStrategy::kBestFit;  // ArrayAverage
  MubChoice mub = MubChoice::kOptimized;                   // ArrayAverage
  double gamma = 0.2;                                      // Levy
};

// "baseline", "array_average", "levy", "fixed_quantile",
// "optimized_quantile". Errors: UsageError.
absl::StatusOr<MechanismKind> ParseMechanismKind(const std::string& name);
std::string MechanismLabel(const MechanismSpec& spec);

// One release of the grid's mean.
absl::StatusOr<MechanismOutput> RunMechanism(
    const MechanismSpec& spec, const std::vector<UserSamples>& users,
    double epsilon, double bound_u, RngStream& rng);

// Per epsilon, (1/N) sum |M(D) - mu(D)| over N = config.trials releases.
// Baseline is reported analytically as Delta_mu / eps.
absl::StatusOr<std::vector<CurvePoint>> MaeEval(
    const MechanismSpec& spec, const std::vector<UserSamples>& users,
    double bound_u, const ExperimentConfig& config);

struct LawResult {
  std::string law;
  int64_t lambda = 1;
  bool applicable = true;
  bool passed = true;
  double expected = 0.0;
  double actual = 0.0;
};

struct ScalingReport {
  std::vector<LawResult> laws;
  int64_t failures = 0;
};

// Sample scaling (every count times lambda) and user scaling (every user
// replicated lambda times) laws for m_UB, K, Kbar and the sensitivities.
// Errors: InvalidParams.
absl::StatusOr<ScalingReport> CheckScalingLaws(std::span<const int64_t> counts,
                                               std::span<const int64_t> lambdas,
                                               double bound_u = 1.0,
                                               double gamma = 0.2);

Table ScalingTable(const ScalingReport& report);

}  // namespace dpcomposer

#endif  // DPCOMPOSER_HARNESS_H_
