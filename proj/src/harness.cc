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

#include "dpcomposer/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <thread>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "dpcomposer/kernels.h"
#include "dpcomposer/sensitivity.h"
#include "dpcomposer/status_macros.h"

namespace dpcomposer {
namespace {

std::vector<int64_t> CountsOf(const std::vector<UserSamples>& users) {
  std::vector<int64_t> counts;
  for (const UserSamples& u : users) {
    if (!u.values.empty()) {
      counts.push_back(static_cast<int64_t>(u.values.size()));
    }
  }
  return counts;
}

// Runs per-trial curves in parallel and averages them in trial order.
absl::StatusOr<std::vector<CurvePoint>> AverageCurves(
    const ExperimentConfig& config,
    const std::function<absl::StatusOr<std::vector<CurvePoint>>(int64_t)>&
        trial) {
  DPC_RETURN_IF_ERROR(ValidateConfig(config));
  std::vector<std::optional<absl::StatusOr<std::vector<CurvePoint>>>> results(
      config.trials);
  ParallelFor(config.trials, [&](int64_t i) { results[i] = trial(i); });
  std::vector<CurvePoint> mean;
  for (int64_t i = 0; i < config.trials; ++i) {
    DPC_ASSIGN_OR_RETURN(const std::vector<CurvePoint> points,
                         std::move(*results[i]));
    if (i == 0) {
      mean = points;
      continue;
    }
    for (size_t k = 0; k < mean.size(); ++k) mean[k].value += points[k].value;
  }
  for (CurvePoint& p : mean) p.value /= static_cast<double>(config.trials);
  return mean;
}

bool NearlyEqual(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

void AddLaw(ScalingReport& report, std::string law, int64_t lambda,
            double expected, double actual, bool applicable = true) {
  LawResult r;
  r.law = std::move(law);
  r.lambda = lambda;
  r.applicable = applicable;
  r.expected = expected;
  r.actual = actual;
  r.passed = !applicable || NearlyEqual(expected, actual);
  if (!r.passed) ++report.failures;
  report.laws.push_back(std::move(r));
}

}  // namespace

std::vector<double> DefaultEpsilonGrid() {
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(k / 10.0);
  return grid;
}

absl::Status ValidateConfig(const ExperimentConfig& config) {
  if (config.trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidParams: trials must be >= 1, got ",
                     config.trials));
  }
  if (config.epsilons.empty()) {
    return absl::InvalidArgumentError("InvalidParams: empty epsilon grid");
  }
  for (size_t i = 0; i < config.epsilons.size(); ++i) {
    const double e = config.epsilons[i];
    if (!(e > 0.0) || !std::isfinite(e) ||
        (i > 0 && !(e > config.epsilons[i - 1]))) {
      return absl::InvalidArgumentError(
          "InvalidParams: epsilons must be positive, finite and increasing");
    }
  }
  return absl::OkStatus();
}

Table CurveTable(const std::vector<CurvePoint>& points) {
  Table table;
  table.columns = {"epsilon", "value", "label"};
  for (const CurvePoint& p : points) {
    table.AddRow({p.epsilon, p.value, p.label});
  }
  return table;
}

int WorkerCount(int64_t tasks) {
  int64_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DP_COMPOSER_THREADS")) {
    int64_t v = 0;
    if (absl::SimpleAtoi(env, &v) && v > 0) workers = v;
  }
  return static_cast<int>(std::max<int64_t>(1, std::min(workers, tasks)));
}

void ParallelFor(int64_t n, const std::function<void(int64_t)>& fn) {
  const int workers = WorkerCount(n);
  if (workers <= 1) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (int64_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread& t : threads) t.join();
}

absl::StatusOr<std::vector<CurvePoint>> PrivacyCurve(
    const OccupancyArray& occupancy, double bound_u,
    std::span<const double> epsilons, const ClipUserOptions& options) {
  std::vector<CurvePoint> points;
  for (double eps : epsilons) {
    DPC_ASSIGN_OR_RETURN(const ClipUserResult r,
                         ClipUser(occupancy, bound_u, eps, options));
    points.push_back({eps, static_cast<double>(r.k_factor) * eps, "clip_user"});
    points.push_back({eps, UniformPrivacyLoss(occupancy, eps), "naive"});
  }
  return points;
}

absl::StatusOr<std::vector<CurvePoint>> ErrorCurve(
    const OccupancyArray& occupancy, double bound_u,
    std::span<const double> epsilons, const ClipUserOptions& options) {
  std::vector<CurvePoint> points;
  for (double eps : epsilons) {
    DPC_ASSIGN_OR_RETURN(const ClipUserResult r,
                         ClipUser(occupancy, bound_u, eps, options));
    DPC_ASSIGN_OR_RETURN(const PseudoUserResult p,
                         PseudoUserOptimize(occupancy, r.plan, bound_u, eps));
    points.push_back({eps, p.new_error, "pseudo_user"});
    points.push_back({eps, r.error_cap, "original"});
  }
  return points;
}

absl::StatusOr<std::vector<CurvePoint>> MonteCarloPrivacy(
    const SynthParams& params, const ExperimentConfig& config,
    const ClipUserOptions& options) {
  const RngStream root(config.seed);
  return AverageCurves(
      config, [&](int64_t i) -> absl::StatusOr<std::vector<CurvePoint>> {
        RngStream rng = root.Split(absl::StrCat("trial-", i));
        DPC_ASSIGN_OR_RETURN(const SynthOccupancy occ,
                             GenerateOccupancy(params, rng));
        return PrivacyCurve(occ.occupancy, params.bound_u, config.epsilons,
                            options);
      });
}

absl::StatusOr<std::vector<CurvePoint>> MonteCarloError(
    const SynthParams& params, const ExperimentConfig& config,
    const ClipUserOptions& options) {
  const RngStream root(config.seed);
  return AverageCurves(
      config, [&](int64_t i) -> absl::StatusOr<std::vector<CurvePoint>> {
        RngStream rng = root.Split(absl::StrCat("trial-", i));
        DPC_ASSIGN_OR_RETURN(const SynthOccupancy occ,
                             GenerateOccupancy(params, rng));
        return ErrorCurve(occ.occupancy, params.bound_u, config.epsilons,
                          options);
      });
}

absl::StatusOr<MechanismKind> ParseMechanismKind(const std::string& name) {
  if (name == "baseline") return MechanismKind::kBaseline;
  if (name == "array_average") return MechanismKind::kArrayAverage;
  if (name == "levy") return MechanismKind::kLevy;
  if (name == "fixed_quantile") return MechanismKind::kFixedQuantile;
  if (name == "optimized_quantile") return MechanismKind::kOptimizedQuantile;
  return absl::InvalidArgumentError(
      absl::StrCat("UsageError: unknown mechanism '", name, "'"));
}

std::string MechanismLabel(const MechanismSpec& spec) {
  switch (spec.kind) {
    case MechanismKind::kBaseline:
      return "baseline";
    case MechanismKind::kArrayAverage:
      return absl::StrCat(
          "array_average_",
          spec.strategy == GroupingStrategy::kWrapAround ? "wrap" : "best",
          "_", spec.mub == MubChoice::kMedian ? "median" : "optimized");
    case MechanismKind::kLevy:
      return "levy";
    case MechanismKind::kFixedQuantile:
      return "fixed_quantile";
    case MechanismKind::kOptimizedQuantile:
      return "optimized_quantile";
  }
  return "unknown";
}

absl::StatusOr<MechanismOutput> RunMechanism(
    const MechanismSpec& spec, const std::vector<UserSamples>& users,
    double epsilon, double bound_u, RngStream& rng) {
  MechanismParams params;
  params.epsilon = epsilon;
  params.bound_u = bound_u;
  params.gamma = spec.gamma;
  params.strategy = spec.strategy;
  switch (spec.kind) {
    case MechanismKind::kBaseline:
      return BaselineRelease(users, params, rng);
    case MechanismKind::kArrayAverage: {
      const std::vector<int64_t> counts = CountsOf(users);
      if (counts.empty()) {
        return absl::InvalidArgumentError("EmptyGrid: grid has no samples");
      }
      const int64_t m_ub = spec.mub == MubChoice::kMedian
                               ? MedianMub(counts)
                               : OptimizedMub(counts);
      return ArrayAverageRelease(users, m_ub, params, rng);
    }
    case MechanismKind::kLevy:
      return LevyRelease(users, params, rng);
    case MechanismKind::kFixedQuantile:
      return QuantileRelease(users, params, QuantileMode::kFixed, rng);
    case MechanismKind::kOptimizedQuantile:
      return QuantileRelease(users, params, QuantileMode::kOptimized, rng);
  }
  return absl::InvalidArgumentError("UsageError: unknown mechanism");
}

absl::StatusOr<std::vector<CurvePoint>> MaeEval(
    const MechanismSpec& spec, const std::vector<UserSamples>& users,
    double bound_u, const ExperimentConfig& config) {
  DPC_RETURN_IF_ERROR(ValidateConfig(config));
  std::vector<double> all;
  for (const UserSamples& u : users) {
    all.insert(all.end(), u.values.begin(), u.values.end());
  }
  if (all.empty()) {
    return absl::InvalidArgumentError("EmptyDataset: no samples");
  }
  const double truth = ComputeStats(all).mean;
  const std::string label = MechanismLabel(spec);
  std::vector<CurvePoint> points;
  if (spec.kind == MechanismKind::kBaseline) {
    DPC_ASSIGN_OR_RETURN(const double delta,
                         MeanSensitivity(CountsOf(users), bound_u));
    for (double eps : config.epsilons) {
      points.push_back({eps, delta / eps, label});
    }
    return points;
  }
  const RngStream root = RngStream(config.seed).Split(label);
  for (size_t e = 0; e < config.epsilons.size(); ++e) {
    const double eps = config.epsilons[e];
    const RngStream eps_root = root.Split(static_cast<uint64_t>(e));
    std::vector<double> errors(config.trials, 0.0);
    std::vector<absl::Status> statuses(config.trials);
    ParallelFor(config.trials, [&](int64_t i) {
      RngStream rng = eps_root.Split(static_cast<uint64_t>(i));
      absl::StatusOr<MechanismOutput> out =
          RunMechanism(spec, users, eps, bound_u, rng);
      if (!out.ok()) {
        statuses[i] = out.status();
        return;
      }
      errors[i] = std::abs(out->noisy_mean - truth);
    });
    for (const absl::Status& s : statuses) DPC_RETURN_IF_ERROR(s);
    points.push_back(
        {eps, Sum(errors) / static_cast<double>(config.trials), label});
  }
  return points;
}

absl::StatusOr<ScalingReport> CheckScalingLaws(std::span<const int64_t> counts,
                                               std::span<const int64_t> lambdas,
                                               double bound_u, double gamma) {
  if (counts.empty() ||
      std::any_of(counts.begin(), counts.end(),
                  [](int64_t m) { return m < 1; })) {
    return absl::InvalidArgumentError(
        "InvalidParams: counts must be non-empty and positive");
  }
  if (!(bound_u > 0.0) || !(gamma > 0.0 && gamma < 1.0)) {
    return absl::InvalidArgumentError("InvalidParams: U or gamma out of range");
  }
  const std::vector<int64_t> base(counts.begin(), counts.end());
  const int64_t mub = OptimizedMub(base);
  const int64_t k = ArrayCountK(base, mub);
  DPC_ASSIGN_OR_RETURN(const int64_t kbar, BestFitArrayCount(base, mub));
  DPC_ASSIGN_OR_RETURN(const double delta_mu, MeanSensitivity(base, bound_u));
  const double tau = ConcentrationTau(bound_u, kbar, gamma, mub);
  const bool tau_branch = 3.0 * tau < bound_u;
  const double delta_levy = LevyHeuristicSensitivity(bound_u, kbar, gamma, mub);

  ScalingReport report;
  for (int64_t lambda : lambdas) {
    if (lambda < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("InvalidParams: lambda must be >= 1, got ", lambda));
    }
    const double l = static_cast<double>(lambda);

    std::vector<int64_t> sample = base;
    for (int64_t& m : sample) m *= lambda;
    const int64_t mub_s = OptimizedMub(sample);
    const int64_t k_s = ArrayCountK(sample, mub_s);
    DPC_ASSIGN_OR_RETURN(const int64_t kbar_s, BestFitArrayCount(sample, mub_s));
    DPC_ASSIGN_OR_RETURN(const double delta_mu_s,
                         MeanSensitivity(sample, bound_u));
    AddLaw(report, "sample_mub_optimized", lambda, l * mub, mub_s);
    AddLaw(report, "sample_mub_median", lambda, l * MedianMub(base),
           MedianMub(sample));
    AddLaw(report, "sample_k", lambda, k, k_s);
    AddLaw(report, "sample_kbar", lambda, kbar, kbar_s);
    AddLaw(report, "sample_delta_baseline", lambda, delta_mu, delta_mu_s);
    AddLaw(report, "sample_delta_arr_wrap", lambda,
           ArrayAverageSensitivity(GroupingStrategy::kWrapAround, k, bound_u),
           ArrayAverageSensitivity(GroupingStrategy::kWrapAround, k_s,
                                   bound_u));
    AddLaw(report, "sample_delta_arr_best", lambda,
           ArrayAverageSensitivity(GroupingStrategy::kBestFit, kbar, bound_u),
           ArrayAverageSensitivity(GroupingStrategy::kBestFit, kbar_s,
                                   bound_u));
    AddLaw(report, "sample_delta_levy", lambda, delta_levy / std::sqrt(l),
           LevyHeuristicSensitivity(bound_u, kbar_s, gamma, mub_s),
           tau_branch);

    std::vector<int64_t> user;
    user.reserve(base.size() * lambda);
    for (int64_t m : base) user.insert(user.end(), lambda, m);
    const int64_t mub_u = OptimizedMub(user);
    DPC_ASSIGN_OR_RETURN(const int64_t kbar_u, BestFitArrayCount(user, mub_u));
    AddLaw(report, "user_mub", lambda, mub, mub_u);
    AddLaw(report, "user_k", lambda, l * k, ArrayCountK(user, mub_u));
    AddLaw(report, "user_kbar", lambda, l * kbar, kbar_u);
  }
  return report;
}

Table ScalingTable(const ScalingReport& report) {
  Table table;
  table.columns = {"law", "lambda", "applicable", "passed", "expected",
                   "actual"};
  for (const LawResult& r : report.laws) {
    table.AddRow({r.law, r.lambda, r.applicable, r.passed, r.expected,
                  r.actual});
  }
  return table;
}

}  // namespace dpcomposer
