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

#include "dpcomposer/sensitivity.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpcomposer/kernels.h"

namespace dpcomposer {
namespace {

struct Totals {
  int64_t total = 0;
  int64_t max = 0;
  bool negative = false;
};

Totals Summarize(std::span<const int64_t> counts) {
  Totals t;
  for (int64_t c : counts) {
    if (c < 0) t.negative = true;
    t.total += c;
    t.max = std::max(t.max, c);
  }
  return t;
}

absl::StatusOr<Totals> CheckedTotals(std::span<const int64_t> counts,
                                     std::string_view error_name) {
  const Totals t = Summarize(counts);
  if (t.negative || t.total <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(error_name), ": counts must be non-negative with a "
                                 "positive sum"));
  }
  return t;
}

// Population variance of n samples of which k equal U and the rest 0.
double TwoPointVariance(int64_t n, int64_t k, double u) {
  const double nd = static_cast<double>(n);
  return u * u * static_cast<double>(k) * static_cast<double>(n - k) /
         (nd * nd);
}

}  // namespace

std::string_view VarianceBranchName(VarianceBranch branch) {
  switch (branch) {
    case VarianceBranch::kAboveTwice:
      return "above_twice";
    case VarianceBranch::kEvenCap:
      return "even_cap";
    case VarianceBranch::kOddCap:
      return "odd_cap";
  }
  return "unknown";
}

SensitivityReport SensitivityFromTotals(int64_t total, int64_t max_count,
                                        double bound_u) {
  SensitivityReport report;
  const double n = static_cast<double>(total);
  report.delta_mu = bound_u * static_cast<double>(max_count) / n;
  if (total > 2 * max_count) {
    report.branch = VarianceBranch::kAboveTwice;
    report.delta_var = TwoPointVariance(total, max_count, bound_u);
  } else if (total % 2 == 0) {
    report.branch = VarianceBranch::kEvenCap;
    report.delta_var = bound_u * bound_u / 4.0;
  } else {
    report.branch = VarianceBranch::kOddCap;
    report.delta_var = bound_u * bound_u / 4.0 * (1.0 - 1.0 / (n * n));
  }
  return report;
}

absl::StatusOr<double> MeanSensitivity(std::span<const int64_t> counts,
                                       double bound_u) {
  auto t = CheckedTotals(counts, "ZeroTotal");
  if (!t.ok()) return t.status();
  return SensitivityFromTotals(t->total, t->max, bound_u).delta_mu;
}

absl::StatusOr<SensitivityReport> VarianceSensitivity(
    std::span<const int64_t> counts, double bound_u) {
  auto t = CheckedTotals(counts, "ZeroTotal");
  if (!t.ok()) return t.status();
  return SensitivityFromTotals(t->total, t->max, bound_u);
}

absl::StatusOr<double> ClippedMeanSensitivity(
    std::span<const int64_t> retained, double bound_u) {
  auto t = CheckedTotals(retained, "ZeroRetained");
  if (!t.ok()) return t.status();
  return SensitivityFromTotals(t->total, t->max, bound_u).delta_mu;
}

absl::StatusOr<SensitivityReport> ClippedVarianceSensitivity(
    std::span<const int64_t> retained, double bound_u) {
  auto t = CheckedTotals(retained, "ZeroRetained");
  if (!t.ok()) return t.status();
  return SensitivityFromTotals(t->total, t->max, bound_u);
}

double ArrayAverageSensitivity(GroupingStrategy strategy, int64_t count,
                               double bound_u) {
  const double k = static_cast<double>(count);
  return strategy == GroupingStrategy::kWrapAround ? 2.0 * bound_u / k
                                                   : bound_u / k;
}

GainReport ComputeGainReport(std::span<const int64_t> counts, int64_t m_ub,
                             double bound_u) {
  const Totals t = Summarize(counts);
  GainReport report;
  report.delta_f =
      bound_u * static_cast<double>(t.max) / static_cast<double>(t.total);
  report.delta_tilde = bound_u * static_cast<double>(m_ub) /
                       static_cast<double>(SumMinCap(counts, m_ub));
  report.opt = static_cast<double>(t.max) *
               static_cast<double>(counts.size()) /
               static_cast<double>(t.total);
  report.gain = report.delta_f / report.delta_tilde;
  return report;
}

absl::StatusOr<double> BruteForceVarianceSensitivity(
    std::span<const int64_t> counts, double bound_u) {
  auto t = CheckedTotals(counts, "ZeroTotal");
  if (!t.ok()) return t.status();
  if (t->total > 10) {
    return absl::InvalidArgumentError(absl::StrCat(
        "TooLarge: enumeration needs sum of counts <= 10, got ", t->total));
  }
  const int64_t n = t->total;
  std::vector<double> d(n), d_prime(n);
  double best = 0.0;
  int64_t offset = 0;
  // Neighbours differ only in the samples of one user, placed at
  // [offset, offset + m). Enumerate every {0,U} assignment of all n samples
  // for D, and every assignment of the changed block for D'.
  for (int64_t m : counts) {
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
      for (int64_t i = 0; i < n; ++i) d[i] = (mask >> i) & 1u ? bound_u : 0.0;
      const double mean_d = Sum(d) / static_cast<double>(n);
      const double var_d =
          SumSquaredDeviations(d, mean_d) / static_cast<double>(n);
      for (uint32_t block = 0; block < (1u << m); ++block) {
        d_prime = d;
        for (int64_t j = 0; j < m; ++j) {
          d_prime[offset + j] = (block >> j) & 1u ? bound_u : 0.0;
        }
        const double mean_p = Sum(d_prime) / static_cast<double>(n);
        const double var_p =
            SumSquaredDeviations(d_prime, mean_p) / static_cast<double>(n);
        best = std::max(best, std::abs(var_d - var_p));
      }
    }
    offset += m;
  }
  return best;
}

}  // namespace dpcomposer
