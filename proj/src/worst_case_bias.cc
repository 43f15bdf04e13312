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

#include "dpcomposer/worst_case_bias.h"

#include <cmath>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpcomposer/status_macros.h"

namespace dpcomposer {
namespace {

struct PlanTotals {
  int64_t total = 0;
  int64_t retained = 0;
};

absl::StatusOr<PlanTotals> CheckPlan(std::span<const int64_t> counts,
                                     std::span<const int64_t> retained) {
  if (counts.size() != retained.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidPlan: ", counts.size(), " counts but ", retained.size(),
        " retained entries"));
  }
  PlanTotals t;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0 || retained[i] < 0 || retained[i] > counts[i]) {
      return absl::InvalidArgumentError(
          absl::StrCat("InvalidPlan: retained ", retained[i],
                       " outside [0, ", counts[i], "] at position ", i));
    }
    t.total += counts[i];
    t.retained += retained[i];
  }
  if (t.retained <= 0) {
    return absl::InvalidArgumentError("InvalidPlan: nothing retained");
  }
  return t;
}

}  // namespace

std::string_view BiasBranchName(BiasBranch branch) {
  switch (branch) {
    case BiasBranch::kNoClipping:
      return "no_clipping";
    case BiasBranch::kRetainedMajority:
      return "retained_majority";
    case BiasBranch::kEvenTotal:
      return "even_total";
    case BiasBranch::kOddTotal:
      return "odd_total";
  }
  return "unknown";
}

BiasReport BiasFromTotals(int64_t total, int64_t retained, double bound_u) {
  BiasReport report;
  const double n = static_cast<double>(total);
  const int64_t dropped = total - retained;
  report.e_mu = bound_u * (1.0 - static_cast<double>(retained) / n);
  if (dropped == 0) {
    report.e_mu = 0.0;
    report.var_branch = BiasBranch::kNoClipping;
    return report;
  }
  if (retained > dropped) {
    report.var_branch = BiasBranch::kRetainedMajority;
    report.e_var = bound_u * bound_u * static_cast<double>(retained) *
                   static_cast<double>(dropped) / (n * n);
  } else if (total % 2 == 0) {
    report.var_branch = BiasBranch::kEvenTotal;
    report.e_var = bound_u * bound_u / 4.0;
  } else {
    report.var_branch = BiasBranch::kOddTotal;
    report.e_var = bound_u * bound_u / 4.0 * (1.0 - 1.0 / (n * n));
  }
  return report;
}

absl::StatusOr<double> MeanBias(std::span<const int64_t> counts,
                                std::span<const int64_t> retained,
                                double bound_u) {
  DPC_ASSIGN_OR_RETURN(const PlanTotals t, CheckPlan(counts, retained));
  return BiasFromTotals(t.total, t.retained, bound_u).e_mu;
}

absl::StatusOr<BiasReport> VarianceBias(std::span<const int64_t> counts,
                                        std::span<const int64_t> retained,
                                        double bound_u) {
  DPC_ASSIGN_OR_RETURN(const PlanTotals t, CheckPlan(counts, retained));
  return BiasFromTotals(t.total, t.retained, bound_u);
}

absl::StatusOr<Dataset> ExtremalBiasDataset(std::span<const int64_t> counts,
                                            std::span<const int64_t> retained,
                                            double bound_u, BiasTarget target) {
  DPC_ASSIGN_OR_RETURN(const PlanTotals t, CheckPlan(counts, retained));
  const int64_t dropped = t.total - t.retained;
  if (dropped == 0) {
    return absl::InvalidArgumentError(
        "InvalidPlan: nothing is clipped, the bias is zero");
  }
  // Retained samples are always 0. Dropped samples are U, except that when
  // the variance target has at least as many dropped as retained samples,
  // enough dropped samples are also 0 to make ceil(n/2) zeros overall.
  int64_t dropped_zeros = 0;
  if (target == BiasTarget::kVariance && t.retained <= dropped) {
    dropped_zeros = (t.total + 1) / 2 - t.retained;
  }
  const int width = static_cast<int>(std::to_string(counts.size()).size());
  std::vector<Record> records;
  records.reserve(t.total);
  for (size_t i = 0; i < counts.size(); ++i) {
    // Zero-padded so token order matches input order.
    const std::string user = absl::StrFormat("u%0*d", width, i + 1);
    for (int64_t j = 0; j < counts[i]; ++j) {
      double value = bound_u;
      if (j < retained[i]) {
        value = 0.0;
      } else if (dropped_zeros > 0) {
        value = 0.0;
        --dropped_zeros;
      }
      records.push_back({user, "g", value});
    }
  }
  return Dataset::Create(std::move(records), bound_u);
}

absl::StatusOr<BiasReport> MeasuredBias(const std::vector<UserSamples>& users,
                                        std::span<const int64_t> retained) {
  if (users.size() != retained.size()) {
    return absl::InvalidArgumentError("InvalidPlan: size mismatch");
  }
  std::vector<double> all, kept;
  for (size_t i = 0; i < users.size(); ++i) {
    const auto& values = users[i].values;
    if (retained[i] < 0 ||
        retained[i] > static_cast<int64_t>(values.size())) {
      return absl::InvalidArgumentError("InvalidPlan: retained out of range");
    }
    all.insert(all.end(), values.begin(), values.end());
    kept.insert(kept.end(), values.begin(), values.begin() + retained[i]);
  }
  if (kept.empty()) {
    return absl::InvalidArgumentError("InvalidPlan: nothing retained");
  }
  const GridStats full = ComputeStats(all);
  const GridStats clip = ComputeStats(kept);
  BiasReport report;
  report.e_mu = std::abs(full.mean - clip.mean);
  report.e_var = std::abs(full.variance - clip.variance);
  return report;
}

}  // namespace dpcomposer
