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

#include "dpcomposer/composition.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpcomposer/sensitivity.h"
#include "dpcomposer/status_macros.h"
#include "dpcomposer/worst_case_bias.h"

namespace dpcomposer {
namespace {

absl::Status CheckBudgetParams(double bound_u, double epsilon) {
  if (!(bound_u > 0.0) || !std::isfinite(bound_u)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidParams: U must be positive, got ", bound_u));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidParams: epsilon must be positive, got ", epsilon));
  }
  return absl::OkStatus();
}

absl::Status ValidatePlan(const OccupancyArray& occupancy,
                          const ClipPlan& plan) {
  for (const auto& [grid, row] : plan) {
    for (const auto& [user, gamma] : row) {
      const int64_t m = occupancy.Count(grid, user);
      if (m == 0) {
        return absl::InvalidArgumentError(absl::StrCat(
            "InvalidPlan: (", grid, ", ", user, ") is not occupied"));
      }
      if (gamma < 0 || gamma > m) {
        return absl::InvalidArgumentError(
            absl::StrCat("InvalidPlan: Gamma ", gamma, " outside [0, ", m,
                         "] for (", grid, ", ", user, ")"));
      }
    }
  }
  return absl::OkStatus();
}

// Retained state of one grid during Clip-User.
struct GridState {
  std::string grid;
  int64_t total = 0;
  int64_t retained_total = 0;
  std::multiset<int64_t> retained;  // positive retained counts
  ErrorBudget current;

  // Largest retained count after dropping one copy of count; 0 if empty.
  int64_t MaxWithout(int64_t count) const {
    auto top = std::prev(retained.end());
    if (*top != count) return *top;
    if (top == retained.begin()) return 0;
    return *std::prev(top);
  }
};

}  // namespace

ErrorBudget GridErrorFromTotals(int64_t total, int64_t retained_total,
                                int64_t retained_max, double bound_u,
                                double epsilon) {
  const BiasReport bias = BiasFromTotals(total, retained_total, bound_u);
  const SensitivityReport sens =
      SensitivityFromTotals(retained_total, retained_max, bound_u);
  ErrorBudget out;
  out.bias_mean = bias.e_mu;
  out.bias_var = bias.e_var;
  out.noise_mean = 2.0 * sens.delta_mu / epsilon;
  out.noise_var = 2.0 * sens.delta_var / epsilon;
  out.total = out.bias_mean + out.bias_var + out.noise_mean + out.noise_var;
  return out;
}

absl::StatusOr<ErrorBudget> GridError(std::span<const int64_t> counts,
                                      std::span<const int64_t> retained,
                                      double bound_u, double epsilon) {
  DPC_RETURN_IF_ERROR(CheckBudgetParams(bound_u, epsilon));
  if (counts.size() != retained.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidPlan: ", counts.size(), " counts but ", retained.size(),
        " retained counts"));
  }
  int64_t total = 0;
  int64_t retained_total = 0;
  int64_t retained_max = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 1 || retained[i] < 0 || retained[i] > counts[i]) {
      return absl::InvalidArgumentError(
          absl::StrCat("InvalidPlan: Gamma ", retained[i], " with count ",
                       counts[i], " at position ", i));
    }
    total += counts[i];
    retained_total += retained[i];
    retained_max = std::max(retained_max, retained[i]);
  }
  if (retained_total == 0) {
    return absl::InvalidArgumentError("ZeroRetained: no retained samples");
  }
  return GridErrorFromTotals(total, retained_total, retained_max, bound_u,
                             epsilon);
}

absl::StatusOr<double> PrivacyLoss(
    const OccupancyArray& occupancy,
    const std::map<std::string, double>& eps_per_grid) {
  for (const auto& [grid, row] : occupancy.grids()) {
    auto it = eps_per_grid.find(grid);
    if (it == eps_per_grid.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("InvalidParams: no epsilon for grid ", grid));
    }
    if (!(it->second > 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "InvalidParams: epsilon for grid ", grid, " must be positive"));
    }
  }
  double loss = 0.0;
  for (const auto& [user, grids] : occupancy.users()) {
    double sum = 0.0;
    for (const std::string& grid : grids) sum += eps_per_grid.at(grid);
    loss = std::max(loss, sum);
  }
  return loss;
}

double UniformPrivacyLoss(const OccupancyArray& occupancy, double epsilon) {
  return static_cast<double>(occupancy.MaxGridsPerUser()) * epsilon;
}

OccupancyArray ApplyPlan(const OccupancyArray& occupancy,
                         const ClipPlan& plan) {
  OccupancyArray out;
  for (const auto& [grid, row] : occupancy.grids()) {
    auto plan_row = plan.find(grid);
    for (const auto& [user, count] : row) {
      int64_t gamma = count;
      if (plan_row != plan.end()) {
        if (auto it = plan_row->second.find(user);
            it != plan_row->second.end()) {
          gamma = std::clamp<int64_t>(it->second, 0, count);
        }
      }
      if (gamma > 0) out.Add(grid, user, gamma).IgnoreError();
    }
  }
  return out;
}

GridPlanRows PlanRows(const OccupancyArray& occupancy, const ClipPlan& plan,
                      const std::string& grid) {
  GridPlanRows rows;
  auto plan_row = plan.find(grid);
  for (const auto& [user, count] : occupancy.GridRow(grid)) {
    int64_t gamma = count;
    if (plan_row != plan.end()) {
      if (auto it = plan_row->second.find(user); it != plan_row->second.end()) {
        gamma = it->second;
      }
    }
    rows.users.push_back(user);
    rows.counts.push_back(count);
    rows.retained.push_back(gamma);
  }
  return rows;
}

absl::StatusOr<ClipUserResult> ClipUser(const OccupancyArray& occupancy,
                                        double bound_u, double epsilon,
                                        const ClipUserOptions& options) {
  DPC_RETURN_IF_ERROR(CheckBudgetParams(bound_u, epsilon));
  if (occupancy.empty()) {
    return absl::InvalidArgumentError("EmptyDataset: occupancy has no grids");
  }
  ClipUserResult result;
  result.occupancy = occupancy;
  result.initial_g1 = occupancy.MaxGridsPerUser();

  std::vector<GridState> states;
  std::map<std::string, size_t> grid_index;
  for (const auto& [grid, row] : occupancy.grids()) {
    GridState s;
    s.grid = grid;
    for (const auto& [user, count] : row) {
      s.total += count;
      s.retained.insert(count);
    }
    s.retained_total = s.total;
    s.current = GridErrorFromTotals(s.total, s.total, *s.retained.rbegin(),
                                    bound_u, epsilon);
    s.current.grid = grid;
    grid_index.emplace(grid, states.size());
    result.initial_errors.push_back(s.current);
    result.error_cap = std::max(result.error_cap, s.current.total);
    states.push_back(std::move(s));
  }

  std::string protected_grid;
  if (options.protect_min_error_grid) {
    double best = states.front().current.total;
    protected_grid = states.front().grid;
    for (const GridState& s : states) {
      if (s.current.total < best) {
        best = s.current.total;
        protected_grid = s.grid;
      }
    }
  }

  // Current grids per user (token order).
  std::map<std::string, std::set<std::string>> user_grids = occupancy.users();
  auto max_grids = [&user_grids] {
    size_t g = 0;
    for (const auto& [user, grids] : user_grids) g = std::max(g, grids.size());
    return static_cast<int64_t>(g);
  };
  auto max_error = [&states] {
    double e = 0.0;
    for (const GridState& s : states) e = std::max(e, s.current.total);
    return e;
  };

  int64_t stage = 0;
  bool halted = false;
  while (!halted) {
    const int64_t level = max_grids();
    if (level <= 1) break;
    ++stage;
    std::vector<std::string> frozen;
    for (const auto& [user, grids] : user_grids) {
      if (static_cast<int64_t>(grids.size()) == level) frozen.push_back(user);
    }
    for (const std::string& user : frozen) {
      std::set<std::string>& grids = user_grids[user];
      GridState* target = nullptr;
      ErrorBudget best;
      for (const std::string& grid : grids) {
        if (grid == protected_grid) continue;
        GridState& s = states[grid_index[grid]];
        const int64_t count = occupancy.Count(grid, user);
        const int64_t remaining = s.retained_total - count;
        if (remaining == 0) continue;
        ErrorBudget candidate = GridErrorFromTotals(
            s.total, remaining, s.MaxWithout(count), bound_u, epsilon);
        if (target == nullptr || candidate.total < best.total) {
          target = &s;
          best = candidate;
        }
      }
      if (target == nullptr || best.total > result.error_cap) {
        halted = true;
        break;
      }
      const int64_t count = occupancy.Count(target->grid, user);
      target->retained_total -= count;
      target->retained.erase(target->retained.find(count));
      best.grid = target->grid;
      target->current = best;
      result.plan[target->grid][user] = 0;
      result.trace.push_back({stage, user, target->grid, best.total});
      grids.erase(target->grid);
    }
    result.stage_max_errors.push_back(max_error());
  }

  result.k_factor = max_grids();
  for (const GridState& s : states) result.per_grid_errors.push_back(s.current);
  return result;
}

absl::StatusOr<PostReleaseResult> PostRelease(const Dataset& dataset,
                                              const ClipUserResult& result,
                                              double epsilon, RngStream& rng) {
  if (!(dataset.occupancy() == result.occupancy)) {
    return absl::FailedPreconditionError(
        "OccupancyMismatch: dataset occupancy differs from the Clip-User "
        "input");
  }
  MechanismParams params;
  params.epsilon = epsilon;
  params.bound_u = dataset.bound_u();
  static const std::map<std::string, int64_t> kNoClipping;
  PostReleaseResult out;
  for (const std::string& grid : dataset.GridIds()) {
    auto it = result.plan.find(grid);
    const std::map<std::string, int64_t>& retained =
        it == result.plan.end() ? kNoClipping : it->second;
    RngStream grid_rng = rng.Split(grid);
    DPC_ASSIGN_OR_RETURN(
        MechanismOutput output,
        ClipRelease(dataset.GridSamples(grid), retained, params, grid_rng));
    out.outputs.emplace(grid, std::move(output));
  }
  out.composed_loss =
      UniformPrivacyLoss(ApplyPlan(result.occupancy, result.plan), epsilon);
  return out;
}

absl::StatusOr<ErrorBudget> CappedGridError(std::span<const int64_t> counts,
                                            std::span<const int64_t> retained,
                                            int64_t m, double bound_u,
                                            double epsilon) {
  std::vector<int64_t> capped(retained.begin(), retained.end());
  for (int64_t& g : capped) g = std::min(g, m);
  return GridError(counts, capped, bound_u, epsilon);
}

absl::StatusOr<PseudoUserResult> PseudoUserOptimize(
    const OccupancyArray& occupancy, const ClipPlan& plan, double bound_u,
    double epsilon) {
  DPC_RETURN_IF_ERROR(CheckBudgetParams(bound_u, epsilon));
  DPC_RETURN_IF_ERROR(ValidatePlan(occupancy, plan));
  PseudoUserResult out;
  for (const std::string& grid : occupancy.GridIds()) {
    const GridPlanRows rows = PlanRows(occupancy, plan, grid);
    int64_t total = 0;
    std::vector<int64_t> positive;
    for (size_t i = 0; i < rows.counts.size(); ++i) {
      total += rows.counts[i];
      if (rows.retained[i] > 0) positive.push_back(rows.retained[i]);
    }
    if (positive.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("ZeroRetained: grid ", grid, " has no retained samples"));
    }
    std::sort(positive.begin(), positive.end());
    // Sweep m upward; below counts retained values smaller than m.
    size_t below = 0;
    int64_t below_sum = 0;
    const int64_t n = static_cast<int64_t>(positive.size());
    ErrorBudget best;
    int64_t best_m = 0;
    for (int64_t m = positive.front(); m <= positive.back(); ++m) {
      while (below < positive.size() && positive[below] < m) {
        below_sum += positive[below];
        ++below;
      }
      const int64_t retained_total =
          below_sum + m * (n - static_cast<int64_t>(below));
      const ErrorBudget e =
          GridErrorFromTotals(total, retained_total, m, bound_u, epsilon);
      if (best_m == 0 || e.total < best.total) {
        best = e;
        best_m = m;
      }
    }
    best.grid = grid;
    out.per_grid_m.emplace(grid, best_m);
    out.new_error = std::max(out.new_error, best.total);
    out.per_grid_errors.push_back(std::move(best));
  }
  return out;
}

}  // namespace dpcomposer
