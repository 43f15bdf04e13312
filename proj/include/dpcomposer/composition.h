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

// Privacy accounting across grids, per-grid worst-case error budgets, the
// Clip-User suppression algorithm and the pseudo-user error re-optimization.

#ifndef DPCOMPOSER_COMPOSITION_H_
#define DPCOMPOSER_COMPOSITION_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcomposer/dataset.h"
#include "dpcomposer/mechanisms.h"
#include "dpcomposer/rng.h"

namespace dpcomposer {

// grid -> user -> retained count Gamma. Entries absent from the plan keep
// all of their samples.
using ClipPlan = std::map<std::string, std::map<std::string, int64_t>>;

struct ErrorBudget {
  std::string grid;
  double bias_mean = 0.0;
  double bias_var = 0.0;
  double noise_mean = 0.0;  // 2 Delta_mu / eps
  double noise_var = 0.0;   // 2 Delta_Var / eps
  double total = 0.0;
};

// Error budget of a grid from its total count, the retained total and the
// largest retained count. retained_total must be positive.
ErrorBudget GridErrorFromTotals(int64_t total, int64_t retained_total,
                                int64_t retained_max, double bound_u,
                                double epsilon);

// Errors: ZeroRetained, InvalidPlan, InvalidParams.
absl::StatusOr<ErrorBudget> GridError(std::span<const int64_t> counts,
                                      std::span<const int64_t> retained,
                                      double bound_u, double epsilon);

// max over users of the summed per-grid budgets of the grids they occupy.
// Errors: InvalidParams (non-positive or missing epsilon for a grid).
absl::StatusOr<double> PrivacyLoss(
    const OccupancyArray& occupancy,
    const std::map<std::string, double>& eps_per_grid);

// G_1 * epsilon.
double UniformPrivacyLoss(const OccupancyArray& occupancy, double epsilon);

// Occupancy after applying a plan: suppressed entries are removed, clipped
// ones carry their retained count.
OccupancyArray ApplyPlan(const OccupancyArray& occupancy, const ClipPlan& plan);

// Per grid, the original counts and the retained counts in user-token order.
struct GridPlanRows {
  std::vector<std::string> users;
  std::vector<int64_t> counts;
  std::vector<int64_t> retained;
};
GridPlanRows PlanRows(const OccupancyArray& occupancy, const ClipPlan& plan,
                      const std::string& grid);

struct ClipUserOptions {
  // Never suppress in the grid with the smallest initial error.
  bool protect_min_error_grid = false;
};

struct SuppressionEvent {
  int64_t stage = 0;
  std::string user;
  std::string grid;
  double error = 0.0;  // grid error after the suppression
};

struct ClipUserResult {
  OccupancyArray occupancy;  // input occupancy
  ClipPlan plan;             // suppressed entries, all with Gamma = 0
  int64_t k_factor = 0;
  int64_t initial_g1 = 0;
  double error_cap = 0.0;  // E
  std::vector<ErrorBudget> initial_errors;
  std::vector<ErrorBudget> per_grid_errors;  // after suppression
  std::vector<SuppressionEvent> trace;
  // max_g E_g after each completed or halted stage.
  std::vector<double> stage_max_errors;
};

// Errors: EmptyDataset, InvalidParams.
absl::StatusOr<ClipUserResult> ClipUser(const OccupancyArray& occupancy,
                                        double bound_u, double epsilon,
                                        const ClipUserOptions& options = {});

struct PostReleaseResult {
  std::map<std::string, MechanismOutput> outputs;  // per grid
  double composed_loss = 0.0;                     // K * eps
};

// Clip release of every grid under the result plan. Each grid draws from
// rng.Split(grid). Errors: OccupancyMismatch, plus ClipRelease errors.
absl::StatusOr<PostReleaseResult> PostRelease(const Dataset& dataset,
                                              const ClipUserResult& result,
                                              double epsilon, RngStream& rng);

struct PseudoUserResult {
  std::map<std::string, int64_t> per_grid_m;
  std::vector<ErrorBudget> per_grid_errors;
  double new_error = 0.0;  // max over grids
};

// Per grid, the capacity m in [min positive Gamma, max Gamma] minimizing the
// error with retained counts min(Gamma, m); the smallest m wins ties.
// Errors: ZeroRetained, InvalidPlan, InvalidParams.
absl::StatusOr<PseudoUserResult> PseudoUserOptimize(
    const OccupancyArray& occupancy, const ClipPlan& plan, double bound_u,
    double epsilon);

// Error of one grid with retained counts min(Gamma, m).
absl::StatusOr<ErrorBudget> CappedGridError(std::span<const int64_t> counts,
                                            std::span<const int64_t> retained,
                                            int64_t m, double bound_u,
                                            double epsilon);

}  // namespace dpcomposer

#endif  // DPCOMPOSER_COMPOSITION_H_
