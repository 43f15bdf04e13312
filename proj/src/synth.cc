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

#include "dpcomposer/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpcomposer/mechanisms.h"
#include "dpcomposer/status_macros.h"

namespace dpcomposer {
namespace {

int Digits(int64_t n) {
  int d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

absl::Status CheckSynthParams(const SynthParams& params) {
  if (params.num_grids < 1 || params.num_grids > 62) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidParams: num_grids must lie in [1, 62], got ",
        params.num_grids));
  }
  const int64_t max_users = (int64_t{1} << params.num_grids) - 1;
  if (params.num_users < 1 || params.num_users > max_users) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidParams: num_users must lie in [1, ", max_users,
                     "], got ", params.num_users));
  }
  if (!(params.geo_q > 0.0 && params.geo_q <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidParams: q must lie in (0, 1], got ", params.geo_q));
  }
  if (!(params.heavy_gamma >= 0.0) || !std::isfinite(params.heavy_gamma)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "InvalidParams: gamma must be non-negative, got ", params.heavy_gamma));
  }
  return absl::OkStatus();
}

int64_t BoostedCount(int64_t m, double gamma) {
  const double v = (1.0 + gamma) * static_cast<double>(m);
  // Absorb representation error so that e.g. 1.1 * 10 gives 11.
  return static_cast<int64_t>(std::ceil(v - 1e-9 * v));
}

}  // namespace

std::string SynthGridToken(int64_t index, int64_t num_grids) {
  return absl::StrFormat("g%0*d", Digits(num_grids), index);
}

std::string SynthUserToken(int64_t index, int64_t num_users) {
  return absl::StrFormat("u%0*d", Digits(num_users), index);
}

absl::StatusOr<SynthOccupancy> GenerateOccupancy(const SynthParams& params,
                                                 RngStream& rng) {
  DPC_RETURN_IF_ERROR(CheckSynthParams(params));
  const int64_t g = params.num_grids;
  std::vector<std::string> grids;
  for (int64_t i = 0; i < g; ++i) grids.push_back(SynthGridToken(i, g));

  std::map<std::string, OccupancyArray::Row> counts;
  std::vector<int64_t> order(g);
  for (int64_t l = 1; l <= params.num_users; ++l) {
    int64_t j = 0;
    while ((int64_t{2} << j) <= l) ++j;
    const int64_t occupied = g - j;
    std::iota(order.begin(), order.end(), 0);
    for (int64_t i = 0; i < occupied; ++i) {
      std::uniform_int_distribution<int64_t> pick(i, g - 1);
      std::swap(order[i], order[pick(rng.engine())]);
    }
    const std::string user = SynthUserToken(l, params.num_users);
    for (int64_t i = 0; i < occupied; ++i) {
      counts[grids[order[i]]][user] = rng.Geometric(params.geo_q);
    }
  }

  SynthOccupancy out;
  DPC_ASSIGN_OR_RETURN(out.pre_scaling, OccupancyArray::FromCounts(counts));
  for (auto& [grid, row] : counts) {
    auto heavy = row.begin();
    for (auto it = row.begin(); it != row.end(); ++it) {
      if (it->second > heavy->second) heavy = it;
    }
    heavy->second = BoostedCount(heavy->second, params.heavy_gamma);
    out.heavy_hitters.emplace(grid, heavy->first);
  }
  DPC_ASSIGN_OR_RETURN(out.occupancy,
                       OccupancyArray::FromCounts(std::move(counts)));
  return out;
}

absl::StatusOr<SynthOccupancy> GenerateOccupancy(const SynthParams& params) {
  RngStream rng(params.seed);
  return GenerateOccupancy(params, rng);
}

absl::StatusOr<Dataset> GenerateValues(const OccupancyArray& occupancy,
                                       const ValueModel& model, double bound_u,
                                       RngStream& rng) {
  if (!(model.sigma >= 0.0) || !std::isfinite(model.mu)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidParams: sigma must be non-negative, got ",
                     model.sigma));
  }
  std::vector<Record> records;
  for (const auto& [grid, row] : occupancy.grids()) {
    for (const auto& [user, count] : row) {
      for (int64_t k = 0; k < count; ++k) {
        records.push_back(
            {user, grid, Project(rng.Normal(model.mu, model.sigma), 0.0,
                                 bound_u)});
      }
    }
  }
  return Dataset::Create(std::move(records), bound_u);
}

std::string ReplicaToken(const std::string& user, int64_t replica,
                         int64_t lambda) {
  if (replica == 0) return user;
  return absl::StrFormat("%s-r%0*d", user, Digits(lambda - 1), replica);
}

absl::StatusOr<OccupancyArray> ScaleOccupancy(const OccupancyArray& occupancy,
                                              ScalingMode mode,
                                              int64_t lambda) {
  if (lambda < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidParams: lambda must be >= 1, got ", lambda));
  }
  std::map<std::string, OccupancyArray::Row> counts;
  for (const auto& [grid, row] : occupancy.grids()) {
    OccupancyArray::Row& out = counts[grid];
    for (const auto& [user, count] : row) {
      if (mode == ScalingMode::kSample) {
        out[user] = count * lambda;
      } else {
        for (int64_t r = 0; r < lambda; ++r) {
          out[ReplicaToken(user, r, lambda)] = count;
        }
      }
    }
  }
  return OccupancyArray::FromCounts(std::move(counts));
}

}  // namespace dpcomposer
