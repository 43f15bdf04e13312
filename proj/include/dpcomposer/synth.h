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

// Synthetic occupancy and value generation: a dyadic occupancy structure
// with geometric contribution counts and one heavy hitter per grid, plus
// projected-Gaussian sample values.

#ifndef DPCOMPOSER_SYNTH_H_
#define DPCOMPOSER_SYNTH_H_

#include <cstdint>
#include <map>
#include <string>

#include "absl/status/statusor.h"
#include "dpcomposer/dataset.h"
#include "dpcomposer/rng.h"

namespace dpcomposer {

struct SynthParams {
  int64_t num_grids = 12;
  int64_t num_users = 4095;  // 2^G - 1
  double geo_q = 0.01;       // geometric success probability, in (0, 1]
  double heavy_gamma = 0.0;  // heavy-hitter boost, >= 0
  uint64_t seed = 0;
  double bound_u = 65.0;
};

struct ValueModel {
  double mu = 0.0;
  double sigma = 0.0;
};

struct SynthOccupancy {
  OccupancyArray occupancy;
  OccupancyArray pre_scaling;  // counts before the heavy-hitter boost
  std::map<std::string, std::string> heavy_hitters;  // grid -> user
};

// Grid token for 0-based index i, zero-padded to the width of G.
std::string SynthGridToken(int64_t index, int64_t num_grids);
// User token for 1-based index l, zero-padded to the width of L.
std::string SynthUserToken(int64_t index, int64_t num_users);

// User l in [2^j, 2^(j+1) - 1] occupies G - j grids chosen uniformly at
// random, with Geo(q) counts on {1, 2, ...}. In each grid the largest count
// (ties by user token) becomes ceil((1 + gamma) m). Errors: InvalidParams.
absl::StatusOr<SynthOccupancy> GenerateOccupancy(const SynthParams& params,
                                                 RngStream& rng);
// Same, seeded from params.seed.
absl::StatusOr<SynthOccupancy> GenerateOccupancy(const SynthParams& params);

// One projected-Gaussian value per contribution, grids and users in token
// order. Errors: InvalidParams.
absl::StatusOr<Dataset> GenerateValues(const OccupancyArray& occupancy,
                                       const ValueModel& model, double bound_u,
                                       RngStream& rng);

enum class ScalingMode { kSample, kUser };

// kSample multiplies every count by lambda; kUser replicates every user
// lambda times (replica 0 keeps the original token). Errors: InvalidParams.
absl::StatusOr<OccupancyArray> ScaleOccupancy(const OccupancyArray& occupancy,
                                              ScalingMode mode,
                                              int64_t lambda);

// Replica token used by kUser scaling.
std::string ReplicaToken(const std::string& user, int64_t replica,
                         int64_t lambda);

}  // namespace dpcomposer

#endif  // DPCOMPOSER_SYNTH_H_
