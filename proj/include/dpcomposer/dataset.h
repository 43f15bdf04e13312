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

// Data model for datasets partitioned into disjoint grids, where every user
// may contribute several bounded samples to several grids.

#ifndef DPCOMPOSER_DATASET_H_
#define DPCOMPOSER_DATASET_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace dpcomposer {

// Per-user, per-grid contribution counts m_{g,l}. Zero entries are never
// stored. User and grid identifiers are opaque tokens; their lexicographic
// order is the deterministic processing order wherever one is needed.
class OccupancyArray {
 public:
  using Row = std::map<std::string, int64_t>;  // user -> count

  OccupancyArray() = default;

  // Builds from grid -> (user -> count). Fails with NonPositiveCount on any
  // count below one.
  static absl::StatusOr<OccupancyArray> FromCounts(
      std::map<std::string, Row> counts);

  // Adds a new (grid, user) entry. DuplicateEntry if already present,
  // NonPositiveCount if count < 1.
  absl::Status Add(const std::string& grid, const std::string& user,
                   int64_t count);

  bool empty() const { return grids_.empty(); }

  const std::map<std::string, Row>& grids() const { return grids_; }
  // user -> set of occupied grids.
  const std::map<std::string, std::set<std::string>>& users() const {
    return users_;
  }

  std::vector<std::string> GridIds() const;
  std::vector<std::string> UserIds() const;

  bool HasGrid(std::string_view grid) const;
  // Counts of one grid keyed by user. Empty row for an unknown grid.
  const Row& GridRow(std::string_view grid) const;
  // Counts of one grid in user-token order.
  std::vector<int64_t> GridCounts(std::string_view grid) const;

  // m_{g,l}; zero when absent.
  int64_t Count(std::string_view grid, std::string_view user) const;

  // L_g, the number of users present in a grid.
  int64_t UsersInGrid(std::string_view grid) const;
  // G_l, the number of grids a user occupies.
  int64_t GridsOfUser(std::string_view user) const;
  // G_1 = max_l G_l.
  int64_t MaxGridsPerUser() const;
  // m_g* = max_l m_{g,l}.
  int64_t MaxCountInGrid(std::string_view grid) const;
  // Sum over users of m_{g,l}.
  int64_t GridTotal(std::string_view grid) const;
  // m_l = sum over grids of m_{g,l}.
  int64_t UserTotal(std::string_view user) const;
  int64_t NumGrids() const { return static_cast<int64_t>(grids_.size()); }
  int64_t NumUsers() const { return static_cast<int64_t>(users_.size()); }

  friend bool operator==(const OccupancyArray& a, const OccupancyArray& b) {
    return a.grids_ == b.grids_;
  }

 private:
  std::map<std::string, Row> grids_;
  std::map<std::string, std::set<std::string>> users_;
};

struct Record {
  std::string user;
  std::string grid;
  double value = 0.0;
};

// One user's samples in one grid, in file order (index j).
struct UserSamples {
  std::string user;
  std::vector<double> values;
};

// Records plus the public value bound U. Immutable after construction.
class Dataset {
 public:
  // Validates every value against [0, bound_u]. Errors: ValueOutOfRange,
  // EmptyDataset, InvalidBound.
  static absl::StatusOr<Dataset> Create(std::vector<Record> records,
                                        double bound_u);

  double bound_u() const { return bound_u_; }
  const std::vector<Record>& records() const { return records_; }

  const OccupancyArray& occupancy() const { return occupancy_; }

  std::vector<std::string> GridIds() const { return occupancy_.GridIds(); }

  // Samples of one grid grouped by user (user-token order, values in file
  // order). Empty for an unknown grid.
  std::vector<UserSamples> GridSamples(std::string_view grid) const;

  // All values of one grid, grouped by user as above.
  std::vector<double> GridValues(std::string_view grid) const;

 private:
  Dataset() = default;

  std::vector<Record> records_;
  double bound_u_ = 0.0;
  OccupancyArray occupancy_;
  // grid -> user -> values in file order.
  std::map<std::string, std::map<std::string, std::vector<double>>> samples_;
};

// Sample mean and population variance (divisor n) of one grid.
struct GridStats {
  double mean = 0.0;
  double variance = 0.0;
  int64_t n = 0;
};

// Mean and population variance of a sequence of values. n must be positive.
GridStats ComputeStats(const std::vector<double>& values);

// Parses "user,grid,value" CSV. Errors: MalformedRow, ValueOutOfRange,
// EmptyDataset, InvalidBound.
absl::StatusOr<Dataset> ParseDataset(std::string_view csv_text,
                                     double bound_u);

// Parses "user,grid,count" CSV. Errors: MalformedRow, NonPositiveCount,
// DuplicateEntry, EmptyDataset.
absl::StatusOr<OccupancyArray> ParseOccupancy(std::string_view csv_text);

// Errors: UnknownGrid.
absl::StatusOr<GridStats> ComputeGridStats(const Dataset& dataset,
                                           std::string_view grid);

std::string FormatDatasetCsv(const Dataset& dataset);
std::string FormatOccupancyCsv(const OccupancyArray& occupancy);

}  // namespace dpcomposer

#endif  // DPCOMPOSER_DATASET_H_
