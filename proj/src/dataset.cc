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

#include "dpcomposer/dataset.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "dpcomposer/kernels.h"
#include "dpcomposer/status_macros.h"

namespace dpcomposer {
namespace {

const OccupancyArray::Row& EmptyRow() {
  static const OccupancyArray::Row kEmpty;
  return kEmpty;
}

// Splits CSV text into trimmed rows of fields, checking the header. Blank
// lines are skipped. Quoting is not supported; tokens cannot contain commas.
absl::StatusOr<std::vector<std::vector<std::string>>> SplitCsv(
    std::string_view csv_text, const std::vector<std::string>& header) {
  std::vector<std::vector<std::string>> rows;
  bool saw_header = false;
  int line_number = 0;
  for (absl::string_view line :
       absl::StrSplit(absl::string_view(csv_text.data(), csv_text.size()),
                      '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    for (absl::string_view field : absl::StrSplit(line, ',')) {
      fields.emplace_back(absl::StripAsciiWhitespace(field));
    }
    if (!saw_header) {
      if (fields != header) {
        return absl::InvalidArgumentError(
            absl::StrCat("MalformedRow: expected header '",
                         absl::StrJoin(header, ","), "' at line ", line_number));
      }
      saw_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("MalformedRow: line ", line_number, " has ",
                       fields.size(), " fields, expected ", header.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("MalformedRow: empty token at line ", line_number));
    }
    rows.push_back(std::move(fields));
  }
  if (!saw_header) {
    return absl::InvalidArgumentError("MalformedRow: missing header");
  }
  return rows;
}

}  // namespace

absl::StatusOr<OccupancyArray> OccupancyArray::FromCounts(
    std::map<std::string, Row> counts) {
  OccupancyArray occupancy;
  for (auto& [grid, row] : counts) {
    for (auto& [user, count] : row) {
      DPC_RETURN_IF_ERROR(occupancy.Add(grid, user, count));
    }
  }
  return occupancy;
}

absl::Status OccupancyArray::Add(const std::string& grid,
                                 const std::string& user, int64_t count) {
  if (count < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "NonPositiveCount: (", user, ",", grid, ") has count ", count));
  }
  Row& row = grids_[grid];
  if (!row.emplace(user, count).second) {
    return absl::InvalidArgumentError(
        absl::StrCat("DuplicateEntry: (", user, ",", grid, ") listed twice"));
  }
  users_[user].insert(grid);
  return absl::OkStatus();
}

std::vector<std::string> OccupancyArray::GridIds() const {
  std::vector<std::string> ids;
  ids.reserve(grids_.size());
  for (const auto& [grid, row] : grids_) ids.push_back(grid);
  return ids;
}

std::vector<std::string> OccupancyArray::UserIds() const {
  std::vector<std::string> ids;
  ids.reserve(users_.size());
  for (const auto& [user, grids] : users_) ids.push_back(user);
  return ids;
}

bool OccupancyArray::HasGrid(std::string_view grid) const {
  return grids_.find(std::string(grid)) != grids_.end();
}

const OccupancyArray::Row& OccupancyArray::GridRow(std::string_view grid) const {
  auto it = grids_.find(std::string(grid));
  return it == grids_.end() ? EmptyRow() : it->second;
}

std::vector<int64_t> OccupancyArray::GridCounts(std::string_view grid) const {
  std::vector<int64_t> counts;
  for (const auto& [user, count] : GridRow(grid)) counts.push_back(count);
  return counts;
}

int64_t OccupancyArray::Count(std::string_view grid,
                              std::string_view user) const {
  const Row& row = GridRow(grid);
  auto it = row.find(std::string(user));
  return it == row.end() ? 0 : it->second;
}

int64_t OccupancyArray::UsersInGrid(std::string_view grid) const {
  return static_cast<int64_t>(GridRow(grid).size());
}

int64_t OccupancyArray::GridsOfUser(std::string_view user) const {
  auto it = users_.find(std::string(user));
  return it == users_.end() ? 0 : static_cast<int64_t>(it->second.size());
}

int64_t OccupancyArray::MaxGridsPerUser() const {
  int64_t best = 0;
  for (const auto& [user, grids] : users_) {
    best = std::max<int64_t>(best, static_cast<int64_t>(grids.size()));
  }
  return best;
}

int64_t OccupancyArray::MaxCountInGrid(std::string_view grid) const {
  int64_t best = 0;
  for (const auto& [user, count] : GridRow(grid)) best = std::max(best, count);
  return best;
}

int64_t OccupancyArray::GridTotal(std::string_view grid) const {
  int64_t total = 0;
  for (const auto& [user, count] : GridRow(grid)) total += count;
  return total;
}

int64_t OccupancyArray::UserTotal(std::string_view user) const {
  auto it = users_.find(std::string(user));
  if (it == users_.end()) return 0;
  int64_t total = 0;
  for (const std::string& grid : it->second) total += Count(grid, user);
  return total;
}

absl::StatusOr<Dataset> Dataset::Create(std::vector<Record> records,
                                        double bound_u) {
  if (!(bound_u > 0.0) || !std::isfinite(bound_u)) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidBound: U must be positive, got ", bound_u));
  }
  if (records.empty()) {
    return absl::InvalidArgumentError("EmptyDataset: no records");
  }
  Dataset dataset;
  dataset.bound_u_ = bound_u;
  std::map<std::string, OccupancyArray::Row> counts;
  for (const Record& r : records) {
    if (!(r.value >= 0.0 && r.value <= bound_u)) {
      return absl::OutOfRangeError(absl::StrCat(
          "ValueOutOfRange: value ", r.value, " for (", r.user, ",", r.grid,
          ") outside [0, ", bound_u, "]"));
    }
    dataset.samples_[r.grid][r.user].push_back(r.value);
    ++counts[r.grid][r.user];
  }
  DPC_ASSIGN_OR_RETURN(dataset.occupancy_,
                       OccupancyArray::FromCounts(std::move(counts)));
  dataset.records_ = std::move(records);
  return dataset;
}

std::vector<UserSamples> Dataset::GridSamples(std::string_view grid) const {
  std::vector<UserSamples> out;
  auto it = samples_.find(std::string(grid));
  if (it == samples_.end()) return out;
  out.reserve(it->second.size());
  for (const auto& [user, values] : it->second) out.push_back({user, values});
  return out;
}

std::vector<double> Dataset::GridValues(std::string_view grid) const {
  std::vector<double> out;
  auto it = samples_.find(std::string(grid));
  if (it == samples_.end()) return out;
  for (const auto& [user, values] : it->second) {
    out.insert(out.end(), values.begin(), values.end());
  }
  return out;
}

GridStats ComputeStats(const std::vector<double>& values) {
  GridStats stats;
  stats.n = static_cast<int64_t>(values.size());
  if (values.empty()) return stats;
  const double n = static_cast<double>(values.size());
  stats.mean = Sum(values) / n;
  stats.variance = SumSquaredDeviations(values, stats.mean) / n;
  return stats;
}

absl::StatusOr<Dataset> ParseDataset(std::string_view csv_text,
                                     double bound_u) {
  DPC_ASSIGN_OR_RETURN(auto rows, SplitCsv(csv_text, {"user", "grid", "value"}));
  std::vector<Record> records;
  records.reserve(rows.size());
  for (auto& fields : rows) {
    double value = 0.0;
    if (!absl::SimpleAtod(fields[2], &value) || !std::isfinite(value)) {
      return absl::InvalidArgumentError(
          absl::StrCat("MalformedRow: non-numeric value '", fields[2], "'"));
    }
    records.push_back({std::move(fields[0]), std::move(fields[1]), value});
  }
  return Dataset::Create(std::move(records), bound_u);
}

absl::StatusOr<OccupancyArray> ParseOccupancy(std::string_view csv_text) {
  DPC_ASSIGN_OR_RETURN(auto rows, SplitCsv(csv_text, {"user", "grid", "count"}));
  if (rows.empty()) {
    return absl::InvalidArgumentError("EmptyDataset: no occupancy rows");
  }
  OccupancyArray occupancy;
  for (const auto& fields : rows) {
    int64_t count = 0;
    if (!absl::SimpleAtoi(fields[2], &count)) {
      return absl::InvalidArgumentError(
          absl::StrCat("MalformedRow: non-integer count '", fields[2], "'"));
    }
    DPC_RETURN_IF_ERROR(occupancy.Add(fields[1], fields[0], count));
  }
  return occupancy;
}

absl::StatusOr<GridStats> ComputeGridStats(const Dataset& dataset,
                                           std::string_view grid) {
  if (!dataset.occupancy().HasGrid(grid)) {
    return absl::NotFoundError(absl::StrCat("UnknownGrid: ", std::string(grid)));
  }
  return ComputeStats(dataset.GridValues(grid));
}

std::string FormatDatasetCsv(const Dataset& dataset) {
  std::string out = "user,grid,value\n";
  for (const Record& r : dataset.records()) {
    absl::StrAppend(&out, r.user, ",", r.grid, ",",
                    absl::StrFormat("%.17g", r.value), "\n");
  }
  return out;
}

std::string FormatOccupancyCsv(const OccupancyArray& occupancy) {
  std::string out = "user,grid,count\n";
  for (const auto& [grid, row] : occupancy.grids()) {
    for (const auto& [user, count] : row) {
      absl::StrAppend(&out, user, ",", grid, ",", count, "\n");
    }
  }
  return out;
}

}  // namespace dpcomposer
