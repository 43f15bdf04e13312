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

// Pseudo-user construction for one grid: users' samples are packed into
// arrays of capacity m_UB so that each user influences few arrays.

#ifndef DPCOMPOSER_GROUPING_H_
#define DPCOMPOSER_GROUPING_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpcomposer/dataset.h"

namespace dpcomposer {

enum class GroupingStrategy { kWrapAround, kBestFit };

struct ArrayEntry {
  double value = 0.0;
  std::string source_user;
};

struct ArrayGroup {
  int64_t capacity = 0;  // m_UB
  GroupingStrategy strategy = GroupingStrategy::kBestFit;
  // Each array holds at most `capacity` entries.
  std::vector<std::vector<ArrayEntry>> arrays;
};

struct ArrayMeans {
  std::vector<double> means;    // per-array sample mean
  std::vector<int64_t> weights;  // w(A_i)
};

// K = floor(sum_l min(m_l, m_ub) / m_ub).
int64_t ArrayCountK(std::span<const int64_t> counts, int64_t m_ub);

// Users sorted by non-increasing sample count, ties by user token.
std::vector<UserSamples> SortUsersForGrouping(std::vector<UserSamples> users);

// Packs each user's first min(m_l, m_ub) samples contiguously, spilling into
// the next array when the current one fills. The trailing partially filled
// array is dropped, so exactly ArrayCountK arrays are returned, all full.
// Errors: InvalidCapacity.
absl::StatusOr<ArrayGroup> WrapAround(const std::vector<UserSamples>& users,
                                      int64_t m_ub);

// Places each user's first min(m_l, m_ub) samples into the least-indexed of
// the most-filled arrays that still has room for all of them. Returns the
// non-empty arrays. Errors: InvalidCapacity.
absl::StatusOr<ArrayGroup> BestFit(const std::vector<UserSamples>& users,
                                   int64_t m_ub);

absl::StatusOr<ArrayGroup> GroupSamples(GroupingStrategy strategy,
                                        const std::vector<UserSamples>& users,
                                        int64_t m_ub);

// Number of non-empty BestFit arrays for the given counts (no values needed).
// Counts are sorted internally. Errors: InvalidCapacity.
absl::StatusOr<int64_t> BestFitArrayCount(std::span<const int64_t> counts,
                                          int64_t m_ub);

// Median of the counts; for an even number of users the lower middle value.
// Counts must be non-empty.
int64_t MedianMub(std::span<const int64_t> counts);

// argmax over integer m in [min count, max count] of
// sum_l min(m_l, m) / sqrt(m); the smallest maximizer on ties. Objectives are
// compared exactly. Counts must be non-empty and positive.
int64_t OptimizedMub(std::span<const int64_t> counts);

// Per-array means and fill counts.
ArrayMeans ComputeArrayMeans(const ArrayGroup& group);

}  // namespace dpcomposer

#endif  // DPCOMPOSER_GROUPING_H_
