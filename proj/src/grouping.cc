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

#include "dpcomposer/grouping.h"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpcomposer/kernels.h"
#include "dpcomposer/status_macros.h"

namespace dpcomposer {
namespace {

absl::Status CheckCapacity(int64_t m_ub) {
  if (m_ub < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("InvalidCapacity: m_UB must be >= 1, got ", m_ub));
  }
  return absl::OkStatus();
}

// BestFit placement over already-sorted sample counts: returns the array index
// for each user. Arrays are indexed in creation order.
//
// Candidate arrays are bucketed by fill level; the best candidate for a user
// needing r slots is the least index at the highest fill <= m_ub - r. Arrays
// that are still empty are all fresh, and the least-indexed one is the next
// unused index.
std::vector<int64_t> BestFitPlacement(std::span<const int64_t> sizes,
                                      int64_t m_ub, int64_t* num_arrays) {
  std::map<int64_t, std::set<int64_t>> by_fill;  // fill -> array indices
  std::vector<int64_t> fill;
  std::vector<int64_t> placement;
  placement.reserve(sizes.size());
  for (int64_t r : sizes) {
    int64_t target = -1;
    auto it = by_fill.upper_bound(m_ub - r);
    if (it != by_fill.begin()) {
      --it;
      target = *it->second.begin();
      it->second.erase(it->second.begin());
      if (it->second.empty()) by_fill.erase(it);
    } else {
      target = static_cast<int64_t>(fill.size());
      fill.push_back(0);
    }
    fill[target] += r;
    placement.push_back(target);
    if (fill[target] < m_ub) by_fill[fill[target]].insert(target);
  }
  *num_arrays = static_cast<int64_t>(fill.size());
  return placement;
}

}  // namespace

int64_t ArrayCountK(std::span<const int64_t> counts, int64_t m_ub) {
  if (m_ub < 1) return 0;
  return SumMinCap(counts, m_ub) / m_ub;
}

std::vector<UserSamples> SortUsersForGrouping(std::vector<UserSamples> users) {
  std::stable_sort(users.begin(), users.end(),
                   [](const UserSamples& a, const UserSamples& b) {
                     if (a.values.size() != b.values.size()) {
                       return a.values.size() > b.values.size();
                     }
                     return a.user < b.user;
                   });
  return users;
}

absl::StatusOr<ArrayGroup> WrapAround(const std::vector<UserSamples>& users,
                                      int64_t m_ub) {
  DPC_RETURN_IF_ERROR(CheckCapacity(m_ub));
  ArrayGroup group;
  group.capacity = m_ub;
  group.strategy = GroupingStrategy::kWrapAround;
  std::vector<ArrayEntry> current;
  current.reserve(m_ub);
  for (const UserSamples& u : SortUsersForGrouping(users)) {
    const int64_t r =
        std::min<int64_t>(static_cast<int64_t>(u.values.size()), m_ub);
    for (int64_t j = 0; j < r; ++j) {
      current.push_back({u.values[j], u.user});
      if (static_cast<int64_t>(current.size()) == m_ub) {
        group.arrays.push_back(std::move(current));
        current = {};
        current.reserve(m_ub);
      }
    }
  }
  // `current` is the trailing partial array, which is discarded.
  return group;
}

absl::StatusOr<ArrayGroup> BestFit(const std::vector<UserSamples>& users,
                                   int64_t m_ub) {
  DPC_RETURN_IF_ERROR(CheckCapacity(m_ub));
  const std::vector<UserSamples> sorted = SortUsersForGrouping(users);
  std::vector<int64_t> sizes;
  sizes.reserve(sorted.size());
  for (const UserSamples& u : sorted) {
    sizes.push_back(
        std::min<int64_t>(static_cast<int64_t>(u.values.size()), m_ub));
  }
  int64_t num_arrays = 0;
  const std::vector<int64_t> placement =
      BestFitPlacement(sizes, m_ub, &num_arrays);
  ArrayGroup group;
  group.capacity = m_ub;
  group.strategy = GroupingStrategy::kBestFit;
  group.arrays.resize(num_arrays);
  for (size_t i = 0; i < sorted.size(); ++i) {
    auto& array = group.arrays[placement[i]];
    for (int64_t j = 0; j < sizes[i]; ++j) {
      array.push_back({sorted[i].values[j], sorted[i].user});
    }
  }
  // Users with zero samples never create arrays, so all are non-empty except
  // when a zero-size user opened a fresh one.
  std::erase_if(group.arrays, [](const auto& a) { return a.empty(); });
  return group;
}

absl::StatusOr<ArrayGroup> GroupSamples(GroupingStrategy strategy,
                                        const std::vector<UserSamples>& users,
                                        int64_t m_ub) {
  return strategy == GroupingStrategy::kWrapAround ? WrapAround(users, m_ub)
                                                   : BestFit(users, m_ub);
}

absl::StatusOr<int64_t> BestFitArrayCount(std::span<const int64_t> counts,
                                          int64_t m_ub) {
  DPC_RETURN_IF_ERROR(CheckCapacity(m_ub));
  std::vector<int64_t> sizes;
  sizes.reserve(counts.size());
  for (int64_t c : counts) {
    if (c > 0) sizes.push_back(std::min(c, m_ub));
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  int64_t num_arrays = 0;
  BestFitPlacement(sizes, m_ub, &num_arrays);
  return num_arrays;
}

int64_t MedianMub(std::span<const int64_t> counts) {
  std::vector<int64_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted[(sorted.size() - 1) / 2];
}

int64_t OptimizedMub(std::span<const int64_t> counts) {
  const auto [lo_it, hi_it] = std::minmax_element(counts.begin(), counts.end());
  const int64_t lo = *lo_it;
  const int64_t hi = *hi_it;
  std::vector<int64_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());

  // Sweep m upward keeping S(m) = sum_l min(m_l, m) incrementally:
  // S(m) = (sum of counts below m) + m * (number of counts >= m).
  size_t below = 0;
  __int128 below_sum = 0;
  int64_t best_m = lo;
  __int128 best_s = 0;
  for (int64_t m = lo; m <= hi; ++m) {
    while (below < sorted.size() && sorted[below] < m) {
      below_sum += sorted[below];
      ++below;
    }
    const __int128 s =
        below_sum + static_cast<__int128>(m) * (sorted.size() - below);
    // s / sqrt(m) > best_s / sqrt(best_m)  <=>  s^2 * best_m > best_s^2 * m.
    if (m == lo || s * s * best_m > best_s * best_s * m) {
      best_m = m;
      best_s = s;
    }
  }
  return best_m;
}

ArrayMeans ComputeArrayMeans(const ArrayGroup& group) {
  ArrayMeans out;
  out.means.reserve(group.arrays.size());
  out.weights.reserve(group.arrays.size());
  std::vector<double> values;
  for (const auto& array : group.arrays) {
    values.clear();
    for (const ArrayEntry& e : array) values.push_back(e.value);
    const double w = static_cast<double>(values.size());
    out.means.push_back(values.empty() ? 0.0 : Sum(values) / w);
    out.weights.push_back(static_cast<int64_t>(values.size()));
  }
  return out;
}

}  // namespace dpcomposer
