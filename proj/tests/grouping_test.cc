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

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpcomposer {
namespace {

using ::dpcomposer::testing::ConstantUsers;
using ::dpcomposer::testing::MakeUsers;
using ::dpcomposer::testing::RandomCounts;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

// Users whose samples are labelled 10*user + index, so provenance is
// visible in the values.
std::vector<UserSamples> LabelledUsers(const std::vector<int64_t>& counts) {
  std::vector<std::vector<double>> values;
  for (size_t u = 0; u < counts.size(); ++u) {
    std::vector<double> v;
    for (int64_t j = 0; j < counts[u]; ++j) v.push_back(10.0 * u + j);
    values.push_back(v);
  }
  return MakeUsers(values);
}

std::vector<std::vector<std::string>> Owners(const ArrayGroup& group) {
  std::vector<std::vector<std::string>> out;
  for (const auto& array : group.arrays) {
    std::vector<std::string> owners;
    for (const ArrayEntry& e : array) owners.push_back(e.source_user);
    out.push_back(owners);
  }
  return out;
}

// Straightforward BestFit: scan every array for the fullest one that fits.
int64_t NaiveBestFitCount(std::vector<int64_t> counts, int64_t m_ub) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  std::vector<int64_t> fill;
  for (int64_t c : counts) {
    const int64_t r = std::min(c, m_ub);
    int64_t best = -1;
    for (size_t i = 0; i < fill.size(); ++i) {
      if (fill[i] + r <= m_ub && (best < 0 || fill[i] > fill[best])) best = i;
    }
    if (best < 0) {
      fill.push_back(r);
    } else {
      fill[best] += r;
    }
  }
  return static_cast<int64_t>(fill.size());
}

int64_t NaiveOptimizedMub(const std::vector<int64_t>& counts) {
  const int64_t lo = *std::min_element(counts.begin(), counts.end());
  const int64_t hi = *std::max_element(counts.begin(), counts.end());
  int64_t best = lo;
  long double best_obj = -1;
  for (int64_t m = lo; m <= hi; ++m) {
    long double s = 0;
    for (int64_t c : counts) s += std::min(c, m);
    const long double obj = s / std::sqrt(static_cast<long double>(m));
    if (obj > best_obj * (1 + 1e-15L)) {
      best_obj = obj;
      best = m;
    }
  }
  return best;
}

TEST(ArrayCountKTest, FloorOfCappedTotal) {
  EXPECT_EQ(ArrayCountK(std::vector<int64_t>{5, 3, 2}, 3), 2);
  EXPECT_EQ(ArrayCountK(std::vector<int64_t>{4}, 4), 1);
  EXPECT_EQ(ArrayCountK(std::vector<int64_t>{4, 3, 2, 2}, 4), 2);
}

TEST(WrapAroundTest, HandSimulatedExample) {
  absl::StatusOr<ArrayGroup> g = WrapAround(LabelledUsers({4, 3, 2, 2}), 4);
  ASSERT_TRUE(g.ok());
  EXPECT_THAT(Owners(*g),
              ElementsAre(ElementsAre("u000", "u000", "u000", "u000"),
                          ElementsAre("u001", "u001", "u001", "u002")));
}

TEST(WrapAroundTest, SmallCases) {
  absl::StatusOr<ArrayGroup> single = WrapAround(LabelledUsers({4}), 4);
  ASSERT_TRUE(single.ok());
  EXPECT_EQ(single->arrays.size(), 1u);
  absl::StatusOr<ArrayGroup> pair = WrapAround(LabelledUsers({2, 2}), 2);
  ASSERT_TRUE(pair.ok());
  EXPECT_THAT(Owners(*pair), ElementsAre(ElementsAre("u000", "u000"),
                                         ElementsAre("u001", "u001")));
}

TEST(WrapAroundTest, RejectsZeroCapacity) {
  EXPECT_THAT(WrapAround(LabelledUsers({1}), 0).status().message(),
              HasSubstr("InvalidCapacity"));
  EXPECT_THAT(BestFit(LabelledUsers({1}), 0).status().message(),
              HasSubstr("InvalidCapacity"));
}

TEST(BestFitTest, HandSimulatedExamples) {
  absl::StatusOr<ArrayGroup> g = BestFit(LabelledUsers({4, 3, 2, 2}), 4);
  ASSERT_TRUE(g.ok());
  EXPECT_THAT(Owners(*g),
              ElementsAre(ElementsAre("u000", "u000", "u000", "u000"),
                          ElementsAre("u001", "u001", "u001"),
                          ElementsAre("u002", "u002", "u003", "u003")));
  absl::StatusOr<ArrayGroup> one = BestFit(LabelledUsers({1}), 5);
  ASSERT_TRUE(one.ok());
  EXPECT_EQ(one->arrays.size(), 1u);
  EXPECT_EQ(one->arrays[0].size(), 1u);
  absl::StatusOr<ArrayGroup> three = BestFit(LabelledUsers({3, 3, 2}), 3);
  ASSERT_TRUE(three.ok());
  EXPECT_EQ(three->arrays.size(), 3u);
}

TEST(BestFitTest, SortsByCountThenToken) {
  // Unsorted input: u000 has 1 sample, u001 has 3, u002 has 3.
  absl::StatusOr<ArrayGroup> g = BestFit(LabelledUsers({1, 3, 3}), 4);
  ASSERT_TRUE(g.ok());
  EXPECT_THAT(Owners(*g),
              ElementsAre(ElementsAre("u001", "u001", "u001", "u000"),
                          ElementsAre("u002", "u002", "u002")));
}

TEST(MubTest, Median) {
  EXPECT_EQ(MedianMub(std::vector<int64_t>{1, 46, 417}), 46);
  EXPECT_EQ(MedianMub(std::vector<int64_t>{7}), 7);
  EXPECT_EQ(MedianMub(std::vector<int64_t>{8, 2, 6, 4}), 4);
}

TEST(MubTest, Optimized) {
  EXPECT_EQ(OptimizedMub(std::vector<int64_t>{1, 4, 9}), 9);
  EXPECT_EQ(OptimizedMub(std::vector<int64_t>{13}), 13);
  EXPECT_EQ(OptimizedMub(std::vector<int64_t>{3, 3, 3}), 3);
}

TEST(MubTest, OptimizedMatchesExhaustiveScan) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::vector<int64_t> counts = RandomCounts(gen, 12, 40);
    EXPECT_EQ(OptimizedMub(counts), NaiveOptimizedMub(counts));
  }
}

TEST(ArrayMeansTest, MeansAndWeights) {
  ArrayGroup g;
  g.capacity = 2;
  g.arrays = {{{2, "a"}, {4, "a"}}, {{0, "b"}}, {{9, "c"}, {9, "d"}}};
  const ArrayMeans m = ComputeArrayMeans(g);
  EXPECT_THAT(m.means, ElementsAre(3.0, 0.0, 9.0));
  EXPECT_THAT(m.weights, ElementsAre(2, 1, 2));

  absl::StatusOr<ArrayGroup> best = BestFit(ConstantUsers({4, 3, 2, 2}, 5), 4);
  ASSERT_TRUE(best.ok());
  EXPECT_THAT(ComputeArrayMeans(*best).means, ElementsAre(5.0, 5.0, 5.0));
}

TEST(GroupingPropertyTest, InvariantsOnRandomInstances) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 400; ++trial) {
    const std::vector<int64_t> counts = RandomCounts(gen, 15, 12);
    std::uniform_int_distribution<int64_t> cap(1, 14);
    const int64_t m_ub = cap(gen);
    const std::vector<UserSamples> users = LabelledUsers(counts);
    const int64_t k = ArrayCountK(counts, m_ub);

    absl::StatusOr<ArrayGroup> wrap = WrapAround(users, m_ub);
    absl::StatusOr<ArrayGroup> best = BestFit(users, m_ub);
    ASSERT_TRUE(wrap.ok() && best.ok());
    EXPECT_EQ(static_cast<int64_t>(wrap->arrays.size()), k);
    EXPECT_GE(best->arrays.size(), wrap->arrays.size());
    EXPECT_EQ(static_cast<int64_t>(best->arrays.size()),
              NaiveBestFitCount(counts, m_ub));
    EXPECT_EQ(*BestFitArrayCount(counts, m_ub),
              static_cast<int64_t>(best->arrays.size()));

    std::map<std::string, std::set<size_t>> wrap_arrays, best_arrays;
    int64_t placed = 0;
    for (size_t i = 0; i < wrap->arrays.size(); ++i) {
      EXPECT_EQ(static_cast<int64_t>(wrap->arrays[i].size()), m_ub);
      for (const ArrayEntry& e : wrap->arrays[i]) {
        wrap_arrays[e.source_user].insert(i);
        ++placed;
      }
    }
    EXPECT_EQ(placed, k * m_ub);
    for (const auto& [user, arrays] : wrap_arrays) {
      ASSERT_LE(arrays.size(), 2u);
      if (arrays.size() == 2) EXPECT_EQ(*arrays.rbegin(), *arrays.begin() + 1);
    }
    int64_t best_placed = 0;
    for (size_t i = 0; i < best->arrays.size(); ++i) {
      EXPECT_LE(static_cast<int64_t>(best->arrays[i].size()), m_ub);
      for (const ArrayEntry& e : best->arrays[i]) {
        best_arrays[e.source_user].insert(i);
        ++best_placed;
      }
    }
    int64_t capped = 0;
    for (int64_t c : counts) capped += std::min(c, m_ub);
    EXPECT_EQ(best_placed, capped);
    for (const auto& [user, arrays] : best_arrays) EXPECT_EQ(arrays.size(), 1u);
  }
}

}  // namespace
}  // namespace dpcomposer
