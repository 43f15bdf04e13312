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

#include "dpcomposer/rng.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dpcomposer {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(uint64_t seed) : seed_(seed), engine_(SplitMix64(seed)) {}

RngStream RngStream::Split(std::string_view label) const {
  return RngStream(SplitMix64(seed_ ^ SplitMix64(Fnv1a(label))));
}

RngStream RngStream::Split(uint64_t index) const {
  return RngStream(SplitMix64(SplitMix64(seed_) + SplitMix64(~index)));
}

double RngStream::Uniform01() {
  // (k + 0.5) / 2^53 for a 53-bit k never hits 0 or 1.
  const uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double LaplaceFromUniform(double u, double scale) {
  const double centered = u - 0.5;
  if (centered == 0.0) return 0.0;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(centered));
  return centered < 0.0 ? -magnitude : magnitude;
}

double RngStream::Laplace(double scale) {
  return LaplaceFromUniform(Uniform01(), scale);
}

double RngStream::Normal(double mean, double stddev) {
  if (stddev == 0.0) return mean;
  std::normal_distribution<double> dist(mean, stddev);
  return dist(engine_);
}

int64_t RngStream::Geometric(double p) {
  if (p >= 1.0) return 1;
  std::geometric_distribution<int64_t> dist(p);
  return dist(engine_) + 1;
}

size_t RngStream::Categorical(std::span<const double> log_weights) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> cumulative(log_weights.size());
  double total = 0.0;
  for (size_t i = 0; i < log_weights.size(); ++i) {
    if (log_weights[i] != -std::numeric_limits<double>::infinity()) {
      total += std::exp(log_weights[i] - top);
    }
    cumulative[i] = total;
  }
  const double target = Uniform01() * total;
  const auto it =
      std::upper_bound(cumulative.begin(), cumulative.end(), target);
  size_t index = static_cast<size_t>(it - cumulative.begin());
  if (index >= log_weights.size()) index = log_weights.size() - 1;
  // Skip zero-mass entries that share a cumulative value with a predecessor.
  while (log_weights[index] == -std::numeric_limits<double>::infinity() &&
         index + 1 < log_weights.size()) {
    ++index;
  }
  return index;
}

}  // namespace dpcomposer
