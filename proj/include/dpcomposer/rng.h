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

#ifndef DPCOMPOSER_RNG_H_
#define DPCOMPOSER_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace dpcomposer {

// Seeded deterministic random stream. The same seed and the same sequence of
// calls always yield the same outputs. Split() derives an independent child
// stream from the seed and a label only, so children do not depend on how
// much of the parent has been consumed.
class RngStream {
 public:
  explicit RngStream(uint64_t seed);

  uint64_t seed() const { return seed_; }

  RngStream Split(std::string_view label) const;
  RngStream Split(uint64_t index) const;

  uint64_t NextU64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double Uniform01();

  // Zero-mean Laplace with scale b (E|Z| = b) by inverse CDF. b > 0.
  double Laplace(double scale);

  double Normal(double mean, double stddev);

  // Geometric on {1, 2, ...} with success probability p in (0, 1].
  int64_t Geometric(double p);

  // Index drawn with probability proportional to exp(log_weights[i]).
  // Entries equal to -infinity have zero mass. At least one entry must be
  // finite.
  size_t Categorical(std::span<const double> log_weights);

  std::mt19937_64& engine() { return engine_; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

// Inverse CDF of Laplace(0, scale) at u in (0, 1).
double LaplaceFromUniform(double u, double scale);

}  // namespace dpcomposer

#endif  // DPCOMPOSER_RNG_H_
