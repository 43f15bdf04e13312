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

#include <cstddef>
#include <cstdint>

#include "dpcomposer/kernels.h"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace dpcomposer {
namespace kernels_internal {

#if defined(__AVX2__)
namespace {

// Horizontal reduction in the same order as the scalar reference:
// (lane0 + lane2) + (lane1 + lane3).
inline double Reduce(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d pair = _mm_add_pd(lo, hi);  // {l0+l2, l1+l3}
  return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

double SumAvx2(const double* v, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
  double total = Reduce(acc);
  for (; i < n; ++i) total += v[i];
  return total;
}

double SumSquaredDeviationsAvx2(const double* v, size_t n, double center) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), c);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = Reduce(acc);
  for (; i < n; ++i) {
    const double d = v[i] - center;
    total += d * d;
  }
  return total;
}

double ClampedSumAvx2(const double* v, size_t n, double lo, double hi) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // max/min argument order mirrors std::max(v, lo) / std::min(., hi).
    const __m256d x = _mm256_min_pd(_mm256_max_pd(_mm256_loadu_pd(v + i), vlo),
                                    vhi);
    acc = _mm256_add_pd(acc, x);
  }
  double total = Reduce(acc);
  for (; i < n; ++i) {
    const double x = v[i] < lo ? lo : v[i];
    total += hi < x ? hi : x;
  }
  return total;
}

int64_t SumMinCapAvx2(const int64_t* c, size_t n, int64_t cap) {
  const __m256i vcap = _mm256_set1_epi64x(cap);
  __m256i acc = _mm256_setzero_si256();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i x =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c + i));
    // No 64-bit min in AVX2; select through a signed compare.
    const __m256i gt = _mm256_cmpgt_epi64(x, vcap);
    acc = _mm256_add_epi64(acc, _mm256_blendv_epi8(x, vcap, gt));
  }
  alignas(32) int64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  int64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) total += c[i] < cap ? c[i] : cap;
  return total;
}

}  // namespace

const KernelTable* Avx2Kernels() {
  static constexpr KernelTable kTable = {&SumAvx2, &SumSquaredDeviationsAvx2,
                                         &ClampedSumAvx2, &SumMinCapAvx2};
  return &kTable;
}

#else

const KernelTable* Avx2Kernels() { return nullptr; }

#endif

}  // namespace kernels_internal
}  // namespace dpcomposer
