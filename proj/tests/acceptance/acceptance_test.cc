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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpcomposer/composition.h"
#include "dpcomposer/dataset.h"
#include "dpcomposer/grouping.h"
#include "dpcomposer/harness.h"
#include "dpcomposer/mechanisms.h"
#include "dpcomposer/rng.h"
#include "dpcomposer/sensitivity.h"
#include "dpcomposer/synth.h"
#include "dpcomposer/worst_case_bias.h"

namespace dpcomposer {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void Fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<UserSamples> UsersFromCounts(const std::vector<int64_t>& counts,
                                         std::mt19937_64& gen, double u) {
  std::uniform_real_distribution<double> value(0.0, u);
  std::vector<UserSamples> users;
  for (size_t i = 0; i < counts.size(); ++i) {
    UserSamples s{absl::StrFormat("u%03d", i), {}};
    for (int64_t k = 0; k < counts[i]; ++k) s.values.push_back(value(gen));
    users.push_back(std::move(s));
  }
  return users;
}

std::vector<int64_t> RandomCounts(std::mt19937_64& gen, int max_users,
                                  int max_count) {
  std::uniform_int_distribution<int> users(1, max_users);
  std::uniform_int_distribution<int64_t> count(1, max_count);
  std::vector<int64_t> counts(users(gen));
  for (int64_t& c : counts) c = count(gen);
  return counts;
}

// 1. Variance sensitivity closed form against the endpoint brute force.
Outcome SensitivityOracle() {
  Outcome o;
  const auto start = Clock::now();
  std::set<VarianceBranch> branches;
  int64_t checked = 0;
  std::vector<int64_t> counts;
  std::function<void(int64_t)> recurse = [&](int64_t remaining) {
    if (!counts.empty()) {
      const SensitivityReport closed = *VarianceSensitivity(counts, 1.0);
      const double brute = *BruteForceVarianceSensitivity(counts, 1.0);
      ++checked;
      branches.insert(closed.branch);
      if (std::abs(closed.delta_var - brute) > 1e-12) {
        o.Fail(absl::StrCat("mismatch at first count ", counts[0], ": ",
                            closed.delta_var, " vs ", brute));
      }
    }
    if (counts.size() == 4) return;
    for (int64_t m = 1; m <= remaining; ++m) {
      counts.push_back(m);
      recurse(remaining - m);
      counts.pop_back();
    }
  };
  recurse(9);
  if (branches.size() != 3) o.Fail("not all three branches covered");
  const double secs = Seconds(start);
  if (secs >= 60) o.Fail("runtime exceeded 60 s");
  if (o.pass) {
    o.detail = absl::StrFormat("%d compositions, 3 branches, %.1f s", checked,
                               secs);
  }
  return o;
}

// 2. All counts equal to one.
Outcome ItemLevel() {
  Outcome o;
  for (int64_t l = 2; l <= 50; ++l) {
    const std::vector<int64_t> ones(l, 1);
    const double d = VarianceSensitivity(ones, 1.0)->delta_var;
    const double expected =
        static_cast<double>(l - 1) / static_cast<double>(l * l);
    if (d != expected) o.Fail(absl::StrCat("L=", l, ": ", d, " vs ", expected));
    if (!(d < 8.0 / l)) o.Fail(absl::StrCat("L=", l, " not below 8/L"));
  }
  if (o.pass) o.detail = "L = 2..50 exact, all below 8/L";
  return o;
}

// 3. Extremal datasets attain the worst-case bias; random data never exceeds
// it.
Outcome BiasTightness() {
  Outcome o;
  std::mt19937_64 gen(303);
  int instances = 0;
  while (instances < 50) {
    std::vector<int64_t> counts = RandomCounts(gen, 5, 6);
    std::vector<int64_t> retained(counts.size());
    for (size_t i = 0; i < counts.size(); ++i) {
      retained[i] = std::uniform_int_distribution<int64_t>(0, counts[i])(gen);
    }
    int64_t kept = 0, total = 0;
    for (size_t i = 0; i < counts.size(); ++i) {
      kept += retained[i];
      total += counts[i];
    }
    if (kept == 0 || kept == total) continue;
    ++instances;
    const double u = 1.0 + instances % 3;
    const BiasReport bound = *VarianceBias(counts, retained, u);
    for (BiasTarget target : {BiasTarget::kMean, BiasTarget::kVariance}) {
      const Dataset d = *ExtremalBiasDataset(counts, retained, u, target);
      const BiasReport got = *MeasuredBias(d.GridSamples("g"), retained);
      const double want =
          target == BiasTarget::kMean ? bound.e_mu : bound.e_var;
      const double have =
          target == BiasTarget::kMean ? got.e_mu : got.e_var;
      if (std::abs(want - have) > 1e-12) {
        o.Fail(absl::StrCat("extremal dataset misses bound: ", have, " vs ",
                            want));
      }
    }
    std::bernoulli_distribution coin(0.5);
    for (int r = 0; r < 1000; ++r) {
      std::vector<UserSamples> users = UsersFromCounts(counts, gen, u);
      if (r % 2 == 1) {
        for (UserSamples& s : users) {
          for (double& v : s.values) v = coin(gen) ? u : 0.0;
        }
      }
      const BiasReport got = *MeasuredBias(users, retained);
      if (got.e_mu > bound.e_mu + 1e-12 || got.e_var > bound.e_var + 1e-12) {
        o.Fail("random dataset exceeds the bound");
      }
    }
  }
  if (o.pass) o.detail = "50 instances, 1000 datasets each";
  return o;
}

// 4. Grouping invariants.
Outcome GroupingInvariants() {
  Outcome o;
  std::mt19937_64 gen(404);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<int64_t> counts = RandomCounts(gen, 12, 15);
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    const int64_t m_ub = std::uniform_int_distribution<int64_t>(*lo, *hi)(gen);
    const std::vector<UserSamples> users = UsersFromCounts(counts, gen, 1.0);
    const int64_t k = ArrayCountK(counts, m_ub);
    const ArrayGroup best = *BestFit(users, m_ub);
    const ArrayGroup wrap = *WrapAround(users, m_ub);
    const int64_t kbar = static_cast<int64_t>(best.arrays.size());
    if (kbar < k) o.Fail("Kbar < K");
    if (*BestFitArrayCount(counts, m_ub) != kbar) {
      o.Fail("BestFitArrayCount disagrees with BestFit");
    }
    std::map<std::string, std::set<size_t>> best_arrays, wrap_arrays;
    for (size_t a = 0; a < best.arrays.size(); ++a) {
      if (static_cast<int64_t>(best.arrays[a].size()) > m_ub) {
        o.Fail("BestFit array over capacity");
      }
      for (const ArrayEntry& e : best.arrays[a]) {
        best_arrays[e.source_user].insert(a);
      }
    }
    for (const auto& [user, arrays] : best_arrays) {
      if (arrays.size() != 1) o.Fail("BestFit splits a user");
    }
    int64_t placed = 0;
    for (size_t a = 0; a < wrap.arrays.size(); ++a) {
      placed += static_cast<int64_t>(wrap.arrays[a].size());
      for (const ArrayEntry& e : wrap.arrays[a]) {
        wrap_arrays[e.source_user].insert(a);
      }
    }
    for (const auto& [user, arrays] : wrap_arrays) {
      if (arrays.size() > 2 ||
          (arrays.size() == 2 && *arrays.rbegin() != *arrays.begin() + 1)) {
        o.Fail("WrapAround user spans non-adjacent or >2 arrays");
      }
    }
    if (placed != k * m_ub) o.Fail("WrapAround placed != K * m_UB");
    if (static_cast<int64_t>(wrap.arrays.size()) != k) {
      o.Fail("WrapAround array count != K");
    }
  }
  if (o.pass) o.detail = "1000 random instances";
  return o;
}

// 5. Gain lemmas.
Outcome GainLemmas() {
  Outcome o;
  std::mt19937_64 gen(505);
  for (int i = 0; i < 200; ++i) {
    const std::vector<int64_t> counts = RandomCounts(gen, 15, 30);
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    for (int64_t m = *lo; m <= *hi; ++m) {
      const GainReport g = ComputeGainReport(counts, m, 1.0);
      if (g.delta_f < g.delta_tilde * (1 - 1e-12)) {
        o.Fail(absl::StrCat("delta_f < delta_tilde at m_UB=", m));
      }
    }
    const GainReport med = ComputeGainReport(counts, MedianMub(counts), 1.0);
    if (med.gain < med.opt / 2 * (1 - 1e-12)) {
      o.Fail(absl::StrCat("median gain ", med.gain, " < OPT/2 = ",
                          med.opt / 2));
    }
  }
  if (o.pass) o.detail = "200 instances, every m_UB";
  return o;
}

// 6. Clip-User worked trace.
Outcome ClipUserTrace() {
  Outcome o;
  const OccupancyArray occ = *OccupancyArray::FromCounts(
      {{"g1", {{"u1", 2}, {"u2", 2}}},
       {"g2", {{"u1", 1}, {"u3", 3}, {"u4", 3}, {"u5", 3}}}});
  const ClipUserResult r = *ClipUser(occ, 1.0, 1.0);
  if (std::abs(r.error_cap - 1.5) > 1e-12) o.Fail("E != 1.5");
  if (r.trace.size() != 1 || r.trace[0].user != "u1" ||
      r.trace[0].grid != "g2") {
    o.Fail("expected exactly one suppression of u1 in g2");
  } else if (std::abs(r.trace[0].error - 1.4611) > 1e-9) {
    o.Fail(absl::StrFormat(
        "post-suppression error %.10f, expected 1.4611 (bias_mean %.4f, "
        "bias_var %.4f, noise %.4f + %.4f)",
        r.trace[0].error, r.per_grid_errors[1].bias_mean,
        r.per_grid_errors[1].bias_var, r.per_grid_errors[1].noise_mean,
        r.per_grid_errors[1].noise_var));
  }
  if (r.k_factor != 1) o.Fail("K != 1");
  const OccupancyArray variant = *OccupancyArray::FromCounts(
      {{"g1", {{"u1", 2}, {"u2", 2}}}, {"g2", {{"u1", 1}, {"u3", 3}}}});
  const ClipUserResult v = *ClipUser(variant, 1.0, 1.0);
  if (v.k_factor != 2 || !v.plan.empty()) o.Fail("variant did not halt at K=2");
  if (o.pass) o.detail = "E=1.5, u1 suppressed in g2, K=1; variant K=2";
  return o;
}

struct SynthInstances {
  std::vector<OccupancyArray> occupancies;
};

const SynthInstances& DefaultSizeInstances() {
  static const SynthInstances* instances = [] {
    auto* out = new SynthInstances;
    const RngStream root(707);
    const double gammas[] = {3.0, 6.0, 9.0};
    for (int i = 0; i < 200; ++i) {
      SynthParams p;
      p.heavy_gamma = gammas[i % 3];
      RngStream rng = root.Split(static_cast<uint64_t>(i));
      out->occupancies.push_back(GenerateOccupancy(p, rng)->occupancy);
    }
    return out;
  }();
  return *instances;
}

std::vector<double> TenthGrid() {
  std::vector<double> eps;
  for (int k = 1; k <= 10; ++k) eps.push_back(k / 10.0);
  return eps;
}

// 7 and 8 share the Clip-User runs.
struct ClipRuns {
  std::vector<std::vector<ClipUserResult>> results;  // [instance][eps]
  double seconds = 0.0;
};

const ClipRuns& DefaultSizeClipRuns() {
  static const ClipRuns* runs = [] {
    auto* out = new ClipRuns;
    const auto start = Clock::now();
    const SynthInstances& inst = DefaultSizeInstances();
    const std::vector<double> eps = TenthGrid();
    out->results.resize(inst.occupancies.size());
    ParallelFor(static_cast<int64_t>(inst.occupancies.size()), [&](int64_t i) {
      for (double e : eps) {
        out->results[i].push_back(*ClipUser(inst.occupancies[i], 65.0, e));
      }
    });
    out->seconds = Seconds(start);
    return out;
  }();
  return *runs;
}

Outcome ClipUserInvariants() {
  Outcome o;
  const auto start = Clock::now();
  const SynthInstances& inst = DefaultSizeInstances();
  const ClipRuns& runs = DefaultSizeClipRuns();
  const std::vector<double> eps = TenthGrid();
  std::vector<double> p_hat(eps.size(), 0.0), naive(eps.size(), 0.0);
  for (size_t i = 0; i < inst.occupancies.size(); ++i) {
    const int64_t g1 = inst.occupancies[i].MaxGridsPerUser();
    for (size_t e = 0; e < eps.size(); ++e) {
      const ClipUserResult& r = runs.results[i][e];
      for (double m : r.stage_max_errors) {
        if (m > r.error_cap * (1 + 1e-12)) o.Fail("stage exceeded E");
      }
      if (r.k_factor > g1) o.Fail("K > G1");
      p_hat[e] += r.k_factor * eps[e];
      naive[e] += g1 * eps[e];
    }
  }
  for (size_t e = 0; e < eps.size(); ++e) {
    if (p_hat[e] > naive[e] * (1 + 1e-12)) o.Fail("P_hat > G1 eps");
  }
  const double secs = Seconds(start);
  if (secs >= 300) o.Fail(absl::StrFormat("runtime %.1f s >= 300 s", secs));
  if (o.pass) {
    o.detail = absl::StrFormat(
        "200 occupancies x 10 epsilons, mean K at eps=1: %.2f, %.1f s",
        p_hat.back() / 200.0, secs);
  }
  return o;
}

Outcome PseudoUserChecks() {
  Outcome o;
  const SynthInstances& inst = DefaultSizeInstances();
  const ClipRuns& runs = DefaultSizeClipRuns();
  const std::vector<double> eps = TenthGrid();
  int64_t grids = 0, exhaustive = 0;
  auto check = [&](const OccupancyArray& occ, const ClipUserResult& r,
                   double u, double e) {
    const PseudoUserResult p = *PseudoUserOptimize(occ, r.plan, u, e);
    for (size_t g = 0; g < p.per_grid_errors.size(); ++g) {
      const ErrorBudget& opt = p.per_grid_errors[g];
      const ErrorBudget& clipped = r.per_grid_errors[g];
      ++grids;
      if (opt.total > clipped.total * (1 + 1e-12)) {
        o.Fail(absl::StrCat("grid ", opt.grid, " optimized error above E_g"));
      }
      const GridPlanRows rows = PlanRows(occ, r.plan, opt.grid);
      std::set<int64_t> distinct;
      for (int64_t v : rows.retained) {
        if (v > 0) distinct.insert(v);
      }
      if (distinct.size() > 12) continue;
      ++exhaustive;
      double best = INFINITY;
      int64_t best_m = 0;
      for (int64_t m = *distinct.begin(); m <= *distinct.rbegin(); ++m) {
        const double t =
            CappedGridError(rows.counts, rows.retained, m, u, e)->total;
        if (t < best) {
          best = t;
          best_m = m;
        }
      }
      if (std::abs(best - opt.total) > 1e-12 * std::max(1.0, best) ||
          best_m != p.per_grid_m.at(opt.grid)) {
        o.Fail(absl::StrCat("scan mismatch in grid ", opt.grid));
      }
    }
  };
  for (size_t i = 0; i < inst.occupancies.size(); ++i) {
    for (size_t e = 0; e < eps.size(); ++e) {
      check(inst.occupancies[i], runs.results[i][e], 65.0, eps[e]);
    }
  }
  // Small instances where few distinct counts are common.
  const RngStream root(808);
  for (int i = 0; i < 200; ++i) {
    SynthParams p;
    p.num_grids = 4;
    p.num_users = 15;
    p.geo_q = 0.3;
    p.heavy_gamma = 3.0;
    RngStream rng = root.Split(static_cast<uint64_t>(i));
    const OccupancyArray occ = GenerateOccupancy(p, rng)->occupancy;
    const ClipUserResult r = *ClipUser(occ, 1.0, 0.5);
    check(occ, r, 1.0, 0.5);
  }
  if (exhaustive == 0) o.Fail("no grid qualified for the exhaustive scan");
  if (o.pass) {
    o.detail = absl::StrCat(grids, " grids, ", exhaustive,
                            " re-scanned independently");
  }
  return o;
}

// 9. Laplace statistics.
Outcome LaplaceStatistics() {
  Outcome o;
  const double b = 1.7;
  const int n = 100000;
  RngStream rng(909);
  std::vector<double> z(n);
  double abs_sum = 0.0;
  for (double& v : z) {
    v = *SampleLaplace(rng, b);
    abs_sum += std::abs(v);
  }
  const double mean_abs = abs_sum / n;
  if (std::abs(mean_abs / b - 1.0) > 0.02) {
    o.Fail(absl::StrCat("E|Z| = ", mean_abs, " for b = ", b));
  }
  std::string tails;
  for (double delta : {0.1, 0.01}) {
    const double t = b * std::log(1.0 / delta);
    int64_t over = 0;
    for (double v : z) over += std::abs(v) >= t;
    const double freq = static_cast<double>(over) / n;
    // The bound is attained with equality in one dimension, so allow the
    // sampling error of the frequency estimate.
    const double slack = 3.0 * std::sqrt(delta * (1 - delta) / n);
    if (freq > delta + slack) {
      o.Fail(absl::StrCat("tail frequency ", freq, " at delta ", delta));
    }
    absl::StrAppend(&tails, absl::StrFormat(" P(|Z|>=b ln(1/%g))=%.4f", delta,
                                            freq));
  }
  if (o.pass) o.detail = absl::StrFormat("E|Z|/b=%.4f%s", mean_abs / b, tails);
  return o;
}

// 10. Exponential mechanism frequencies.
Outcome ExponentialMechanism() {
  Outcome o;
  const std::vector<double> means = {1.2, 1.4, 3.3};
  const IntervalCosts costs = *ComputeIntervalCosts(means, 1.0, 4.0);
  if (costs.costs != std::vector<int64_t>{3, 1, 2, 2}) {
    o.Fail("costs differ from {3,1,2,2}");
    return o;
  }
  std::vector<double> q;
  for (int64_t c : costs.costs) q.push_back(std::exp(-2.0 * c / 4.0));
  double z = 0.0;
  for (double v : q) z += v;
  std::map<double, int64_t> hits;  // keyed by interval centre
  RngStream rng(1010);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const IntervalEstimate iv = *PrivateInterval(means, 1.0, 1.0, 4.0, rng);
    // Recover the bin from the clamped interval [x - 1.5, x + 1.5].
    const double x = iv.lo > 0 ? iv.lo + 1.5 : iv.hi - 1.5;
    ++hits[x];
  }
  double tv = 0.0;
  for (size_t k = 0; k < q.size(); ++k) {
    tv += std::abs(static_cast<double>(hits[costs.midpoints[k]]) / n -
                   q[k] / z);
  }
  tv /= 2;
  if (!(tv < 0.01)) o.Fail(absl::StrCat("total variation ", tv));
  if (o.pass) o.detail = absl::StrFormat("TV = %.5f over 1e5 draws", tv);
  return o;
}

// 11. Scaling laws.
Outcome ScalingLaws() {
  Outcome o;
  std::mt19937_64 gen(1111);
  const std::vector<int64_t> lambdas = {2, 3, 10};
  std::map<std::string, int64_t> failures;
  int64_t checked = 0;
  for (int i = 0; i < 100; ++i) {
    const std::vector<int64_t> counts = RandomCounts(gen, 10, 12);
    const ScalingReport r = *CheckScalingLaws(counts, lambdas);
    for (const LawResult& l : r.laws) {
      ++checked;
      if (!l.passed) ++failures[l.law];
    }
  }
  if (!failures.empty()) {
    std::string which;
    for (const auto& [law, n] : failures) {
      absl::StrAppend(&which, which.empty() ? "" : ", ", law, " x", n);
    }
    o.Fail(absl::StrCat("laws violated: ", which));
  }
  if (o.pass) o.detail = absl::StrCat(checked, " law checks");
  return o;
}

// 12. Synthetic generator structure.
Outcome SynthStructure() {
  Outcome o;
  for (uint64_t seed : {1, 2, 3}) {
    SynthParams p;
    p.seed = seed;
    p.heavy_gamma = 3.0;
    const SynthOccupancy s = *GenerateOccupancy(p);
    for (int64_t l = 1; l <= p.num_users; ++l) {
      int64_t j = 0;
      while ((int64_t{2} << j) <= l) ++j;
      if (s.occupancy.GridsOfUser(SynthUserToken(l, p.num_users)) != 12 - j) {
        o.Fail(absl::StrCat("user ", l, " occupies the wrong number of grids"));
      }
    }
    if (s.heavy_hitters.size() != 12) o.Fail("missing heavy hitter");
    for (const auto& [grid, heavy] : s.heavy_hitters) {
      const int64_t top = s.occupancy.MaxCountInGrid(grid);
      int64_t at_top = 0;
      for (const auto& [user, count] : s.occupancy.GridRow(grid)) {
        at_top += count == top;
      }
      if (at_top != 1 || s.occupancy.Count(grid, heavy) != top) {
        o.Fail(absl::StrCat("grid ", grid, " heavy hitter not unique"));
      }
    }
  }
  const double mu = 20.66769, sigma = std::sqrt(115.135), u = 65.0;
  const int64_t n = 200000;
  const OccupancyArray occ = *OccupancyArray::FromCounts({{"g", {{"a", n}}}});
  RngStream rng(1212);
  const Dataset d = *GenerateValues(occ, {mu, sigma}, u, rng);
  int64_t at_zero = 0, at_u = 0;
  for (const Record& r : d.records()) {
    at_zero += r.value == 0.0;
    at_u += r.value == u;
  }
  auto tail = [](double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); };
  const double p0 = tail(mu / sigma), pu = tail((u - mu) / sigma);
  const double f0 = static_cast<double>(at_zero) / n;
  const double fu = static_cast<double>(at_u) / n;
  if (std::abs(f0 - p0) > 3 * std::sqrt(p0 * (1 - p0) / n)) {
    o.Fail(absl::StrCat("mass at 0: ", f0, " vs ", p0));
  }
  if (std::abs(fu - pu) > 3 * std::sqrt(pu * (1 - pu) / n) + 1.0 / n) {
    o.Fail(absl::StrCat("mass at U: ", fu, " vs ", pu));
  }
  if (o.pass) {
    o.detail = absl::StrFormat("P(0)=%.5f (%.5f), P(U)=%.2e (%.2e)", f0, p0,
                               fu, pu);
  }
  return o;
}

// 13. CLI determinism.
std::string RunCli(const std::string& args, int* exit_code) {
  const std::string cmd =
      absl::StrCat(DPCOMPOSER_CLI_PATH, " ", args, " 2>&1");
  std::string out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    *exit_code = -1;
    return out;
  }
  char buf[4096];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int status = ::pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

Outcome CliDeterminism() {
  Outcome o;
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      absl::StrCat("dpcomposer_acceptance_", ::getpid());
  std::filesystem::create_directories(dir);
  int code = 0;
  const std::string data = (dir / "data.csv").string();
  const std::string occ = (dir / "occ.csv").string();
  std::ofstream(data) << RunCli(
      "synth --grids 4 --users 15 --q 0.3 --heavy-gamma 2 --values --seed 5",
      &code);
  if (code != 0) o.Fail("synth --values failed");
  std::ofstream(occ) << RunCli(
      "synth --grids 4 --users 15 --q 0.3 --heavy-gamma 2 --seed 5", &code);
  if (code != 0) o.Fail("synth failed");

  std::vector<std::string> commands = {
      absl::StrCat("stats --data ", data, " --u 65"),
      "sensitivity --counts 1,4,9 --retained 1,4,5 --u 2 --mub 4",
      "bias --counts 1,4,9 --retained 1,4,5 --u 2",
      absl::StrCat("clip-user --occupancy ", occ,
                   " --u 65 --eps 0.5 --pseudo-user"),
      "synth --grids 5 --users 31 --q 0.2 --heavy-gamma 3 --seed 11",
      "synth --grids 5 --users 31 --q 0.2 --values --seed 11",
      "montecarlo --kind privacy --grids 4 --users 15 --trials 3 "
      "--eps-list 0.5,1 --seed 13",
      "montecarlo --kind error --grids 4 --users 15 --trials 3 "
      "--eps-list 0.5,1 --seed 13",
      "scaling --counts 1,4,9 --lambdas 2,3",
      "--format json scaling --counts 2,3",
  };
  for (const char* m : {"baseline", "array_average", "levy", "fixed_quantile",
                        "optimized_quantile"}) {
    commands.push_back(absl::StrCat("mechanism --data ", data,
                                    " --u 65 --eps 1 --mechanism ", m,
                                    " --seed 17"));
    commands.push_back(absl::StrCat("mae --data ", data,
                                    " --u 65 --trials 50 --eps-list 0.5,1 "
                                    "--mechanism ",
                                    m, " --seed 19"));
  }
  for (const std::string& c : commands) {
    int a_code = 0, b_code = 0;
    const std::string a = RunCli(c, &a_code);
    const std::string b = RunCli(c, &b_code);
    if (a_code != 0) o.Fail(absl::StrCat("exit ", a_code, ": ", c));
    if (a != b || a_code != b_code) o.Fail(absl::StrCat("outputs differ: ", c));
    if (a.empty()) o.Fail(absl::StrCat("empty output: ", c));
  }
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = absl::StrCat(commands.size(), " invocations repeated");
  return o;
}

}  // namespace
}  // namespace dpcomposer

int main() {
  using dpcomposer::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>>
      criteria = {
          {"variance sensitivity matches brute force",
           dpcomposer::SensitivityOracle},
          {"item-level variance sensitivity", dpcomposer::ItemLevel},
          {"worst-case bias is tight", dpcomposer::BiasTightness},
          {"grouping invariants", dpcomposer::GroupingInvariants},
          {"array-averaging gain lemmas", dpcomposer::GainLemmas},
          {"Clip-User worked trace", dpcomposer::ClipUserTrace},
          {"Clip-User invariants on synthetic occupancies",
           dpcomposer::ClipUserInvariants},
          {"pseudo-user optimizer", dpcomposer::PseudoUserChecks},
          {"Laplace statistics", dpcomposer::LaplaceStatistics},
          {"exponential mechanism frequencies",
           dpcomposer::ExponentialMechanism},
          {"scaling laws", dpcomposer::ScalingLaws},
          {"synthetic generator structure", dpcomposer::SynthStructure},
          {"CLI determinism", dpcomposer::CliDeterminism},
      };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Outcome o = criteria[i].second();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": "
              << criteria[i].first << " (" << o.detail << ")" << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
