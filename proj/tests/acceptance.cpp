// Copyright 2026 The adfair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance gate. Prints one PASS/FAIL line per criterion on stdout and
// supporting numbers on stderr. `--criterion N` runs a single criterion.
// Exit status is 0 only if every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adfair/adversary.hpp"
#include "adfair/bounds.hpp"
#include "adfair/core.hpp"
#include "adfair/fairness.hpp"
#include "adfair/mechanisms.hpp"
#include "adfair/optlp.hpp"

using namespace adfair;

namespace {

// Pinned tolerances.
constexpr double kLpRelTol = 1e-6;
constexpr double kLpRuntimeSeconds = 120.0;
constexpr double kExampleTol = 1e-9;
constexpr double kBoundTol = 1e-9;
constexpr double kTightnessTol = 1e-3;
constexpr double kEnvyHorizonSlack = 0.02;
constexpr double kRelaxedTol = 1e-12;
constexpr double kJackTol = 1e-6;
constexpr double kOracleTol = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void note(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  std::fputs("    ", stderr);
  std::vfprintf(stderr, fmt, args);
  std::fputc('\n', stderr);
  va_end(args);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t u = 0; u < n; ++u) out.push_back("u" + std::to_string(u));
  return out;
}

std::vector<std::vector<std::size_t>> singletons(std::size_t c) {
  std::vector<std::vector<std::size_t>> out(c);
  for (std::size_t j = 0; j < c; ++j) out[j] = {j};
  return out;
}

Metric line_metric(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = unit(rng);
  Matrix m(n, n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) m(u, v) = std::abs(x[u] - x[v]);
  return Metric::from_matrix(std::move(m));
}

double per_user_value(const std::vector<double>& b, double l) {
  double num = 0, den = 0, top = 0;
  for (double x : b) {
    double g = std::pow(x, l);
    num += g * x;
    den += g;
    top = std::max(top, x);
  }
  return num / den / top;
}

// LP optimum vs closed form on random uniform instances.
Outcome criterion_1() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto start = std::chrono::steady_clock::now();
  std::size_t solved = 0, bad = 0;
  double worst = 0;
  for (std::size_t k = 2; k <= 6; ++k) {
    for (std::size_t n = 2; n <= 6; ++n) {
      for (int di = 1; di <= 9; ++di) {
        double d = di / 10.0;
        for (int trial = 0; trial < 100; ++trial) {
          Matrix bids(n, k);
          for (std::size_t u = 0; u < n; ++u)
            for (std::size_t i = 0; i < k; ++i) bids(u, i) = unit(rng);
          FairOptimum opt = solve_fair_lp(make_uniform_instance(bids, d));
          double cf = uniform_closed_form(bids, d).revenue;
          double rel = std::abs(opt.primal - cf) / std::max(1.0, std::abs(cf));
          worst = std::max(worst, rel);
          bad += rel > kLpRelTol;
          ++solved;
        }
      }
    }
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o;
  o.pass = bad == 0 && seconds <= kLpRuntimeSeconds;
  o.detail = std::to_string(solved) + " LPs, " + std::to_string(bad) + " mismatches, worst rel " +
             fmt("%.2e", worst) + ", " + fmt("%.1f", seconds) + " s";
  return o;
}

// Perfect-matching LP fair value vs the appendix formula.
Outcome criterion_2() {
  std::size_t cases = 0, bad = 0;
  double worst = 0;
  for (std::size_t k : {2, 3, 4, 6}) {
    for (double d : {0.1, 0.3, 0.5, 0.8}) {
      for (double ratio : {0.25, 0.5, 0.75}) {
        Instance pm = gen_perfect_matching(k, d, 1.0, ratio);
        double got = fair_value(pm, solve_fair_lp(pm).allocation).value;
        double want = d + (1 - d) / k + (1 - d) * ((k - 1.0) / k) * ratio;
        worst = std::max(worst, std::abs(got - want));
        bad += std::abs(got - want) > kExampleTol;
        ++cases;
      }
    }
  }
  return {bad == 0, std::to_string(cases) + " cases, worst |diff| " + fmt("%.2e", worst)};
}

// Mechanism 1 per-user lower bound, plus near-tightness by local search.
Outcome criterion_3() {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t rows = 0, below = 0, tight = 0, combos = 0;
  double largest_gap = 0;
  for (std::size_t k : {9, 16, 64}) {
    for (double l : {1.0, 2.0, 3.0, 5.0}) {
      ++combos;
      double bound = proportional_lower_bound(k, l);
      double lowest = 1e9;
      std::vector<double> b(k);
      for (int trial = 0; trial < 100000; ++trial) {
        // Mix uniform, sparse and two-level rows.
        int shape = trial % 3;
        double level = unit(rng);
        for (auto& x : b) {
          if (shape == 0) x = unit(rng);
          else if (shape == 1) x = unit(rng) < 0.5 ? 0.0 : unit(rng);
          else x = level * (1 + 0.01 * unit(rng));
        }
        b[rng() % k] = 1.0 + unit(rng);
        double v = per_user_value(b, l);
        lowest = std::min(lowest, v);
        below += v < bound - kBoundTol;
        ++rows;
      }
      // Local search from random starts toward the smallest per-user value.
      double best = lowest;
      for (int restart = 0; restart < 20; ++restart) {
        for (auto& x : b) x = unit(rng);
        b[0] = 1.0;
        double cur = per_user_value(b, l);
        for (double step = 0.3; step > 1e-6; step *= 0.7) {
          for (int sweep = 0; sweep < 30; ++sweep) {
            for (std::size_t i = 1; i < k; ++i) {
              double keep = b[i];
              b[i] = std::clamp(keep + step * (2 * unit(rng) - 1), 0.0, 1.0);
              double v = per_user_value(b, l);
              if (v < cur) cur = v;
              else b[i] = keep;
            }
          }
        }
        best = std::min(best, cur);
      }
      // Analytic infimum over rows (1, c, ..., c).
      double two_level = 1e9;
      for (int i = 1; i < 200000; ++i) {
        double c = i / 200000.0;
        double cl = std::pow(c, l);
        two_level = std::min(two_level, (1 + (k - 1) * cl * c) / (1 + (k - 1) * cl));
      }
      largest_gap = std::max(largest_gap, best - bound);
      tight += best - bound <= kTightnessTol;
      note("k=%zu l=%g bound=%.6f sampled_min=%.6f local_search=%.6f two_level_inf=%.6f gap=%.4f", k,
           l, bound, lowest, best, two_level, best - bound);
    }
  }
  Outcome o;
  o.pass = below == 0 && tight == combos;
  o.detail = std::to_string(rows) + " rows, " + std::to_string(below) + " below bound; near-tight rows found for " +
             std::to_string(tight) + "/" + std::to_string(combos) + " (k,l), largest gap " +
             fmt("%.4f", largest_gap);
  return o;
}

// Bids that pass f_l, n users on a line metric; one category.
Instance lipschitz_instance(std::mt19937_64& rng, std::size_t n, std::size_t k, double l,
                            const Metric& metric) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // log f_l(d) >= 2d / l and |d(0, u) - d(0, v)| <= d(u, v), so log-bids
  // that move at slope <= 2 / l in d(0, u) pass. Steeper slopes are drawn
  // too and left to the rejection check.
  Matrix bids(n, k);
  for (std::size_t i = 0; i < k; ++i) {
    double base = std::log(0.05 + unit(rng));
    double slope = (2 * unit(rng) - 1) * 3.0 / l;
    bool silent = unit(rng) < 0.05;
    for (std::size_t u = 0; u < n; ++u) bids(u, i) = silent ? 0.0 : std::exp(base + slope * metric(0, u));
  }
  std::vector<std::size_t> all(k);
  std::iota(all.begin(), all.end(), 0);
  return Instance(names(n), k, {all}, bids, {metric});
}

// Mechanism 1 on f_l-compliant bids passes total variation.
Outcome criterion_4() {
  std::mt19937_64 rng(1004);
  std::size_t tested = 0, rejected = 0, failures = 0;
  for (double l : {1.0, 2.0, 3.0}) {
    std::size_t accepted = 0;
    while (accepted < 10000) {
      std::size_t n = 2 + rng() % 4, k = 2 + rng() % 5;
      Metric metric = rng() % 3 == 0 ? Metric::uniform(n, 0.05 + 0.9 * (rng() % 1000) / 1000.0)
                                     : line_metric(rng, n);
      Instance inst = lipschitz_instance(rng, n, k, l, metric);
      if (!check_bid_ratio(inst, BidRatioConstraint::family(l)).pass) {
        ++rejected;
        continue;
      }
      ++accepted;
      FairnessReport tv = check_total_variation(inst, run_stream(inst, Proportional{l}), 1.0);
      failures += !tv.pass || tv.violations != 0;
    }
    tested += accepted;
  }
  return {failures == 0, std::to_string(tested) + " instances (" + std::to_string(rejected) +
                             " rejected), " + std::to_string(failures) + " with violations"};
}

// Equal-spread guarantee and the envy adversary's matching upper bound.
Outcome criterion_5() {
  std::mt19937_64 rng(1005);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t streams = 0, below = 0, adversary_ok = 0, settings = 0;
  for (double beta : {1.0, 2.0}) {
    for (std::size_t C : {1, 2}) {
      ++settings;
      std::size_t c = C + 1;
      double bound = envy_tight_bound(beta, C);
      for (int trial = 0; trial < 2000; ++trial) {
        std::size_t n = 1 + rng() % 8;
        std::vector<CategorySet> pref(n);
        for (auto& s : pref) {
          std::vector<std::size_t> all(c);
          std::iota(all.begin(), all.end(), 0);
          std::shuffle(all.begin(), all.end(), rng);
          s.assign(all.begin(), all.begin() + 1 + rng() % C);
          std::sort(s.begin(), s.end());
        }
        Matrix bids(n, c);
        for (std::size_t u = 0; u < n; ++u)
          for (std::size_t j = 0; j < c; ++j) bids(u, j) = unit(rng) < 0.2 ? 0.0 : unit(rng);
        bids(0, rng() % c) = 1.0;
        Instance inst(names(n), c, singletons(c), bids,
                      std::vector<Metric>(c, Metric::uniform(n, 1.0)), pref);
        double v = fair_value(inst, run_stream(inst, EqualSpread{beta, C})).value;
        below += v < bound - kBoundTol;
        ++streams;
      }
      auto mech = make_mechanism(EqualSpread{beta, C}, singletons(c));
      AdversaryTrace trace = run_envy_adversary(*mech, c, C, beta, 1000, 2);
      // The adversary's own stream is a tested stream too.
      below += trace.realized < bound - kBoundTol;
      ++streams;
      bool ok = trace.audit.pass && trace.realized <= bound + kEnvyHorizonSlack;
      adversary_ok += ok;
      note("beta=%g C=%zu c=%zu bound=%.6f adversary realized=%.6f audit=%s", beta, C, c, bound,
           trace.realized, trace.audit.pass ? "pass" : "fail");
    }
  }
  return {below == 0 && adversary_ok == settings,
          std::to_string(streams) + " streams, " + std::to_string(below) + " below guarantee; adversary within " +
              fmt("%.2f", kEnvyHorizonSlack) + " of bound in " + std::to_string(adversary_ok) + "/" +
              std::to_string(settings) + " settings"};
}

// Highest-bidder-wins: relaxed fair value 1 and envy-freeness.
Outcome criterion_6() {
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t failures = 0;
  double worst = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::size_t n = 1 + rng() % 6, c = 1 + rng() % 6;
    std::vector<CategorySet> pref(n);
    for (auto& s : pref) {
      for (std::size_t j = 0; j < c; ++j)
        if (unit(rng) < 0.5) s.push_back(j);
      if (s.empty()) s.push_back(rng() % c);
    }
    Matrix bids(n, c);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t j = 0; j < c; ++j) bids(u, j) = unit(rng) < 0.15 ? 0.0 : std::floor(unit(rng) * 8) / 4;
    for (std::size_t u = 0; u < n; ++u) bids(u, pref[u][0]) += 0.125;  // keep the relaxed denominator positive
    std::vector<Metric> metrics;
    for (std::size_t j = 0; j < c; ++j) metrics.push_back(line_metric(rng, n));
    Instance inst(names(n), c, singletons(c), bids, metrics, pref);
    Allocation p = run_stream(inst, HighestBidderWins{});
    double dev = std::abs(relaxed_fair_value(inst, p).value - 1.0);
    worst = std::max(worst, dev);
    failures += dev > kRelaxedTol || !check_envy_freeness(inst, p, 1.0).pass;
  }
  return {failures == 0, "10000 instances, " + std::to_string(failures) + " failures, worst |rfv - 1| " +
                             fmt("%.1e", worst)};
}

// Jack-of-all-trades LP fair value.
Outcome criterion_7() {
  bool pass = true;
  std::ostringstream detail;
  for (std::size_t c = 1; c <= 6; ++c) {
    Instance jack = gen_jack_of_all_trades(c);
    double v = fair_value(jack, solve_fair_lp(jack).allocation).value;
    pass = pass && v <= 2.0 / (c + 1) + kJackTol;
    detail << (c > 1 ? ", " : "") << "c=" << c << ": " << fmt("%.6f", v) << "<=" << fmt("%.6f", 2.0 / (c + 1));
  }
  return {pass, detail.str()};
}

// Online adversary against Mechanism 1 at k=2, alpha=2.
Outcome criterion_8() {
  constexpr double kTarget = 0.7;  // online bound at k=2, d=0.1, alpha=2
  constexpr std::size_t kHorizon = 10000;
  bool pass = true;
  std::ostringstream detail;
  for (double l : {1.0, 2.0}) {
    auto mech = make_mechanism(Proportional{l}, {{0, 1}});
    AdversaryTrace t = run_online_adversary(*mech, 2, 0.1, 2.0, kHorizon);
    double slack = adversary_slack(kTarget, 2.0, kHorizon);
    bool ok = t.realized <= kTarget + slack + kBoundTol;
    pass = pass && ok;
    detail << (l > 1 ? "; " : "") << "l=" << l << " realized " << fmt("%.6f", t.realized) << " vs "
           << fmt("%.6f", kTarget + slack);
    note("l=%g: multiple-task audit at d=0.1 on the trace: %s (worst margin %.4f)", l,
         t.audit.pass ? "pass" : "fail", t.audit.worst_margin);
  }
  // The same trace at the smallest d where Mechanism 1 (l = 1) is fair on it.
  auto mech = make_mechanism(Proportional{1}, {{0, 1}});
  AdversaryTrace fair = run_online_adversary(*mech, 2, 1.0 / 3, 2.0, kHorizon);
  note("l=1 at d=1/3 (f_1(1/3) = alpha): audit %s, realized %.6f, bound %.6f + slack %.2e -> %s",
       fair.audit.pass ? "pass" : "fail", fair.realized, fair.bound, fair.slack,
       fair.within_bound() ? "within" : "exceeds");
  return {pass, detail.str()};
}

struct CompositionInstance {
  Instance instance;
  std::size_t k_prime;
};

CompositionInstance composition_instance(std::mt19937_64& rng, double l, std::size_t C) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t n = 2 + rng() % 3, c = 2 + rng() % 2;
  std::vector<std::vector<std::size_t>> cats(c);
  std::size_t k = 0;
  for (auto& cat : cats) {
    std::size_t size = 9 + rng() % 4;
    for (std::size_t t = 0; t < size; ++t) cat.push_back(k++);
  }
  std::vector<Metric> metrics;
  for (std::size_t j = 0; j < c; ++j) metrics.push_back(line_metric(rng, n));
  Matrix bids(n, k);
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t i : cats[j]) {
      double base = std::log(0.05 + unit(rng));
      double slope = (2 * unit(rng) - 1) * 3.0 / l;
      bool silent = unit(rng) < 0.05;
      for (std::size_t u = 0; u < n; ++u)
        bids(u, i) = silent ? 0.0 : std::exp(base + slope * metrics[j](0, u));
    }
  }
  std::vector<CategorySet> pref(n);
  for (auto& s : pref) {
    std::vector<std::size_t> all(c);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    s.assign(all.begin(), all.begin() + 1 + rng() % std::min(C, c));
    std::sort(s.begin(), s.end());
  }
  std::size_t kp = 0;
  for (const auto& cat : cats) kp = std::max(kp, cat.size());
  return {Instance(names(n), k, cats, bids, metrics, pref), kp};
}

// Composed mechanisms: compositional fairness and the fair-value formulas.
Outcome criterion_9() {
  std::mt19937_64 rng(1009);
  std::size_t tested = 0, rejected = 0, unfair = 0, below = 0;
  double worst1 = 1e9, worst2 = 1e9;
  while (tested < 1000) {
    double l = 1 + rng() % 3;
    std::size_t C = 1 + rng() % 2;
    CompositionInstance ci = composition_instance(rng, l, C);
    const Instance& inst = ci.instance;
    if (!check_bid_ratio(inst, BidRatioConstraint::family(l)).pass) {
      ++rejected;
      continue;
    }
    ++tested;
    Allocation p4 = run_stream(inst, Composed1{l});
    Allocation p5 = run_stream(inst, Composed2{1.0, C, l});
    unfair += !check_compositional(inst, p4, 1.0).pass;
    unfair += !check_compositional(inst, p5, 1.0).pass;
    double m1 = relaxed_fair_value(inst, p4).value - composition1_bound(ci.k_prime, l);
    double m2 = fair_value(inst, p5).value - composition2_bound(ci.k_prime, l, 1.0, C);
    worst1 = std::min(worst1, m1);
    worst2 = std::min(worst2, m2);
    below += (m1 < -kBoundTol) + (m2 < -kBoundTol);
  }
  return {unfair == 0 && below == 0,
          std::to_string(tested) + " instances (" + std::to_string(rejected) + " rejected), " +
              std::to_string(unfair) + " compositional failures, " + std::to_string(below) +
              " below formula; min margins " + fmt("%.4f", worst1) + " / " + fmt("%.4f", worst2)};
}

// Oracle suites.
Outcome criterion_10() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t maxdev_bad = 0, lpnorm_bad = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::size_t k = 1 + rng() % 12;
    std::vector<double> a(k), b(k);
    for (std::size_t i = 0; i < k; ++i) a[i] = unit(rng), b[i] = unit(rng);
    maxdev_bad += std::abs(maxdev(a, b) - maxdev_subset_oracle(a, b)) > kOracleTol;
  }
  for (int trial = 0; trial < 10000; ++trial) {
    std::size_t n = 1 + rng() % 10;
    double l = 1 + rng() % 5;
    std::vector<double> x(n);
    for (auto& v : x) v = unit(rng) < 0.1 ? 0.0 : unit(rng);
    x[0] += 0.01;
    double C = 0, lhs = 0;
    for (double v : x) C += std::pow(v, l), lhs += std::pow(v, l + 1);
    BoundQuery q;
    q.name = BoundName::kLpNorm;
    q.n = double(n);
    q.C = C;
    q.l = l;
    lpnorm_bad += lhs < bound_value(q) - kBoundTol;
  }
  bool super_ok = true;
  for (double l : {1.0, 2.0, 3.0, 5.0}) {
    auto r = classify_multiplicativity(BidRatioConstraint::family(l), 0.05);
    super_ok = super_ok && r.kind == Multiplicativity::kSuper && r.super_points == r.points;
  }
  std::vector<std::pair<double, double>> linear;
  for (int i = 0; i <= 100; ++i) linear.emplace_back(i / 100.0, 1.0 + i / 100.0);
  bool linear_sub =
      classify_multiplicativity(BidRatioConstraint::tabulated(linear), 0.05).kind == Multiplicativity::kSub;
  return {maxdev_bad == 0 && lpnorm_bad == 0 && super_ok && linear_sub,
          "maxdev mismatches " + std::to_string(maxdev_bad) + "/10000, lp-norm violations " +
              std::to_string(lpnorm_bad) + "/10000, f_l super " + (super_ok ? "yes" : "no") +
              ", linear sub " + (linear_sub ? "yes" : "no")};
}

// Ratio surface.
Outcome criterion_11() {
  std::vector<std::size_t> ks;
  for (std::size_t k = 5; k <= 100; k += 5) ks.push_back(k);
  std::vector<double> ds;
  for (int i = 1; i <= 19; ++i) ds.push_back(i * 0.05);
  bool ratio_ok = true, cell_monotone = true, spread_shrinks = true, spots_ok = true;
  double prev_max = 1e9, prev_spread = 1e9;
  std::vector<double> prev_cells;
  std::size_t out_of_domain = 0;
  for (double l : {1.0, 2.0, 3.0, 4.0, 5.0}) {
    auto cells = sweep_ratio_surface(l, ks, ds);
    double lo = 1e9, hi = 0;
    std::vector<double> ratios;
    for (const auto& cell : cells) {
      ratio_ok = ratio_ok && cell.ratio >= 1.0;
      lo = std::min(lo, cell.ratio);
      hi = std::max(hi, cell.ratio);
      ratios.push_back(cell.ratio);
      out_of_domain += !cell.in_domain;
      // Independent evaluation of the two formulas.
      double alpha = std::pow((1 + cell.d) / (1 - cell.d), 1.0 / l);
      double upper = (1 - 1.0 / cell.k - cell.d) / (alpha * alpha) + 1.0 / cell.k + cell.d;
      double lower = std::pow(cell.k - 1.0, -1.0 / l) * (cell.k - 1.0) / cell.k + 1.0 / cell.k;
      spots_ok = spots_ok && std::abs(cell.ratio - upper / lower) <= 1e-12 * (upper / lower);
    }
    if (!prev_cells.empty()) {
      for (std::size_t i = 0; i < ratios.size(); ++i) cell_monotone = cell_monotone && ratios[i] <= prev_cells[i] + 1e-12;
    }
    spread_shrinks = spread_shrinks && hi <= prev_max && hi - lo <= prev_spread;
    prev_max = hi;
    prev_spread = hi - lo;
    prev_cells = ratios;
    note("l=%g: ratio range [%.4f, %.4f]", l, lo, hi);
  }
  auto spot = sweep_ratio_surface(2, {10}, {0.6})[0];
  spots_ok = spots_ok && std::abs(spot.ratio - 1.9375) <= 1e-12;
  note("%zu cells lie outside d <= 1 - 1/k and are evaluated anyway", out_of_domain);
  return {ratio_ok && cell_monotone && spread_shrinks && spots_ok,
          std::string("ratio >= 1 ") + (ratio_ok ? "everywhere" : "violated") + ", per-cell non-increasing in l " +
              (cell_monotone ? "yes" : "no") + ", range shrinking " + (spread_shrinks ? "yes" : "no") +
              ", spot values " + (spots_ok ? "match" : "differ")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "lp_closed_form_equivalence", criterion_1},
      {2, "perfect_matching_reproduction", criterion_2},
      {3, "proportional_revenue_bound", criterion_3},
      {4, "bid_ratio_total_variation", criterion_4},
      {5, "envy_tight_pair", criterion_5},
      {6, "highest_bidder_relaxed", criterion_6},
      {7, "jack_of_all_trades", criterion_7},
      {8, "online_adversary", criterion_8},
      {9, "composition", criterion_9},
      {10, "oracle_suites", criterion_10},
      {11, "ratio_surface", criterion_11},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  bool all_pass = true;
  bool ran = false;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    ran = true;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %-30s %s  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  if (!ran) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return all_pass ? 0 : 1;
}
