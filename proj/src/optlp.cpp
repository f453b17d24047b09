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

#include "adfair/optlp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>

#include "adfair/io.hpp"

namespace adfair {

namespace {

constexpr double kGapTolerance = 1e-6;
constexpr double kBruteForceBudget = 2e8;

double pair_distance(const Instance& instance, std::size_t u, std::size_t v, std::size_t i) {
  return instance.metric(instance.category_of(i))(u, v);
}

double max_bid(const Instance& instance) {
  double top = 0.0;
  for (std::size_t u = 0; u < instance.num_users(); ++u) {
    for (double b : instance.bids().row(u)) top = std::max(top, b);
  }
  return top;
}

}  // namespace

std::size_t FairLP::pair_row(std::size_t u, std::size_t v, std::size_t i) const {
  const std::size_t slot = v < u ? v : v - 1;
  return n + (u * (n - 1) + slot) * k + i;
}

FairLP build_fair_lp(const Instance& instance, const SimplexOptions& options) {
  const std::size_t n = instance.num_users();
  const std::size_t k = instance.num_advertisers();
  if (n * k > kMaxLpVariables) {
    throw CapacityError("fair LP has " + std::to_string(n * k) + " variables; the limit is " +
                        std::to_string(kMaxLpVariables));
  }
  FairLP lp;
  lp.n = n;
  lp.k = k;
  const std::size_t rows = lp.num_rows();
  const double cells = static_cast<double>(rows + 2) * static_cast<double>(n * k + 2);
  if (cells > static_cast<double>(options.max_tableau)) {
    throw CapacityError("fair LP with " + std::to_string(rows) + " rows and " +
                        std::to_string(n * k) + " variables exceeds the tableau limit of " +
                        std::to_string(options.max_tableau) + " entries");
  }
  lp.A = Matrix(rows, n * k);
  lp.b.assign(rows, 0.0);
  lp.c.assign(n * k, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t i = 0; i < k; ++i) {
      lp.c[u * k + i] = instance.bid(u, i);
      lp.A(u, u * k + i) = 1.0;
    }
    lp.b[u] = 1.0;
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (v == u) continue;
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t r = lp.pair_row(u, v, i);
        lp.A(r, u * k + i) = 1.0;
        lp.A(r, v * k + i) = -1.0;
        lp.b[r] = pair_distance(instance, u, v, i);
      }
    }
  }
  return lp;
}

void dump_lp(const FairLP& lp, std::ostream& out) {
  out << "max";
  for (double x : lp.c) out << ' ' << format_double(x);
  out << '\n';
  for (std::size_t r = 0; r < lp.A.rows(); ++r) {
    for (std::size_t j = 0; j < lp.A.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(lp.A(r, j));
    }
    out << " <= " << format_double(lp.b[r]) << '\n';
  }
}

double dual_objective(const Instance& instance, const DualCertificate& certificate) {
  double total = std::accumulate(certificate.z.begin(), certificate.z.end(), 0.0);
  const std::size_t n = certificate.n;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      for (std::size_t i = 0; i < certificate.k; ++i) {
        total += pair_distance(instance, u, v, i) * certificate.w_at(u, v, i);
      }
    }
  }
  return total;
}

FairOptimum solve_fair_lp(const Instance& instance, const SimplexOptions& options) {
  const FairLP lp = build_fair_lp(instance, options);
  const LpSolution sol = solve_lp(lp.A, lp.b, lp.c, options);
  if (sol.status != LpStatus::kOptimal) {
    throw NumericalError("fair LP solve did not reach an optimum after " +
                         std::to_string(sol.pivots) + " pivots");
  }
  const std::size_t n = lp.n;
  const std::size_t k = lp.k;
  Matrix p(n, k);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t i = 0; i < k; ++i) p(u, i) = std::clamp(sol.x[u * k + i], 0.0, 1.0);
  }
  DualCertificate cert;
  cert.n = n;
  cert.k = k;
  cert.z.assign(sol.y.begin(), sol.y.begin() + static_cast<std::ptrdiff_t>(n));
  cert.w.assign(n * n * k, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      for (std::size_t i = 0; i < k; ++i) cert.w_at(u, v, i) = sol.y[lp.pair_row(u, v, i)];
    }
  }
  FairOptimum out{Allocation(std::move(p)), std::move(cert), 0.0, 0.0, 0.0, sol.pivots};
  out.primal = utility(instance, out.allocation);
  out.dual = dual_objective(instance, out.certificate);
  out.gap = std::abs(out.primal - out.dual) / (1.0 + std::abs(out.primal));
  if (out.gap > kGapTolerance) {
    std::ostringstream os;
    os << "fair LP duality gap " << out.gap << " exceeds " << kGapTolerance << " (primal "
       << out.primal << ", dual " << out.dual << ", " << sol.pivots << " pivots)";
    throw NumericalError(os.str());
  }
  return out;
}

UniformClosedForm uniform_closed_form(const Matrix& bids, double d) {
  const std::size_t n = bids.rows();
  const std::size_t k = bids.cols();
  if (k < 2) throw ContractError("closed form needs k >= 2");
  if (n < 1) throw ContractError("closed form needs at least one user");
  if (!(d >= 0.0 && d <= 1.0)) throw ContractError("closed form needs d in (0, 1]");
  UniformClosedForm out;
  out.bid_sums.assign(k, 0.0);
  out.ith_price.assign(k, 0.0);
  std::vector<double> sorted(k);
  for (std::size_t u = 0; u < n; ++u) {
    const auto row = bids.row(u);
    for (std::size_t i = 0; i < k; ++i) out.bid_sums[i] += row[i];
    std::copy(row.begin(), row.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (std::size_t i = 0; i < k; ++i) out.ith_price[i] += sorted[i];
  }
  out.x = static_cast<std::size_t>(std::max_element(out.bid_sums.begin(), out.bid_sums.end()) -
                                   out.bid_sums.begin());
  const double sx = out.bid_sums[out.x];
  if (sx >= out.ith_price[0] - 1e-12) {
    out.m = 0;
    out.revenue = sx;
    return out;
  }
  if (d == 0.0) {
    throw ContractError("closed form is undefined at d = 0 unless one advertiser tops every user");
  }
  const auto cap = static_cast<std::size_t>(std::floor(1.0 / d + 1e-9)) + 1;
  const std::size_t top = std::min(k - 1, cap);
  out.m = 1;
  for (std::size_t m = top; m >= 1; --m) {
    if (out.ith_price[m - 1] > sx + 1e-12) {
      out.m = m;
      break;
    }
  }
  const double m = static_cast<double>(out.m);
  double revenue = std::max(0.0, 1.0 - m * d) * sx;
  for (std::size_t i = 1; i < out.m; ++i) revenue += d * out.ith_price[i - 1];
  revenue += std::min(d, 1.0 - (m - 1.0) * d) * out.ith_price[out.m - 1];
  out.revenue = revenue;
  return out;
}

BruteForceOptimum brute_force_fair_opt(const Instance& instance, std::size_t grid_resolution) {
  const std::size_t n = instance.num_users();
  const std::size_t k = instance.num_advertisers();
  if (n > 3 || k > 3) throw CapacityError("brute force is limited to n <= 3 and k <= 3");
  if (grid_resolution < 20) throw ContractError("grid resolution must be >= 20");
  const double step = 1.0 / static_cast<double>(grid_resolution);
  const auto res = static_cast<long>(grid_resolution);

  Matrix p(n, k);
  Matrix best_p(n, k);
  double best = -1.0;
  double work = 0.0;

  auto bounds = [&](std::size_t u, std::size_t i) {
    double lo = 0.0;
    double hi = 1.0;
    for (std::size_t v = 0; v < u; ++v) {
      const double dist = pair_distance(instance, u, v, i);
      lo = std::max(lo, p(v, i) - dist);
      hi = std::min(hi, p(v, i) + dist);
    }
    return std::pair{lo, hi};
  };

  // Exact best row for the last user given the earlier rows: start at the
  // lower bounds, then spend the remaining mass on the highest bids.
  auto solve_last = [&](std::size_t u, double partial) {
    double used = 0.0;
    std::vector<double> hi(k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto [lo, h] = bounds(u, i);
      if (lo > h + 1e-12) return;
      p(u, i) = lo;
      hi[i] = h;
      used += lo;
    }
    if (used > 1.0 + 1e-12) return;
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return instance.bid(u, a) > instance.bid(u, b); });
    double left = 1.0 - used;
    for (std::size_t i : order) {
      const double add = std::min(left, std::max(0.0, hi[i] - p(u, i)));
      p(u, i) += add;
      left -= add;
    }
    double value = partial;
    for (std::size_t i = 0; i < k; ++i) value += instance.bid(u, i) * p(u, i);
    if (value > best) {
      best = value;
      best_p = p;
    }
  };

  std::function<void(std::size_t, std::size_t, long, double)> fill =
      [&](std::size_t u, std::size_t i, long mass_left, double partial) {
        if (++work > kBruteForceBudget) {
          throw CapacityError("brute force grid search exceeded its work budget");
        }
        if (u + 1 == n) {
          solve_last(u, partial);
          return;
        }
        if (i == k) {
          double value = partial;
          for (std::size_t a = 0; a < k; ++a) value += instance.bid(u, a) * p(u, a);
          fill(u + 1, 0, res, value);
          return;
        }
        const auto [lo, hi] = bounds(u, i);
        const auto t0 = static_cast<long>(std::ceil(lo / step - 1e-9));
        const auto t1 = std::min(mass_left, static_cast<long>(std::floor(hi / step + 1e-9)));
        for (long t = std::max(0L, t0); t <= t1; ++t) {
          p(u, i) = static_cast<double>(t) * step;
          fill(u, i + 1, mass_left - t, partial);
        }
      };
  fill(0, 0, res, 0.0);
  if (best < 0.0) throw NumericalError("brute force found no feasible grid allocation");
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t i = 0; i < k; ++i) best_p(u, i) = std::clamp(best_p(u, i), 0.0, 1.0);
  }
  return {Allocation(best_p), best};
}

LpStructureReport verify_lp_structure(const Instance& instance, const Allocation& allocation,
                                      const DualCertificate& certificate) {
  require_same_shape(instance, allocation);
  const std::size_t n = instance.num_users();
  const std::size_t k = instance.num_advertisers();
  if (certificate.n != n || certificate.k != k || certificate.z.size() != n ||
      certificate.w.size() != n * n * k) {
    throw ContractError("certificate dimensions do not match the instance");
  }
  const double scale = 1.0 + max_bid(instance);
  const double tol = kGapTolerance * scale;
  LpStructureReport out;

  for (std::size_t u = 0; u < n; ++u) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      sum += allocation(u, i);
      out.primal_violation = std::max(out.primal_violation, -allocation(u, i));
    }
    const double slack = 1.0 - sum;
    out.primal_violation = std::max(out.primal_violation, -slack);
    out.dual_violation = std::max(out.dual_violation, -certificate.z[u]);
    out.complementary_slackness =
        std::max(out.complementary_slackness, std::abs(slack * certificate.z[u]));
    for (std::size_t v = 0; v < n; ++v) {
      if (v == u) continue;
      for (std::size_t i = 0; i < k; ++i) {
        const double w = certificate.w_at(u, v, i);
        const double pair_slack =
            pair_distance(instance, u, v, i) - (allocation(u, i) - allocation(v, i));
        out.primal_violation = std::max(out.primal_violation, -pair_slack);
        out.dual_violation = std::max(out.dual_violation, -w);
        out.complementary_slackness =
            std::max(out.complementary_slackness, std::abs(pair_slack * w));
      }
    }
  }
  // Reduced cost of p_u^i: z_u + sum_v w_{u,v} - sum_v w_{v,u} - b_u^i >= 0,
  // and zero wherever p_u^i > 0.
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t i = 0; i < k; ++i) {
      double reduced = certificate.z[u] - instance.bid(u, i);
      for (std::size_t v = 0; v < n; ++v) {
        if (v == u) continue;
        reduced += certificate.w_at(u, v, i) - certificate.w_at(v, u, i);
      }
      out.dual_violation = std::max(out.dual_violation, -reduced);
      out.complementary_slackness =
          std::max(out.complementary_slackness, std::abs(reduced * allocation(u, i)));
    }
  }
  out.primal = utility(instance, allocation);
  out.dual = dual_objective(instance, certificate);
  out.gap = std::abs(out.primal - out.dual) / (1.0 + std::abs(out.primal));
  out.primal_feasible = out.primal_violation <= kTolerance;
  out.dual_feasible = out.dual_violation <= tol;
  out.slackness_holds = out.complementary_slackness <= tol;
  out.strong_duality = out.gap <= kGapTolerance;

  std::vector<double> sums(k, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t i = 0; i < k; ++i) sums[i] += instance.bid(u, i);
  }
  const double top = *std::max_element(sums.begin(), sums.end());
  for (std::size_t i = 0; i < k; ++i) {
    if (sums[i] >= top - 1e-12 * (1.0 + top)) continue;
    double lowest = 1.0;
    for (std::size_t u = 0; u < n; ++u) lowest = std::min(lowest, allocation(u, i));
    if (lowest > 1e-6) out.property_failures.push_back(i);
  }
  out.property_holds = out.property_failures.empty();
  return out;
}

nlohmann::json to_json(const LpStructureReport& report) {
  return {{"pass", report.pass()},
          {"primal_feasible", report.primal_feasible},
          {"primal_violation", report.primal_violation},
          {"dual_feasible", report.dual_feasible},
          {"dual_violation", report.dual_violation},
          {"complementary_slackness", report.slackness_holds},
          {"slackness_residual", report.complementary_slackness},
          {"strong_duality", report.strong_duality},
          {"primal", report.primal},
          {"dual", report.dual},
          {"gap", report.gap},
          {"property_holds", report.property_holds},
          {"property_failures", report.property_failures}};
}

nlohmann::json to_json(const UniformClosedForm& form) {
  return {{"bid_sums", form.bid_sums},
          {"ith_price", form.ith_price},
          {"x", form.x},
          {"m", form.m},
          {"revenue", form.revenue}};
}

}  // namespace adfair
