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

#include "adfair/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "adfair/io.hpp"

namespace adfair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::pair<BoundName, std::string>>& name_table() {
  static const std::vector<std::pair<BoundName, std::string>> table = {
      {BoundName::kOfflineUniform, "offline_uniform"},
      {BoundName::kOnlineUniform, "online_uniform"},
      {BoundName::kProportionalLower, "proportional_lower"},
      {BoundName::kEnvyTight, "envy_tight"},
      {BoundName::kMultitaskCrossCategory, "multitask_cross_category"},
      {BoundName::kConcaveBidRatio, "concave_bidratio"},
      {BoundName::kPositionAuction, "position_auction"},
      {BoundName::kComposition1, "composition1"},
      {BoundName::kComposition2, "composition2"},
      {BoundName::kLpNorm, "lp_norm"},
      {BoundName::kPropallocNecessity, "propalloc_necessity"},
  };
  return table;
}

// Parameter access with domain checks that name the offending parameter.
class Params {
 public:
  explicit Params(const BoundQuery& q) : name_(to_string(q.name)) {}

  double get(const std::optional<double>& v, const char* param) const {
    if (!v) throw ContractError(name_ + " needs parameter " + param);
    if (!std::isfinite(*v)) throw ContractError(name_ + ": " + param + " must be finite");
    return *v;
  }

  double at_least(const std::optional<double>& v, const char* param, double lo) const {
    const double x = get(v, param);
    if (!(x >= lo)) fail(param, ">= " + num(lo));
    return x;
  }

  double greater(const std::optional<double>& v, const char* param, double lo) const {
    const double x = get(v, param);
    if (!(x > lo)) fail(param, "> " + num(lo));
    return x;
  }

  std::size_t integer(const std::optional<double>& v, const char* param, double lo) const {
    const double x = at_least(v, param, lo);
    if (x != std::floor(x)) fail(param, "an integer");
    return static_cast<std::size_t>(x);
  }

  double in_range(const std::optional<double>& v, const char* param, double lo, double hi) const {
    const double x = get(v, param);
    if (!(x >= lo && x <= hi)) fail(param, "in [" + num(lo) + ", " + num(hi) + "]");
    return x;
  }

  [[noreturn]] void fail(const char* param, const std::string& domain) const {
    throw ContractError(name_ + ": parameter " + param + " must be " + domain);
  }

 private:
  static std::string num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  }

  std::string name_;
};

double online_formula(double k, double d, double alpha) {
  return (1.0 - 1.0 / k - d) / (alpha * alpha) + 1.0 / k + d;
}

double proportional_formula(double k, double l) {
  return std::pow(k - 1.0, -1.0 / l) * (k - 1.0) / k + 1.0 / k;
}

double envy_formula(double beta, std::size_t C) {
  double sum = 0.0;
  for (std::size_t t = 0; t <= C; ++t) sum += std::pow(beta, -static_cast<double>(t));
  return 1.0 / sum;
}

// Piecewise log-log interpolation of a table with positive entries.
double interpolate_loglog(const std::vector<std::pair<double, double>>& pos, double x) {
  auto hi = std::lower_bound(pos.begin(), pos.end(), x,
                             [](const auto& knot, double v) { return knot.first < v; });
  if (hi != pos.end() && hi->first == x) return hi->second;
  const auto lo = hi - 1;
  const double t = (std::log(x) - std::log(lo->first)) / (std::log(hi->first) - std::log(lo->first));
  return std::exp((1.0 - t) * std::log(lo->second) + t * std::log(hi->second));
}

std::vector<std::pair<double, double>> positive_knots(
    const std::vector<std::pair<double, double>>& g_table) {
  if (g_table.size() < 2) throw ContractError("g table needs at least two knots");
  for (std::size_t t = 0; t < g_table.size(); ++t) {
    if (!(g_table[t].first >= 0.0) || !std::isfinite(g_table[t].second)) {
      throw ContractError("g table entries must be finite with x >= 0");
    }
    if (t > 0 && !(g_table[t].first > g_table[t - 1].first &&
                   g_table[t].second > g_table[t - 1].second)) {
      throw ContractError("g table must be strictly increasing");
    }
  }
  std::vector<std::pair<double, double>> pos;
  for (const auto& knot : g_table) {
    if (knot.first > 0.0 && knot.second > 0.0) pos.push_back(knot);
  }
  if (pos.size() < 2) throw ContractError("g table needs two knots with positive x and g");
  return pos;
}

}  // namespace

std::string to_string(BoundName name) {
  for (const auto& [n, s] : name_table()) {
    if (n == name) return s;
  }
  return "unknown";
}

BoundName bound_name_from_string(const std::string& name) {
  for (const auto& [n, s] : name_table()) {
    if (s == name) return n;
  }
  throw ContractError("unknown bound '" + name + "'");
}

const std::vector<BoundName>& all_bound_names() {
  static const std::vector<BoundName> names = [] {
    std::vector<BoundName> out;
    for (const auto& entry : name_table()) out.push_back(entry.first);
    return out;
  }();
  return names;
}

double bound_value(const BoundQuery& q) {
  const Params p(q);
  switch (q.name) {
    case BoundName::kOfflineUniform: {
      const double k = static_cast<double>(p.integer(q.k, "k", 1));
      const double d = p.in_range(q.d, "d", 0.0, 1.0);
      const double alpha = p.at_least(q.alpha, "alpha", 1.0);
      return d + (1.0 - d) / k + (1.0 - d) * (k - 1.0) / (k * alpha);
    }
    case BoundName::kOnlineUniform: {
      const double k = static_cast<double>(p.integer(q.k, "k", 2));
      const double d = p.in_range(q.d, "d", 0.0, 1.0 - 1.0 / k);
      const double alpha = p.at_least(q.alpha, "alpha", 1.0);
      return online_formula(k, d, alpha);
    }
    case BoundName::kProportionalLower: {
      const double k = static_cast<double>(p.integer(q.k, "k", 2));
      const double l = p.at_least(q.l, "l", 1.0);
      return proportional_formula(k, l);
    }
    case BoundName::kEnvyTight: {
      const double beta = p.at_least(q.beta, "beta", 1.0);
      return envy_formula(beta, p.integer(q.C, "C", 1));
    }
    case BoundName::kMultitaskCrossCategory: {
      const double c = static_cast<double>(p.integer(q.c, "c", 1));
      return 2.0 / (c + 1.0);
    }
    case BoundName::kConcaveBidRatio: {
      const double k = static_cast<double>(p.integer(q.k, "k", 1));
      const double h = p.greater(q.h, "h", 1.0);
      return 1.0 / k + 2.0 / std::sqrt(h - 1.0);
    }
    case BoundName::kPositionAuction: {
      const double k = static_cast<double>(p.integer(q.k, "k", 1));
      const double d = p.in_range(q.d, "d", 0.0, 1.0);
      return 1.0 / k + 2.0 * d;
    }
    case BoundName::kComposition1:
    case BoundName::kComposition2: {
      const double kp = static_cast<double>(p.integer(q.k_prime, "k_prime", 1));
      const double l = p.at_least(q.l, "l", 1.0);
      const double inner = kp == 1.0 ? 1.0 : proportional_formula(kp, l);
      if (q.name == BoundName::kComposition1) return inner;
      const double beta = p.at_least(q.beta, "beta", 1.0);
      return inner * envy_formula(beta, p.integer(q.C, "C", 1));
    }
    case BoundName::kLpNorm: {
      const double n = static_cast<double>(p.integer(q.n, "n", 1));
      const double C = p.at_least(q.C, "C", 0.0);
      const double l = p.greater(q.l, "l", 0.0);
      return n * std::pow(C / n, (l + 1.0) / l);
    }
    case BoundName::kPropallocNecessity: {
      const double k = static_cast<double>(p.integer(q.k, "k", 2));
      const double r = p.get(q.r, "r");
      if (!(r > 0.0 && r < 1.0)) p.fail("r", "in (0, 1)");
      const double d = p.in_range(q.d, "d", 0.0, 1.0);
      const double l = std::log(k - 1.0) / (2.0 * std::log(1.0 / r)) - 0.5;
      if (!(l > 0.0)) p.fail("r", "small enough that log(k - 1) / (2 log(1/r)) - 1/2 > 0");
      return eval_f_l(l, d);
    }
  }
  throw ContractError("unknown bound");
}

namespace {

BoundQuery query(BoundName name) {
  BoundQuery q;
  q.name = name;
  return q;
}

}  // namespace

double offline_uniform_bound(std::size_t k, double d, double alpha) {
  auto q = query(BoundName::kOfflineUniform);
  q.k = static_cast<double>(k);
  q.d = d;
  q.alpha = alpha;
  return bound_value(q);
}

double online_uniform_bound(std::size_t k, double d, double alpha) {
  auto q = query(BoundName::kOnlineUniform);
  q.k = static_cast<double>(k);
  q.d = d;
  q.alpha = alpha;
  return bound_value(q);
}

double proportional_lower_bound(std::size_t k, double l) {
  auto q = query(BoundName::kProportionalLower);
  q.k = static_cast<double>(k);
  q.l = l;
  return bound_value(q);
}

double envy_tight_bound(double beta, std::size_t C) {
  auto q = query(BoundName::kEnvyTight);
  q.beta = beta;
  q.C = static_cast<double>(C);
  return bound_value(q);
}

double composition1_bound(std::size_t k_prime, double l) {
  auto q = query(BoundName::kComposition1);
  q.k_prime = static_cast<double>(k_prime);
  q.l = l;
  return bound_value(q);
}

double composition2_bound(std::size_t k_prime, double l, double beta, std::size_t C) {
  auto q = query(BoundName::kComposition2);
  q.k_prime = static_cast<double>(k_prime);
  q.l = l;
  q.beta = beta;
  q.C = static_cast<double>(C);
  return bound_value(q);
}

double propalloc_necessity_exponent(std::size_t k, double r) {
  if (k < 2) throw ContractError("propalloc necessity needs k >= 2");
  if (!(r > 0.0 && r < 1.0)) throw ContractError("propalloc necessity needs r in (0, 1)");
  return std::log(static_cast<double>(k) - 1.0) / (2.0 * std::log(1.0 / r)) - 0.5;
}

double adversary_slack(double bound, double alpha, std::size_t horizon) {
  if (horizon < 1) throw ContractError("horizon must be >= 1");
  return (1.0 - bound) / (1.0 + alpha * (static_cast<double>(horizon) - 1.0));
}

void write_bound_rows(const std::vector<BoundRow>& rows, std::ostream& out) {
  auto cell = [&](const std::optional<double>& v) {
    out << ',';
    if (v) out << format_double(*v);
  };
  out << kBoundCsvHeader << '\n';
  for (const auto& row : rows) {
    out << row.bound;
    cell(row.k);
    cell(row.d);
    cell(row.l);
    cell(row.alpha);
    cell(row.beta);
    cell(row.C);
    out << ',' << format_double(row.value) << '\n';
  }
}

BoundRow bound_row(const BoundQuery& q, double value) {
  // The CSV has no columns for c, k', h, n or r; c and k' share the k column.
  BoundRow row{to_string(q.name), q.k, q.d, q.l, q.alpha, q.beta, q.C, value};
  if (!row.k && q.c) row.k = q.c;
  if (!row.k && q.k_prime) row.k = q.k_prime;
  if (!row.k && q.n) row.k = q.n;
  return row;
}

Instance gen_perfect_matching(std::size_t k, double d, double b_high, double b_low) {
  if (k < 2) throw ContractError("perfect matching needs k >= 2");
  if (!(d > 0.0 && d <= 1.0)) throw ContractError("perfect matching needs d in (0, 1]");
  if (!(b_low >= 0.0 && b_low <= b_high) || !std::isfinite(b_high)) {
    throw ContractError("perfect matching needs 0 <= b_low <= b_high");
  }
  Matrix bids(k, k, b_low);
  for (std::size_t i = 0; i < k; ++i) bids(i, i) = b_high;
  return make_uniform_instance(bids, d);
}

Instance gen_jack_of_all_trades(std::size_t c, bool with_preferred_sets) {
  if (c < 1) throw ContractError("jack-of-all-trades needs c >= 1");
  const std::size_t n = c + 1;
  std::vector<std::string> users;
  for (std::size_t u = 0; u < n; ++u) users.push_back("u" + std::to_string(u));
  std::vector<std::vector<std::size_t>> categories;
  Matrix bids(n, c);
  std::vector<Metric> metrics;
  for (std::size_t i = 0; i < c; ++i) {
    categories.push_back({i});
    bids(i, i) = 1.0;
    bids(c, i) = 1.0;
    Matrix dist(n, n, 1.0);
    for (std::size_t u = 0; u < n; ++u) dist(u, u) = 0.0;
    dist(i, c) = 0.0;
    dist(c, i) = 0.0;
    metrics.push_back(Metric::from_matrix(std::move(dist)));
  }
  std::optional<std::vector<CategorySet>> preferred;
  if (with_preferred_sets) {
    preferred.emplace();
    for (std::size_t i = 0; i < c; ++i) preferred->push_back({i});
    CategorySet all(c);
    for (std::size_t i = 0; i < c; ++i) all[i] = i;
    preferred->push_back(all);
  }
  return Instance(std::move(users), c, std::move(categories), std::move(bids), std::move(metrics),
                  std::move(preferred));
}

std::vector<SweepCell> sweep_ratio_surface(double l, const std::vector<std::size_t>& k_grid,
                                           const std::vector<double>& d_grid) {
  if (k_grid.empty() || d_grid.empty()) throw ContractError("sweep grids must be non-empty");
  if (!(l >= 1.0)) throw ContractError("sweep needs l >= 1");
  std::vector<SweepCell> out;
  for (std::size_t k : k_grid) {
    if (k < 2) throw ContractError("sweep needs k >= 2");
    for (double d : d_grid) {
      if (!(d > 0.0 && d < 1.0)) throw ContractError("sweep distances must lie in (0, 1)");
      SweepCell cell;
      cell.k = k;
      cell.d = d;
      cell.l = l;
      cell.alpha = eval_f_l(l, d);
      cell.upper = online_formula(static_cast<double>(k), d, cell.alpha);
      cell.lower = proportional_lower_bound(k, l);
      cell.ratio = cell.upper / cell.lower;
      cell.in_domain = d <= 1.0 - 1.0 / static_cast<double>(k) + 1e-12;
      out.push_back(cell);
    }
  }
  return out;
}

std::vector<BoundRow> sweep_rows(const std::vector<SweepCell>& cells) {
  std::vector<BoundRow> rows;
  for (const auto& c : cells) {
    const auto k = static_cast<double>(c.k);
    rows.push_back({"online_uniform", k, c.d, c.l, c.alpha, std::nullopt, std::nullopt, c.upper});
    rows.push_back({"proportional_lower", k, std::nullopt, c.l, std::nullopt, std::nullopt,
                    std::nullopt, c.lower});
    rows.push_back({"ratio", k, c.d, c.l, c.alpha, std::nullopt, std::nullopt, c.ratio});
  }
  return rows;
}

double r_max(const std::vector<std::pair<double, double>>& g_table, double x) {
  if (!(x >= 1.0)) throw ContractError("R_max is evaluated at ratios >= 1");
  const auto pos = positive_knots(g_table);
  const double top = pos.back().first;
  double best = -kInf;
  for (const auto& [m, gm] : pos) {
    const double M = m * x;
    if (M > top * (1.0 + 1e-12)) break;
    best = std::max(best, interpolate_loglog(pos, std::min(M, top)) / gm);
  }
  if (best == -kInf) throw ContractError("ratio exceeds the span of the g table");
  return best;
}

TradeoffReport verify_propalloc_tradeoff(const std::vector<std::pair<double, double>>& g_table,
                                         double r, std::size_t k,
                                         const std::optional<BidRatioConstraint>& claimed,
                                         double d_step, std::size_t max_m) {
  const auto pos = positive_knots(g_table);
  if (!(d_step > 0.0 && d_step < 1.0)) throw ContractError("d_step must lie in (0, 1)");
  TradeoffReport out;
  out.l_star = propalloc_necessity_exponent(k, r);
  const double span = pos.back().first / pos.front().first;
  const double base = 1.0 / (r * r);

  std::vector<double> exponents;
  for (std::size_t m = 1; m <= max_m; ++m) exponents.push_back(static_cast<double>(m));
  for (std::size_t m = 2; m <= max_m; ++m) exponents.push_back(1.0 / static_cast<double>(m));
  for (double m : exponents) {
    const double f = std::pow(base, m);
    if (f > span * (1.0 + 1e-12)) {
      ++out.necessity_skipped;
      continue;
    }
    NecessityPoint pt;
    pt.exponent_m = m;
    pt.f = f;
    const double R = r_max(g_table, std::min(f, span));
    pt.d = (R - 1.0) / (R + 1.0);
    if (out.l_star > 0.0) {
      pt.f_l_star = std::pow(R, 1.0 / out.l_star);
      pt.holds = std::log(f) * out.l_star <= std::log(R) + 1e-9;
    } else {
      // f_l blows up as l -> 0+, so the statement is vacuous.
      pt.f_l_star = kInf;
      pt.holds = true;
    }
    out.necessity_holds = out.necessity_holds && pt.holds;
    out.necessity.push_back(pt);
  }

  if (claimed) {
    const auto steps = static_cast<std::size_t>(std::floor(1.0 / d_step - 1e-9));
    bool prefix = true;
    for (std::size_t t = 1; t <= steps; ++t) {
      const double d = static_cast<double>(t) * d_step;
      if (d >= 1.0) break;
      const double f = (*claimed)(d);
      if (f > span * (1.0 + 1e-12)) break;
      ++out.grid_points;
      const double limit = std::log1p(d) - std::log1p(-d);
      const bool ok = std::log(r_max(g_table, f)) <= limit + 1e-9;
      if (ok && prefix) out.max_passing_d = d;
      if (!ok) {
        ++out.grid_failures;
        prefix = false;
        if (!out.first_failing_d) out.first_failing_d = d;
      }
    }
    out.sufficiency_holds = out.grid_failures == 0;
  }
  return out;
}

}  // namespace adfair
