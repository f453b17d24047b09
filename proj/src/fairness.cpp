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

#include "adfair/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace adfair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Conditionals are only compared where the category mass is clearly
// non-zero; below this p / q is dominated by rounding noise.
constexpr double kMassFloor = 1e-12;

void require_beta(double beta) {
  if (!(beta >= 1.0) || !std::isfinite(beta)) {
    throw ContractError("beta must be a finite real >= 1");
  }
}

// Folds one constraint's margin into the report, replacing the witness when
// it is the new worst.
class MarginTracker {
 public:
  explicit MarginTracker(FairnessReport& report) : report_(report) {}

  bool observe(double margin) {
    if (margin > kTolerance) ++report_.violations;
    if (margin > report_.worst_margin) {
      report_.worst_margin = margin;
      return true;
    }
    return false;
  }

 private:
  FairnessReport& report_;
};

void finish(FairnessReport& report) { report.pass = !(report.worst_margin > kTolerance); }

// Positive and negative part sums of a - b over the given positions.
std::pair<double, double> part_sums(std::span<const double> a, std::span<const double> b) {
  double pos = 0.0;
  double neg = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    if (diff > 0.0) {
      pos += diff;
    } else {
      neg -= diff;
    }
  }
  return {pos, neg};
}

std::vector<std::size_t> maxdev_subset(std::span<const double> a, std::span<const double> b,
                                       std::span<const std::size_t> labels) {
  const auto [pos, neg] = part_sums(a, b);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    if (pos >= neg ? diff > 0.0 : diff < 0.0) out.push_back(labels[i]);
  }
  return out;
}

// Total-variation constraints for one category between users' rows restricted
// to that category. `rows` holds one vector per user (empty = skip the user).
void total_variation_pass(const std::vector<std::vector<double>>& rows, const Metric& metric,
                          double beta, std::span<const std::size_t> labels, std::size_t category,
                          FairnessReport& report, double& worst_l1, Witness* witness_out) {
  MarginTracker tracker(report);
  for (std::size_t u = 0; u < rows.size(); ++u) {
    if (rows[u].empty()) continue;
    for (std::size_t v = u + 1; v < rows.size(); ++v) {
      if (rows[v].empty()) continue;
      const auto [pos, neg] = part_sums(rows[u], rows[v]);
      const double bound = beta * metric(u, v);
      worst_l1 = std::max(worst_l1, pos + neg - bound);
      if (tracker.observe(std::max(pos, neg) - bound)) {
        Witness w;
        w.user_u = u;
        w.user_v = v;
        w.category = category;
        w.subset = maxdev_subset(rows[u], rows[v], labels);
        *witness_out = std::move(w);
      }
    }
  }
}

// Envy constraints over category masses: sum_{S_u} q_v <= beta sum_{S_u} q_u.
void envy_pass(const Instance& instance, const Matrix& mass, double beta, FairnessReport& report,
               Witness* witness_out) {
  MarginTracker tracker(report);
  const std::size_t n = instance.num_users();
  for (std::size_t u = 0; u < n; ++u) {
    const auto& s = instance.preferred_set(u);
    double own = 0.0;
    for (std::size_t j : s) own += mass(u, j);
    const double rhs = beta * own;
    for (std::size_t v = 0; v < n; ++v) {
      if (v == u) continue;
      double other = 0.0;
      for (std::size_t j : s) other += mass(v, j);
      if (tracker.observe(other - rhs)) {
        Witness w;
        w.user_u = u;
        w.user_v = v;
        w.subset = s;
        *witness_out = std::move(w);
      }
    }
  }
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

double eval_f_l(double l, double d) {
  if (!(l > 0.0)) throw ContractError("f_l needs l > 0");
  if (!(d >= 0.0 && d <= 1.0)) throw ContractError("distance must lie in [0, 1]");
  if (d == 1.0) return kInf;
  return std::exp((std::log1p(d) - std::log1p(-d)) / l);
}

BidRatioConstraint BidRatioConstraint::family(double l) {
  if (!(l >= 1.0) || !std::isfinite(l)) throw ContractError("family parameter l must be >= 1");
  BidRatioConstraint c;
  c.l_ = l;
  return c;
}

BidRatioConstraint BidRatioConstraint::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw ContractError("tabulated constraint needs at least two knots");
  if (knots.front().first != 0.0 || knots.front().second != 1.0) {
    throw ContractError("tabulated constraint must start at (0, 1)");
  }
  if (knots.back().first != 1.0) throw ContractError("tabulated constraint must end at d = 1");
  for (std::size_t t = 1; t < knots.size(); ++t) {
    if (!(knots[t].first > knots[t - 1].first)) {
      throw ContractError("tabulated distances must be strictly increasing");
    }
    if (!(knots[t].second >= knots[t - 1].second)) {
      throw ContractError("tabulated constraint must be weakly increasing");
    }
    if (std::isinf(knots[t].second) && t + 1 != knots.size()) {
      throw ContractError("only the last knot may be infinite");
    }
  }
  BidRatioConstraint c;
  c.knots_ = std::move(knots);
  return c;
}

double BidRatioConstraint::log_value(double d) const {
  if (!(d >= 0.0 && d <= 1.0)) throw ContractError("distance must lie in [0, 1]");
  if (is_family()) {
    if (d == 1.0) return kInf;
    return (std::log1p(d) - std::log1p(-d)) / l_;
  }
  auto hi = std::lower_bound(knots_.begin(), knots_.end(), d,
                             [](const auto& knot, double x) { return knot.first < x; });
  if (hi->first == d) return std::log(hi->second);
  auto lo = hi - 1;
  if (std::isinf(hi->second)) {
    // Extend the last finite segment; flat when there is none.
    if (lo == knots_.begin()) return 0.0;
    auto prev = lo - 1;
    const double slope =
        (std::log(lo->second) - std::log(prev->second)) / (lo->first - prev->first);
    return std::log(lo->second) + slope * (d - lo->first);
  }
  const double t = (d - lo->first) / (hi->first - lo->first);
  return (1.0 - t) * std::log(lo->second) + t * std::log(hi->second);
}

double BidRatioConstraint::operator()(double d) const { return std::exp(log_value(d)); }

std::string BidRatioConstraint::describe() const {
  if (is_family()) return "f_l(l=" + format_number(l_) + ")";
  return "tabulated(" + std::to_string(knots_.size()) + " knots)";
}

nlohmann::json to_json(const FairnessReport& report) {
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : "-inf";
  };
  nlohmann::json w = nlohmann::json::object();
  if (report.witness.user_u) w["user_u"] = *report.witness.user_u;
  if (report.witness.user_v) w["user_v"] = *report.witness.user_v;
  if (report.witness.advertiser) w["advertiser"] = *report.witness.advertiser;
  if (report.witness.category) w["category"] = *report.witness.category;
  if (!report.witness.subset.empty()) w["subset"] = report.witness.subset;
  if (!report.witness.part.empty()) w["part"] = report.witness.part;
  nlohmann::json doc{{"definition", report.definition},
                     {"beta", report.beta},
                     {"pass", report.pass},
                     {"worst_margin", num(report.worst_margin)},
                     {"witness", w},
                     {"violations", report.violations}};
  if (report.diagnostic) doc["diagnostic"] = num(*report.diagnostic);
  return doc;
}

double maxdev(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("maxdev needs rows of equal length");
  const auto [pos, neg] = part_sums(a, b);
  return std::max(pos, neg);
}

double maxdev_subset_oracle(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("maxdev needs rows of equal length");
  const std::size_t k = a.size();
  if (k > 20) throw ContractError("subset enumeration is limited to k <= 20");
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << k); ++mask) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::uint32_t{1} << i)) sum += a[i] - b[i];
    }
    best = std::max(best, std::abs(sum));
  }
  return best;
}

FairnessReport check_multiple_task(const Instance& instance, const Allocation& allocation,
                                   double beta) {
  require_same_shape(instance, allocation);
  require_beta(beta);
  FairnessReport report;
  report.definition = "multiple_task";
  report.beta = beta;
  MarginTracker tracker(report);
  const std::size_t n = instance.num_users();

  for (std::size_t j = 0; j < instance.num_categories(); ++j) {
    const Metric& metric = instance.metric(j);
    for (std::size_t i : instance.category(j)) {
      if (metric.is_uniform()) {
        // Only the spread of the column matters; count violating pairs on the
        // sorted column with two pointers.
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return allocation(x, i) < allocation(y, i); });
        const double bound = beta * metric.uniform_distance();
        if (n >= 2) {
          const double spread = allocation(order.back(), i) - allocation(order.front(), i);
          const double margin = spread - bound;
          if (margin > report.worst_margin) {
            report.worst_margin = margin;
            report.witness = Witness{order.back(), order.front(), i, j, {}, {}};
          }
          std::size_t lo = 0;
          for (std::size_t hi = 0; hi < n; ++hi) {
            while (allocation(order[hi], i) - allocation(order[lo], i) - bound > kTolerance) ++lo;
            report.violations += lo;
          }
        }
        continue;
      }
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
          const double margin = std::abs(allocation(u, i) - allocation(v, i)) - beta * metric(u, v);
          if (tracker.observe(margin)) report.witness = Witness{u, v, i, j, {}, {}};
        }
      }
    }
  }
  finish(report);
  return report;
}

FairnessReport check_total_variation(const Instance& instance, const Allocation& allocation,
                                     double beta) {
  require_same_shape(instance, allocation);
  require_beta(beta);
  FairnessReport report;
  report.definition = "total_variation";
  report.beta = beta;
  double worst_l1 = -kInf;
  const std::size_t n = instance.num_users();
  for (std::size_t j = 0; j < instance.num_categories(); ++j) {
    const auto& members = instance.category(j);
    std::vector<std::vector<double>> rows(n);
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t i : members) rows[u].push_back(allocation(u, i));
    }
    total_variation_pass(rows, instance.metric(j), beta, members, j, report, worst_l1,
                         &report.witness);
  }
  if (n >= 2) report.diagnostic = worst_l1;
  finish(report);
  return report;
}

FairnessReport check_envy_freeness(const Instance& instance, const Allocation& allocation,
                                   double beta) {
  require_same_shape(instance, allocation);
  require_beta(beta);
  if (!instance.has_preferred_sets()) {
    throw ContractError("envy-freeness needs preferred sets");
  }
  FairnessReport report;
  report.definition = "envy_freeness";
  report.beta = beta;
  const auto marginals = category_marginals(instance, allocation);
  envy_pass(instance, marginals.mass, beta, report, &report.witness);
  finish(report);
  return report;
}

FairnessReport check_compositional(const Instance& instance, const Allocation& allocation,
                                   double beta) {
  require_same_shape(instance, allocation);
  require_beta(beta);
  if (!instance.has_preferred_sets()) {
    throw ContractError("compositional fairness needs preferred sets");
  }
  FairnessReport report;
  report.definition = "compositional";
  report.beta = beta;
  const auto marginals = category_marginals(instance, allocation);

  Witness witness;
  envy_pass(instance, marginals.mass, beta, report, &witness);
  if (report.worst_margin > -kInf) {
    witness.part = "envy";
    report.witness = witness;
  }

  const std::size_t n = instance.num_users();
  double worst_l1 = -kInf;
  for (std::size_t j = 0; j < instance.num_categories(); ++j) {
    std::vector<std::vector<double>> rows(n);
    for (std::size_t u = 0; u < n; ++u) {
      if (marginals.mass(u, j) > kMassFloor) rows[u] = marginals.conditional_in_category(instance, u, j);
    }
    const double before = report.worst_margin;
    Witness intra;
    total_variation_pass(rows, instance.metric(j), beta, instance.category(j), j, report,
                         worst_l1, &intra);
    if (report.worst_margin > before) {
      intra.part = "intra_category";
      report.witness = intra;
    }
  }
  finish(report);
  return report;
}

FairnessReport check_bid_ratio(const Instance& instance, const BidRatioConstraint& constraint) {
  FairnessReport report;
  report.definition = "bid_ratio";
  report.beta = 1.0;
  MarginTracker tracker(report);
  const std::size_t n = instance.num_users();
  for (std::size_t j = 0; j < instance.num_categories(); ++j) {
    const Metric& metric = instance.metric(j);
    for (std::size_t i : instance.category(j)) {
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
          const double bu = instance.bid(u, i);
          const double bv = instance.bid(v, i);
          const double log_f = constraint.log_value(metric(u, v));
          double margin;
          if (bu == 0.0 && bv == 0.0) {
            margin = -log_f;
          } else if (bu == 0.0 || bv == 0.0) {
            margin = std::isinf(log_f) ? -kInf : kInf;
          } else if (std::isinf(log_f)) {
            margin = -kInf;
          } else {
            margin = std::abs(std::log(bu) - std::log(bv)) - log_f;
          }
          if (tracker.observe(margin)) report.witness = Witness{u, v, i, j, {}, {}};
        }
      }
    }
  }
  if (report.worst_margin > -kInf) report.diagnostic = std::exp(report.worst_margin);
  finish(report);
  return report;
}

std::string to_string(Multiplicativity m) {
  switch (m) {
    case Multiplicativity::kSuper:
      return "super";
    case Multiplicativity::kSub:
      return "sub";
    case Multiplicativity::kMixed:
      return "mixed";
  }
  return "unknown";
}

MultiplicativityResult classify_multiplicativity(const BidRatioConstraint& constraint,
                                                 double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.5)) {
    throw ContractError("grid_step must lie in (0, 0.5]");
  }
  // Work in integer grid indices so d1 + d2 lands exactly on grid points.
  const auto steps = static_cast<std::size_t>(std::floor(1.0 / grid_step + 1e-9));
  MultiplicativityResult out;
  out.most_super.log_gap = -kInf;
  out.most_sub.log_gap = kInf;
  for (std::size_t a = 1; a < steps; ++a) {
    for (std::size_t b = 1; a + b + 1 <= steps; ++b) {
      const double d1 = a * grid_step;
      const double d2 = b * grid_step;
      const double gap = constraint.log_value((a + b) * grid_step) - constraint.log_value(d1) -
                         constraint.log_value(d2);
      ++out.points;
      if (gap > 1e-12) ++out.super_points;
      if (gap > out.most_super.log_gap) out.most_super = {d1, d2, gap};
      if (gap < out.most_sub.log_gap) out.most_sub = {d1, d2, gap};
    }
  }
  if (out.points > 0 && out.super_points == out.points) {
    out.kind = Multiplicativity::kSuper;
  } else if (out.super_points == 0) {
    out.kind = Multiplicativity::kSub;
  } else {
    out.kind = Multiplicativity::kMixed;
  }
  return out;
}

}  // namespace adfair
