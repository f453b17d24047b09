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

#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adfair/core.hpp"
#include "json.hpp"

namespace adfair {

// Bid ratio constraint f: [0, 1] -> [1, inf], weakly increasing, f(0) = 1.
//
// Either the power family f_l(d) = ((1 + d) / (1 - d))^(1/l), or a table of
// (d, f(d)) knots interpolated linearly in (d, log f). A knot may hold +inf
// (typically at d = 1); infinity is then taken only at that exact distance and
// the last finite segment is extended up to it.
class BidRatioConstraint {
 public:
  static BidRatioConstraint family(double l);
  static BidRatioConstraint tabulated(std::vector<std::pair<double, double>> knots);

  double operator()(double d) const;
  double log_value(double d) const;

  bool is_family() const { return knots_.empty(); }
  double family_parameter() const { return l_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  std::string describe() const;

 private:
  BidRatioConstraint() = default;
  double l_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
};

// ((1 + d) / (1 - d))^(1/l); +inf at d = 1.
double eval_f_l(double l, double d);

struct Witness {
  std::optional<std::size_t> user_u;
  std::optional<std::size_t> user_v;
  std::optional<std::size_t> advertiser;
  std::optional<std::size_t> category;
  std::vector<std::size_t> subset;
  std::string part;  // compositional only: "envy" or "intra_category"
};

struct FairnessReport {
  std::string definition;
  double beta = 1.0;
  bool pass = true;
  // Largest (lhs - rhs) over all checked constraints; <= 1e-9 iff pass. For
  // bid ratios this is measured in log space.
  double worst_margin = -std::numeric_limits<double>::infinity();
  Witness witness;
  std::size_t violations = 0;
  // Total variation: largest ||p_u - p_v||_1 - beta * d(u, v), reported for
  // comparison with the subset form. Bid ratio: exp(worst_margin), the factor
  // by which the worst ratio exceeds f(d).
  std::optional<double> diagnostic;
};

nlohmann::json to_json(const FairnessReport& report);

// max over subsets S of |sum_{i in S} (a_i - b_i)|, in closed form.
double maxdev(std::span<const double> a, std::span<const double> b);
// Same quantity by enumerating all 2^k subsets; k <= 20.
double maxdev_subset_oracle(std::span<const double> a, std::span<const double> b);

FairnessReport check_multiple_task(const Instance& instance, const Allocation& allocation,
                                   double beta = 1.0);
FairnessReport check_total_variation(const Instance& instance, const Allocation& allocation,
                                     double beta = 1.0);
FairnessReport check_envy_freeness(const Instance& instance, const Allocation& allocation,
                                   double beta = 1.0);
FairnessReport check_compositional(const Instance& instance, const Allocation& allocation,
                                   double beta = 1.0);
// The constraint is applied to every advertiser under its category's metric.
FairnessReport check_bid_ratio(const Instance& instance, const BidRatioConstraint& constraint);

enum class Multiplicativity { kSuper, kSub, kMixed };

std::string to_string(Multiplicativity m);

struct MultiplicativityPoint {
  double d1 = 0.0;
  double d2 = 0.0;
  // log f(d1 + d2) - log f(d1) - log f(d2); positive means super-multiplicative.
  double log_gap = 0.0;
};

struct MultiplicativityResult {
  Multiplicativity kind = Multiplicativity::kSub;
  std::size_t points = 0;
  std::size_t super_points = 0;
  MultiplicativityPoint most_super;
  MultiplicativityPoint most_sub;
};

// Compares f(d1 + d2) with f(d1) f(d2) on {d1, d2 >= step, d1 + d2 <= 1 - step}.
MultiplicativityResult classify_multiplicativity(const BidRatioConstraint& constraint,
                                                 double grid_step);

}  // namespace adfair
