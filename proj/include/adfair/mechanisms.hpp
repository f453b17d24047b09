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

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "adfair/core.hpp"
#include "json.hpp"

namespace adfair {

// Increasing, superadditive map g with g(0) = 0, used to weight bids.
class GMap {
 public:
  static GMap power(double l);  // x^l, l >= 1
  static GMap linear();         // x
  // Piecewise linear through (x, g) knots starting at (0, 0), strictly
  // increasing in both coordinates, superadditive on the knot grid. Past the
  // last knot the final segment is extended.
  static GMap table(std::vector<std::pair<double, double>> knots);

  double operator()(double x) const;

  bool is_power() const { return knots_.empty(); }
  double exponent() const { return l_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  std::string describe() const;

 private:
  GMap() = default;
  double l_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
};

struct Proportional {
  double l = 1.0;
};
struct ProportionalG {
  GMap g = GMap::linear();
};
struct EqualSpread {
  double beta = 1.0;
  std::size_t C = 1;
};
struct HighestBidderWins {};
struct Composed1 {
  double l = 1.0;
};
struct Composed2 {
  double beta = 1.0;
  std::size_t C = 1;
  double l = 1.0;
};
struct UnfairFirstPrice {};

using MechanismConfig = std::variant<Proportional, ProportionalG, EqualSpread, HighestBidderWins,
                                     Composed1, Composed2, UnfairFirstPrice>;

// {"mechanism": "proportional", "l": 2}, {"mechanism": "equal_spread", "beta": 1, "C": 2},
// {"mechanism": "highest_bidder"}, {"mechanism": "composed1", "l": 2},
// {"mechanism": "composed2", "beta": 1, "C": 2, "l": 2}, {"mechanism": "first_price"},
// {"mechanism": "proportional_g", "g": "linear" | {"power": l} | {"table": [[x, g], ...]}}.
MechanismConfig mechanism_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const MechanismConfig& config);
std::string mechanism_name(const MechanismConfig& config);
// Throws ContractError when parameters are out of domain.
void validate(const MechanismConfig& config);
// Mechanisms 2 to 5 read S_u.
bool needs_preferred_sets(const MechanismConfig& config);

// p_i = g(b_i) / sum_j g(b_j); uniform when every g(b_j) is zero.
std::vector<double> proportional_allocate(std::span<const double> bids, const GMap& g);
// Row over categories. The argmax category (lowest index on ties) gets
// p_high, the other preferred categories p_fair each; the rest stays
// unallocated.
std::vector<double> equal_spread_allocate(std::span<const double> category_bids,
                                          const CategorySet& preferred, double beta,
                                          std::size_t C);
double equal_spread_p_high(double beta, std::size_t C);
double equal_spread_p_fair(double beta, std::size_t C, std::size_t preferred_size);
// Mass 1 split equally over the highest bidding categories inside S_u.
std::vector<double> highest_bidder_wins(std::span<const double> category_bids,
                                        const CategorySet& preferred);
// Mechanisms 4 and 5: category mass from highest-bidder-wins or equal-spread
// over per-category maximum bids, then x^l proportional allocation inside.
std::vector<double> composed_allocate(std::span<const double> bids,
                                      const std::vector<std::vector<std::size_t>>& categories,
                                      const CategorySet& preferred,
                                      const MechanismConfig& config);
// Mass 1 split equally among the highest bids.
std::vector<double> unfair_first_price(std::span<const double> bids);

// Per-user online interface. Implementations may keep history.
class OnlineMechanism {
 public:
  virtual ~OnlineMechanism() = default;
  // `preferred` is null when the instance has no preferred sets.
  virtual std::vector<double> allocate_user(std::span<const double> bids,
                                            const CategorySet* preferred) = 0;
  virtual std::unique_ptr<OnlineMechanism> clone() const = 0;
  virtual std::string name() const = 0;
};

// Binds a config to a category partition. Equal-spread and highest-bidder
// need one advertiser per category.
std::unique_ptr<OnlineMechanism> make_mechanism(
    const MechanismConfig& config, std::vector<std::vector<std::size_t>> categories);

Allocation run_stream(const Instance& instance, const MechanismConfig& config);
Allocation run_stream(const Instance& instance, OnlineMechanism& mechanism);

}  // namespace adfair
