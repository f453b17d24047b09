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

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adfair/core.hpp"
#include "adfair/fairness.hpp"

namespace adfair {

enum class BoundName {
  kOfflineUniform,          // k, d, alpha
  kOnlineUniform,           // k, d, alpha; d <= 1 - 1/k
  kProportionalLower,       // k, l
  kEnvyTight,               // beta, C
  kMultitaskCrossCategory,  // c
  kConcaveBidRatio,         // k, h
  kPositionAuction,         // k, d
  kComposition1,            // k_prime, l
  kComposition2,            // k_prime, l, beta, C
  kLpNorm,                  // n, C, l
  kPropallocNecessity,      // k, r, d
};

std::string to_string(BoundName name);
// Throws ContractError for unknown names.
BoundName bound_name_from_string(const std::string& name);
const std::vector<BoundName>& all_bound_names();

struct BoundQuery {
  BoundName name = BoundName::kOfflineUniform;
  std::optional<double> k;
  std::optional<double> d;
  std::optional<double> alpha;
  std::optional<double> l;
  std::optional<double> beta;
  std::optional<double> C;
  std::optional<double> c;
  std::optional<double> k_prime;
  std::optional<double> h;
  std::optional<double> n;
  std::optional<double> r;
};

// The bound's formula. Missing or out-of-domain parameters raise a
// ContractError naming the parameter and its domain.
double bound_value(const BoundQuery& query);

// Shorthands used by the mechanisms' property tests and the harnesses.
double offline_uniform_bound(std::size_t k, double d, double alpha);
double online_uniform_bound(std::size_t k, double d, double alpha);
double proportional_lower_bound(std::size_t k, double l);
double envy_tight_bound(double beta, std::size_t C);
double composition1_bound(std::size_t k_prime, double l);
double composition2_bound(std::size_t k_prime, double l, double beta, std::size_t C);
// Exponent from the necessity lemma: log(k - 1) / (2 log(1 / r)) - 1/2.
double propalloc_necessity_exponent(std::size_t k, double r);

// (1 - bound) / (1 + alpha (T - 1)).
double adversary_slack(double bound, double alpha, std::size_t horizon);

// One CSV line under the header `bound,k,d,l,alpha,beta,C,value`.
struct BoundRow {
  std::string bound;
  std::optional<double> k, d, l, alpha, beta, C;
  double value = 0.0;
};
inline constexpr const char* kBoundCsvHeader = "bound,k,d,l,alpha,beta,C,value";
void write_bound_rows(const std::vector<BoundRow>& rows, std::ostream& out);
BoundRow bound_row(const BoundQuery& query, double value);

// k users and advertisers at uniform distance d; advertiser i bids b_high on
// user i and b_low elsewhere.
Instance gen_perfect_matching(std::size_t k, double d, double b_high, double b_low);

// c + 1 users, c single-advertiser categories. Advertiser i bids 1 on users i
// and c; category i's metric puts user c at distance 0 from user i and every
// other distinct pair at distance 1. With preferred sets, user i prefers {i}
// and user c prefers every category.
Instance gen_jack_of_all_trades(std::size_t c, bool with_preferred_sets = false);

struct SweepCell {
  std::size_t k = 0;
  double d = 0.0;
  double l = 0.0;
  double alpha = 0.0;
  double upper = 0.0;  // online_uniform formula at alpha = f_l(d)
  double lower = 0.0;  // proportional_lower(k, l)
  double ratio = 0.0;
  // False when d > 1 - 1/k, outside the online bound's stated domain; the
  // formula is still evaluated there.
  bool in_domain = true;
};

// Cells in (k, d) order.
std::vector<SweepCell> sweep_ratio_surface(double l, const std::vector<std::size_t>& k_grid,
                                           const std::vector<double>& d_grid);
// Three rows per cell: online_uniform, proportional_lower, ratio.
std::vector<BoundRow> sweep_rows(const std::vector<SweepCell>& cells);

struct NecessityPoint {
  double exponent_m = 0.0;  // f(d) = (1 / r^2)^m
  double f = 0.0;
  double d = 0.0;  // solves R_max(f) = (1 + d) / (1 - d)
  double f_l_star = 0.0;
  bool holds = false;  // f <= f_{l*}(d)
};

struct TradeoffReport {
  double l_star = 0.0;
  std::vector<NecessityPoint> necessity;
  std::size_t necessity_skipped = 0;  // points whose ratio exceeds the table's span
  bool necessity_holds = true;
  // Sufficiency of the claimed constraint on the d grid.
  std::size_t grid_points = 0;
  std::size_t grid_failures = 0;
  std::optional<double> max_passing_d;  // all grid points up to here pass
  std::optional<double> first_failing_d;
  bool sufficiency_holds = true;
};

// R_max over a sampled increasing map: the largest g(x m) / g(m) over sampled
// m > 0 with x m inside the table, interpolating log g linearly in log x.
double r_max(const std::vector<std::pair<double, double>>& g_table, double x);

// g_table must be strictly increasing (ContractError otherwise); r in (0, 1).
TradeoffReport verify_propalloc_tradeoff(const std::vector<std::pair<double, double>>& g_table,
                                         double r, std::size_t k,
                                         const std::optional<BidRatioConstraint>& claimed,
                                         double d_step = 0.01, std::size_t max_m = 4);

}  // namespace adfair
