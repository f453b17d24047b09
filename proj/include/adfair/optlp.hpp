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
#include <vector>

#include "adfair/core.hpp"
#include "adfair/simplex.hpp"
#include "json.hpp"

namespace adfair {

inline constexpr std::size_t kMaxLpVariables = 4000;

// Optimal offline multiple-task fair allocation:
//
//   max  sum b_u^i p_u^i
//   s.t. sum_i p_u^i <= 1                      for every user u
//        p_u^i - p_v^i <= d^{cat(i)}(u, v)     for every ordered pair u != v and i
//        p >= 0
//
// Variable (u, i) is column u * k + i. Rows 0..n-1 are the user rows; the pair
// rows follow in (u, v, i) order with v running over users other than u.
struct FairLP {
  std::size_t n = 0;
  std::size_t k = 0;
  Matrix A;
  std::vector<double> b;
  std::vector<double> c;

  std::size_t num_rows() const { return n + n * (n - 1) * k; }
  std::size_t pair_row(std::size_t u, std::size_t v, std::size_t i) const;
};

// Throws CapacityError when n * k > 4000 or the tableau would not fit.
FairLP build_fair_lp(const Instance& instance, const SimplexOptions& options = {});
// Plain text: `max c...`, then one `a... <= b` line per row.
void dump_lp(const FairLP& lp, std::ostream& out);

struct DualCertificate {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<double> z;  // per user
  std::vector<double> w;  // n * n * k, entry ((u * n) + v) * k + i; zero when u == v

  double& w_at(std::size_t u, std::size_t v, std::size_t i) { return w[(u * n + v) * k + i]; }
  double w_at(std::size_t u, std::size_t v, std::size_t i) const { return w[(u * n + v) * k + i]; }
};

// ||z||_1 + sum d^{cat(i)}(u, v) w^i_{u,v}.
double dual_objective(const Instance& instance, const DualCertificate& certificate);

struct FairOptimum {
  Allocation allocation;
  DualCertificate certificate;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;  // |primal - dual| / (1 + |primal|)
  std::size_t pivots = 0;
};

// Throws NumericalError if the solve fails or the duality gap exceeds 1e-6.
FairOptimum solve_fair_lp(const Instance& instance, const SimplexOptions& options = {});

struct UniformClosedForm {
  std::vector<double> bid_sums;   // sum_u b_u^i
  std::vector<double> ith_price;  // entry i - 1: sum_u of the i-th highest bid on u
  std::size_t x = 0;              // advertiser with the largest bid sum (lowest index on ties)
  std::size_t m = 0;
  double revenue = 0.0;
};

// Optimum of the LP above for a single uniform metric at distance d.
UniformClosedForm uniform_closed_form(const Matrix& bids, double d);

struct BruteForceOptimum {
  Allocation allocation;
  double objective = 0.0;
};

// Grid search for n <= 3, k <= 3: every user but the last ranges over the grid
// {0, 1/res, ..., 1}; the last user is solved exactly given the others.
BruteForceOptimum brute_force_fair_opt(const Instance& instance, std::size_t grid_resolution);

struct LpStructureReport {
  double primal_violation = 0.0;
  double dual_violation = 0.0;
  double complementary_slackness = 0.0;  // largest |slack * multiplier|
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  bool primal_feasible = false;
  bool dual_feasible = false;
  bool slackness_holds = false;
  bool strong_duality = false;
  // Advertisers whose bid sum is below the maximum but that get more than
  // 1e-6 on every user.
  std::vector<std::size_t> property_failures;
  bool property_holds = false;

  bool pass() const {
    return primal_feasible && dual_feasible && slackness_holds && strong_duality && property_holds;
  }
};

// Every quantity is recomputed from the instance, not taken from the solver.
LpStructureReport verify_lp_structure(const Instance& instance, const Allocation& allocation,
                                      const DualCertificate& certificate);

nlohmann::json to_json(const LpStructureReport& report);
nlohmann::json to_json(const UniformClosedForm& form);

}  // namespace adfair
