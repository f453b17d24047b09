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

#include <cmath>
#include <limits>
#include <random>

#include "adfair/fairness.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adfair;
using adfair::testing::random_allocation;
using adfair::testing::random_bids;
using adfair::testing::random_line_metric;
using adfair::testing::singleton_categories;
using adfair::testing::user_names;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Allocation alloc(const std::vector<std::vector<double>>& rows) {
  return Allocation(Matrix::from_rows(rows));
}

// Two users, two single-advertiser categories at distance d, with preferred sets.
Instance two_categories(std::vector<CategorySet> preferred, double d = 0.0) {
  return Instance({"u", "v"}, 2, singleton_categories(2), Matrix(2, 2, 1.0),
                  {Metric::uniform(2, d), Metric::uniform(2, d)}, std::move(preferred));
}

}  // namespace

TEST_CASE("multiple-task fairness") {
  Instance inst = make_uniform_instance(Matrix(2, 2, 1.0), 0.2);
  FairnessReport ok = check_multiple_task(inst, alloc({{0.6, 0.4}, {0.4, 0.6}}));
  CHECK(ok.pass);
  CHECK(ok.worst_margin == doctest::Approx(0.0).epsilon(1e-12));

  FairnessReport bad = check_multiple_task(inst, alloc({{1, 0}, {0, 1}}));
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_margin == doctest::Approx(0.8));
  REQUIRE(bad.witness.advertiser.has_value());
  CHECK(bad.violations > 0);

  CHECK(check_multiple_task(inst, alloc({{1, 0}, {0, 1}}), 5.0).pass);
  CHECK_THROWS_AS(check_multiple_task(inst, alloc({{1, 0}, {0, 1}}), 0.5), ContractError);
}

TEST_CASE("total variation fairness") {
  Matrix dist = Matrix::from_rows({{0, 0.2}, {0.2, 0}});
  Instance inst({"u", "v"}, 3, {{0, 1, 2}}, Matrix(2, 3, 1.0), {Metric::from_matrix(dist)});
  FairnessReport r = check_total_variation(inst, alloc({{0.7, 0.3, 0}, {0.5, 0.3, 0.2}}));
  CHECK(r.pass);
  CHECK(r.worst_margin == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(r.diagnostic.has_value());
  CHECK(*r.diagnostic == doctest::Approx(0.2));  // l1 distance 0.4 minus d

  CHECK(check_total_variation(inst, alloc({{0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}})).worst_margin <=
        -0.2 + 1e-12);

  Instance half = make_uniform_instance(Matrix(2, 2, 1.0), 0.5);
  FairnessReport bad = check_total_variation(half, alloc({{1, 0}, {0, 1}}));
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_margin == doctest::Approx(0.5));
}

TEST_CASE("maxdev closed form and oracle") {
  std::vector<double> a{0.7, 0.3, 0}, b{0.5, 0.3, 0.2};
  CHECK(maxdev(a, b) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(maxdev_subset_oracle(a, b) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(maxdev(a, a) == 0.0);
  CHECK(maxdev_subset_oracle(a, a) == 0.0);
  std::vector<double> e0{1, 0}, e1{0, 1};
  CHECK(maxdev(e0, e1) == 1.0);
  CHECK(maxdev_subset_oracle(e0, e1) == 1.0);
  std::vector<double> big(21, 0.0);
  CHECK_THROWS_AS(maxdev_subset_oracle(big, big), ContractError);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t k = 1 + rng() % 12;
    std::vector<double> x(k), y(k);
    for (std::size_t i = 0; i < k; ++i) x[i] = unit(rng), y[i] = unit(rng);
    CHECK(std::abs(maxdev(x, y) - maxdev_subset_oracle(x, y)) <= 1e-12);
  }
}

TEST_CASE("envy-freeness") {
  Instance inst = two_categories({{0}, {1}});
  CHECK(check_envy_freeness(inst, alloc({{0.5, 0.5}, {0.4, 0.6}})).pass);

  Instance u_only = two_categories({{0}, {0, 1}});
  FairnessReport bad = check_envy_freeness(u_only, alloc({{0.5, 0.5}, {0.6, 0.4}}));
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_margin == doctest::Approx(0.1));
  CHECK(*bad.witness.user_u == 0);
  CHECK(*bad.witness.user_v == 1);
  CHECK(check_envy_freeness(u_only, alloc({{0.5, 0.5}, {0.6, 0.4}}), 1.2).pass);

  Instance none = make_uniform_instance(Matrix(2, 2, 1.0), 0.1);
  CHECK_THROWS_AS(check_envy_freeness(none, alloc({{0.5, 0.5}, {0.5, 0.5}})), ContractError);
}

TEST_CASE("compositional fairness") {
  // Single category with full mass on every row reduces to total variation.
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng() % 3, k = 2 + rng() % 3;
    Metric m = random_line_metric(rng, n);
    Instance inst(user_names(n), k, {[&] {
                    std::vector<std::size_t> all(k);
                    for (std::size_t i = 0; i < k; ++i) all[i] = i;
                    return all;
                  }()},
                  random_bids(rng, n, k), {m}, std::vector<CategorySet>(n, CategorySet{0}));
    Matrix p = random_allocation(rng, n, k).probabilities();
    for (std::size_t u = 0; u < n; ++u) {
      double s = 0.0;
      for (std::size_t i = 0; i < k; ++i) s += p(u, i);
      for (std::size_t i = 0; i < k; ++i) p(u, i) /= s;
    }
    Allocation full(p);
    CHECK(check_compositional(inst, full).pass == check_total_variation(inst, full).pass);
  }

  // A zero category mass exempts the pair from that category's constraint.
  Instance inst({"u", "v"}, 3, {{0, 1}, {2}}, Matrix(2, 3, 1.0),
                {Metric::uniform(2, 0.0), Metric::uniform(2, 0.0)},
                std::vector<CategorySet>{{0, 1}, {0, 1}});
  CHECK(check_compositional(inst, alloc({{0.5, 0.5, 0}, {0.25, 0.25, 0.5}})).pass);
  FairnessReport bad = check_compositional(inst, alloc({{0.5, 0.5, 0}, {0.4, 0.1, 0.5}}));
  CHECK_FALSE(bad.pass);
  CHECK(bad.witness.part == "intra_category");
}

TEST_CASE("bid ratio") {
  // f_1(1/3) = 2.
  Instance boundary = make_uniform_instance(Matrix::from_rows({{2}, {1}}), 1.0 / 3);
  CHECK(check_bid_ratio(boundary, BidRatioConstraint::family(1)).pass);
  Instance over = make_uniform_instance(Matrix::from_rows({{3}, {1}}), 1.0 / 3);
  FairnessReport r = check_bid_ratio(over, BidRatioConstraint::family(1));
  CHECK_FALSE(r.pass);
  CHECK(*r.diagnostic == doctest::Approx(1.5));
  CHECK(r.worst_margin == doctest::Approx(std::log(1.5)));
  // Reversed users give the same verdict.
  Instance reversed = make_uniform_instance(Matrix::from_rows({{1}, {3}}), 1.0 / 3);
  CHECK(check_bid_ratio(reversed, BidRatioConstraint::family(1)).worst_margin ==
        doctest::Approx(r.worst_margin));

  Instance one_zero = make_uniform_instance(Matrix::from_rows({{1}, {0}}), 1.0);
  CHECK(check_bid_ratio(one_zero, BidRatioConstraint::family(1)).pass);
  Instance one_zero_near = make_uniform_instance(Matrix::from_rows({{1}, {0}}), 0.9);
  CHECK_FALSE(check_bid_ratio(one_zero_near, BidRatioConstraint::family(1)).pass);
  Instance both_zero = make_uniform_instance(Matrix::from_rows({{0}, {0}}), 0.0);
  CHECK(check_bid_ratio(both_zero, BidRatioConstraint::family(1)).pass);
}

TEST_CASE("f_l") {
  CHECK(eval_f_l(2, 0.6) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(eval_f_l(1, 1.0 / 3) == doctest::Approx(2.0).epsilon(1e-12));
  for (double l : {1.0, 2.5, 7.0}) CHECK(eval_f_l(l, 0.0) == 1.0);
  CHECK(eval_f_l(3, 1.0) == kInf);

  for (double l = 1.0; l <= 5.0; l += 0.5) {
    for (double d = 0.0; d < 0.99; d += 0.01) {
      CHECK(eval_f_l(l, d + 0.01) >= eval_f_l(l, d));
      if (d > 0) CHECK(eval_f_l(l + 0.5, d) <= eval_f_l(l, d));
    }
  }
}

TEST_CASE("tabulated constraint") {
  BidRatioConstraint t = BidRatioConstraint::tabulated({{0, 1}, {0.5, 4}, {1, kInf}});
  CHECK(t(0) == 1.0);
  CHECK(t(0.25) == doctest::Approx(2.0));  // linear in log f
  CHECK(t(0.5) == doctest::Approx(4.0));
  CHECK(t(0.75) == doctest::Approx(8.0));
  CHECK(t(1.0) == kInf);
  CHECK_THROWS_AS(BidRatioConstraint::tabulated({{0, 2}, {1, 3}}), ContractError);
  CHECK_THROWS_AS(BidRatioConstraint::tabulated({{0, 1}, {0.5, 3}, {1, 2}}), ContractError);
  CHECK_THROWS_AS(BidRatioConstraint::family(0.5), ContractError);
}

TEST_CASE("multiplicativity") {
  CHECK(std::log(eval_f_l(1, 0.6)) - 2 * std::log(eval_f_l(1, 0.3)) > 0);
  for (double l : {1.0, 2.0, 3.0, 5.0}) {
    MultiplicativityResult res = classify_multiplicativity(BidRatioConstraint::family(l), 0.05);
    CHECK(res.kind == Multiplicativity::kSuper);
    CHECK(res.super_points == res.points);
    CHECK(res.points > 0);
  }
  std::vector<std::pair<double, double>> linear;
  for (int i = 0; i <= 100; ++i) linear.emplace_back(i / 100.0, 1.0 + i / 100.0);
  MultiplicativityResult lin = classify_multiplicativity(BidRatioConstraint::tabulated(linear), 0.05);
  CHECK(lin.kind == Multiplicativity::kSub);

  MultiplicativityResult flat =
      classify_multiplicativity(BidRatioConstraint::tabulated({{0, 1}, {1, 1}}), 0.1);
  CHECK(flat.kind == Multiplicativity::kSub);
  CHECK(flat.super_points == 0);
  CHECK_THROWS_AS(classify_multiplicativity(BidRatioConstraint::family(1), 0.6), ContractError);
}

TEST_CASE("fairness properties on random inputs") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 2 + rng() % 4, k = 1 + rng() % 5;
    Metric m = random_line_metric(rng, n);
    std::vector<std::size_t> all(k);
    for (std::size_t i = 0; i < k; ++i) all[i] = i;
    Instance inst(user_names(n), k, {all}, random_bids(rng, n, k), {m});
    Allocation p = random_allocation(rng, n, k);
    double beta = 1.0 + 3.0 * unit(rng);
    FairnessReport tv = check_total_variation(inst, p, beta);
    if (tv.pass) CHECK(check_multiple_task(inst, p, beta).pass);
    CHECK(check_multiple_task(inst, p, beta).worst_margin <= tv.worst_margin + 1e-12);
    if (check_multiple_task(inst, p, beta).pass) CHECK(check_multiple_task(inst, p, beta + 1).pass);
    if (tv.pass) CHECK(check_total_variation(inst, p, beta * 2).pass);
    CHECK(tv.pass == (tv.worst_margin <= 1e-9));
  }
}

TEST_CASE("report JSON") {
  Instance inst = make_uniform_instance(Matrix(2, 2, 1.0), 0.2);
  nlohmann::json j = to_json(check_multiple_task(inst, alloc({{1, 0}, {0, 1}})));
  for (const char* key : {"definition", "beta", "pass", "worst_margin", "witness", "violations"})
    CHECK(j.contains(key));
  CHECK(j["pass"] == false);
}
