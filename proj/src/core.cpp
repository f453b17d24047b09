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

#include "adfair/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>

namespace adfair {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw ContractError("ragged matrix: row " + std::to_string(r) + " has " +
                          std::to_string(rows[r].size()) + " entries, expected " +
                          std::to_string(cols));
    }
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

Metric Metric::uniform(std::size_t n, double d) {
  if (!(d >= 0.0 && d <= 1.0)) {
    throw ContractError("uniform metric distance must lie in [0, 1], got " + std::to_string(d));
  }
  Metric m;
  m.n_ = n;
  m.uniform_ = true;
  m.d_ = d;
  return m;
}

Metric Metric::from_matrix(Matrix distances) {
  const std::size_t n = distances.rows();
  if (distances.cols() != n) throw ContractError("metric matrix must be square");
  for (std::size_t u = 0; u < n; ++u) {
    if (distances(u, u) != 0.0) {
      throw ContractError("metric diagonal must be zero at user " + std::to_string(u));
    }
    for (std::size_t v = 0; v < n; ++v) {
      const double x = distances(u, v);
      if (!(x >= 0.0 && x <= 1.0)) {
        throw ContractError("metric entries must lie in [0, 1]");
      }
      if (x != distances(v, u)) throw ContractError("metric matrix must be symmetric");
    }
  }
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t u = 0; u < n; ++u) {
      const double uw = distances(u, w);
      for (std::size_t v = 0; v < n; ++v) {
        if (distances(u, v) > uw + distances(w, v) + kTolerance) {
          throw ContractError("metric violates the triangle inequality at (" +
                              std::to_string(u) + ", " + std::to_string(v) + ") via " +
                              std::to_string(w));
        }
      }
    }
  }
  Metric m;
  m.n_ = n;
  m.uniform_ = false;
  m.matrix_ = std::move(distances);
  return m;
}

Instance::Instance(std::vector<std::string> users, std::size_t num_advertisers,
                   std::vector<std::vector<std::size_t>> categories, Matrix bids,
                   std::vector<Metric> metrics,
                   std::optional<std::vector<CategorySet>> preferred_sets)
    : users_(std::move(users)),
      k_(num_advertisers),
      categories_(std::move(categories)),
      bids_(std::move(bids)),
      metrics_(std::move(metrics)),
      preferred_sets_(std::move(preferred_sets)) {
  const std::size_t n = users_.size();
  if (n == 0) throw ContractError("instance needs at least one user");
  if (k_ == 0) throw ContractError("instance needs at least one advertiser");
  std::set<std::string> seen;
  for (const auto& u : users_) {
    if (!seen.insert(u).second) throw ContractError("duplicate user identifier '" + u + "'");
  }
  if (categories_.empty()) throw ContractError("instance needs at least one category");
  category_of_.assign(k_, std::numeric_limits<std::size_t>::max());
  for (std::size_t j = 0; j < categories_.size(); ++j) {
    if (categories_[j].empty()) {
      throw ContractError("category " + std::to_string(j) + " is empty");
    }
    for (std::size_t i : categories_[j]) {
      if (i >= k_) throw ContractError("advertiser index out of range in category list");
      if (category_of_[i] != std::numeric_limits<std::size_t>::max()) {
        throw ContractError("advertiser " + std::to_string(i) + " appears in two categories");
      }
      category_of_[i] = j;
    }
  }
  for (std::size_t i = 0; i < k_; ++i) {
    if (category_of_[i] == std::numeric_limits<std::size_t>::max()) {
      throw ContractError("advertiser " + std::to_string(i) + " has no category");
    }
  }
  if (bids_.rows() != n || bids_.cols() != k_) {
    throw ContractError("bid matrix must be " + std::to_string(n) + " x " + std::to_string(k_));
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (double b : bids_.row(u)) {
      if (!std::isfinite(b) || b < 0.0) throw ContractError("bids must be finite and >= 0");
    }
  }
  if (metrics_.size() != categories_.size()) {
    throw ContractError("need exactly one metric per category");
  }
  for (const auto& m : metrics_) {
    if (m.size() != n) throw ContractError("metric size does not match the number of users");
  }
  if (preferred_sets_) {
    if (preferred_sets_->size() != n) throw ContractError("need one preferred set per user");
    for (auto& s : *preferred_sets_) {
      if (s.empty()) throw ContractError("preferred sets must be non-empty");
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
        throw ContractError("preferred set lists a category twice");
      }
      if (s.back() >= categories_.size()) {
        throw ContractError("preferred set references an unknown category");
      }
    }
  }
}

std::size_t Instance::max_category_size() const {
  std::size_t out = 0;
  for (const auto& c : categories_) out = std::max(out, c.size());
  return out;
}

const std::vector<CategorySet>& Instance::preferred_sets() const {
  if (!preferred_sets_) throw ContractError("instance has no preferred sets");
  return *preferred_sets_;
}

const CategorySet& Instance::preferred_set(std::size_t u) const { return preferred_sets()[u]; }

Instance Instance::permuted_users(std::span<const std::size_t> order) const {
  const std::size_t n = num_users();
  if (order.size() != n) throw ContractError("permutation length mismatch");
  std::vector<std::string> users(n);
  Matrix bids(n, k_);
  std::optional<std::vector<CategorySet>> pref;
  if (preferred_sets_) pref.emplace(n);
  for (std::size_t t = 0; t < n; ++t) {
    users[t] = users_[order[t]];
    std::copy(bids_.row(order[t]).begin(), bids_.row(order[t]).end(), bids.row(t).begin());
    if (pref) (*pref)[t] = (*preferred_sets_)[order[t]];
  }
  std::vector<Metric> metrics;
  for (const auto& m : metrics_) {
    if (m.is_uniform()) {
      metrics.push_back(Metric::uniform(n, m.uniform_distance()));
    } else {
      Matrix d(n, n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) d(a, b) = m(order[a], order[b]);
      metrics.push_back(Metric::from_matrix(std::move(d)));
    }
  }
  return Instance(std::move(users), k_, categories_, std::move(bids), std::move(metrics),
                  std::move(pref));
}

Instance make_uniform_instance(const Matrix& bids, double d) {
  std::vector<std::string> users;
  for (std::size_t u = 0; u < bids.rows(); ++u) users.push_back("u" + std::to_string(u));
  std::vector<std::size_t> all(bids.cols());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return Instance(std::move(users), bids.cols(), {all}, bids,
                  {Metric::uniform(bids.rows(), d)});
}

Allocation::Allocation(Matrix probabilities) : p_(std::move(probabilities)) {
  for (std::size_t u = 0; u < p_.rows(); ++u) {
    double sum = 0.0;
    for (double x : p_.row(u)) {
      if (!(x >= 0.0 && x <= 1.0 + kTolerance)) {
        throw ContractError("allocation entries must lie in [0, 1] (user " + std::to_string(u) +
                            ")");
      }
      sum += x;
    }
    if (sum > 1.0 + kTolerance) {
      throw ContractError("allocation row " + std::to_string(u) + " sums to " +
                          std::to_string(sum) + " > 1");
    }
  }
}

Allocation Allocation::zeros(std::size_t users, std::size_t advertisers) {
  return Allocation(Matrix(users, advertisers));
}

std::vector<double> CategoryAllocation::conditional_in_category(const Instance& instance,
                                                                std::size_t u,
                                                                std::size_t j) const {
  std::vector<double> out;
  for (std::size_t i : instance.category(j)) out.push_back(conditional(u, i));
  return out;
}

void require_same_shape(const Instance& instance, const Allocation& allocation) {
  if (allocation.num_users() != instance.num_users() ||
      allocation.num_advertisers() != instance.num_advertisers()) {
    throw ContractError("allocation is " + std::to_string(allocation.num_users()) + " x " +
                        std::to_string(allocation.num_advertisers()) + " but instance is " +
                        std::to_string(instance.num_users()) + " x " +
                        std::to_string(instance.num_advertisers()));
  }
}

double utility(const Instance& instance, const Allocation& allocation) {
  require_same_shape(instance, allocation);
  double total = 0.0;
  for (std::size_t u = 0; u < instance.num_users(); ++u) {
    for (std::size_t i = 0; i < instance.num_advertisers(); ++i) {
      total += allocation(u, i) * instance.bid(u, i);
    }
  }
  return total;
}

double unfair_opt(const Instance& instance) {
  double total = 0.0;
  for (std::size_t u = 0; u < instance.num_users(); ++u) {
    const auto row = instance.bids().row(u);
    total += *std::max_element(row.begin(), row.end());
  }
  return total;
}

Ratio fair_value(const Instance& instance, const Allocation& allocation) {
  const double num = utility(instance, allocation);
  const double den = unfair_opt(instance);
  if (den <= 0.0) return {1.0, true};
  return {num / den, false};
}

Ratio relaxed_fair_value(const Instance& instance, const Allocation& allocation) {
  require_same_shape(instance, allocation);
  if (!instance.has_preferred_sets()) {
    throw ContractError("relaxed fair value needs preferred sets");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t u = 0; u < instance.num_users(); ++u) {
    double best = 0.0;
    for (std::size_t j : instance.preferred_set(u)) {
      for (std::size_t i : instance.category(j)) {
        num += allocation(u, i) * instance.bid(u, i);
        best = std::max(best, instance.bid(u, i));
      }
    }
    den += best;
  }
  if (den <= 0.0) return {1.0, true};
  return {num / den, false};
}

CategoryAllocation category_marginals(const Instance& instance, const Allocation& allocation) {
  require_same_shape(instance, allocation);
  const std::size_t n = instance.num_users();
  const std::size_t c = instance.num_categories();
  CategoryAllocation out{Matrix(n, c),
                         Matrix(n, instance.num_advertisers(),
                                std::numeric_limits<double>::quiet_NaN())};
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t j = 0; j < c; ++j) {
      double q = 0.0;
      for (std::size_t i : instance.category(j)) q += allocation(u, i);
      out.mass(u, j) = q;
      if (q > 0.0) {
        for (std::size_t i : instance.category(j)) out.conditional(u, i) = allocation(u, i) / q;
      }
    }
  }
  return out;
}

}  // namespace adfair
