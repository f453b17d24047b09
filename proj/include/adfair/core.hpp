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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace adfair {

// Absolute tolerance used for probability comparisons throughout the library.
inline constexpr double kTolerance = 1e-9;

// Error taxonomy. The CLI maps each family onto an exit code.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  // Throws ContractError on ragged input.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<std::vector<double>> to_rows() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Symmetric pseudometric over users with values in [0, 1].
//
// A uniform metric stores only its common distance, so it scales to long
// adversarial traces where an explicit n x n matrix would not fit.
class Metric {
 public:
  static Metric uniform(std::size_t n, double d);
  // Validates symmetry, zero diagonal, range and the triangle inequality
  // (tolerance 1e-9).
  static Metric from_matrix(Matrix distances);

  std::size_t size() const { return n_; }
  bool is_uniform() const { return uniform_; }
  double uniform_distance() const { return d_; }

  double operator()(std::size_t u, std::size_t v) const {
    if (u == v) return 0.0;
    return uniform_ ? d_ : matrix_(u, v);
  }

 private:
  Metric() = default;
  std::size_t n_ = 0;
  bool uniform_ = true;
  double d_ = 0.0;
  Matrix matrix_;
};

using CategorySet = std::vector<std::size_t>;

// One round of the sponsored-search problem: users, advertisers partitioned
// into categories, bids, per-category metrics and optional preferred sets.
class Instance {
 public:
  Instance(std::vector<std::string> users, std::size_t num_advertisers,
           std::vector<std::vector<std::size_t>> categories, Matrix bids,
           std::vector<Metric> metrics,
           std::optional<std::vector<CategorySet>> preferred_sets = std::nullopt);

  std::size_t num_users() const { return users_.size(); }
  std::size_t num_advertisers() const { return k_; }
  std::size_t num_categories() const { return categories_.size(); }

  const std::vector<std::string>& users() const { return users_; }
  const std::vector<std::vector<std::size_t>>& categories() const { return categories_; }
  const std::vector<std::size_t>& category(std::size_t j) const { return categories_[j]; }
  std::size_t category_of(std::size_t advertiser) const { return category_of_[advertiser]; }
  std::size_t max_category_size() const;

  const Matrix& bids() const { return bids_; }
  double bid(std::size_t u, std::size_t i) const { return bids_(u, i); }

  const std::vector<Metric>& metrics() const { return metrics_; }
  const Metric& metric(std::size_t category) const { return metrics_[category]; }

  bool has_preferred_sets() const { return preferred_sets_.has_value(); }
  const std::vector<CategorySet>& preferred_sets() const;
  const CategorySet& preferred_set(std::size_t u) const;

  bool one_advertiser_per_category() const { return categories_.size() == k_; }

  // The same instance with users reordered: result user t is this user order[t].
  Instance permuted_users(std::span<const std::size_t> order) const;

 private:
  std::vector<std::string> users_;
  std::size_t k_;
  std::vector<std::vector<std::size_t>> categories_;
  std::vector<std::size_t> category_of_;
  Matrix bids_;
  std::vector<Metric> metrics_;
  std::optional<std::vector<CategorySet>> preferred_sets_;
};

// Single-category instance with a uniform metric; the common test setup.
Instance make_uniform_instance(const Matrix& bids, double d);

// Per-user probability rows over advertisers. Entries lie in [0, 1] and each
// row sums to at most 1 + 1e-9.
class Allocation {
 public:
  explicit Allocation(Matrix probabilities);
  static Allocation zeros(std::size_t users, std::size_t advertisers);

  std::size_t num_users() const { return p_.rows(); }
  std::size_t num_advertisers() const { return p_.cols(); }
  double operator()(std::size_t u, std::size_t i) const { return p_(u, i); }
  std::span<const double> row(std::size_t u) const { return p_.row(u); }
  const Matrix& probabilities() const { return p_; }

 private:
  Matrix p_;
};

// Category marginals q and within-category conditionals p / q. Conditional
// entries are NaN where the category mass is zero.
struct CategoryAllocation {
  Matrix mass;         // n x c
  Matrix conditional;  // n x k

  bool defined(std::size_t u, std::size_t j) const { return mass(u, j) > 0.0; }
  std::vector<double> conditional_in_category(const Instance& instance, std::size_t u,
                                              std::size_t j) const;
};

struct Ratio {
  double value = 0.0;
  // Set when the denominator is zero; value is then reported as 1.
  bool degenerate = false;
};

double utility(const Instance& instance, const Allocation& allocation);
double unfair_opt(const Instance& instance);
Ratio fair_value(const Instance& instance, const Allocation& allocation);
Ratio relaxed_fair_value(const Instance& instance, const Allocation& allocation);
CategoryAllocation category_marginals(const Instance& instance, const Allocation& allocation);

// Throws ContractError unless allocation dimensions match the instance.
void require_same_shape(const Instance& instance, const Allocation& allocation);

}  // namespace adfair
