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
#include <random>
#include <vector>

#include "adfair/core.hpp"

namespace adfair::testing {

inline Matrix random_bids(std::mt19937_64& rng, std::size_t n, std::size_t k, double zero_prob = 0.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix bids(n, k);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t i = 0; i < k; ++i) bids(u, i) = unit(rng) < zero_prob ? 0.0 : unit(rng);
  return bids;
}

// Random row-substochastic allocation.
inline Allocation random_allocation(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix p(n, k);
  for (std::size_t u = 0; u < n; ++u) {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) total += (p(u, i) = unit(rng));
    double scale = unit(rng) / total;
    for (std::size_t i = 0; i < k; ++i) p(u, i) *= scale;
  }
  return Allocation(std::move(p));
}

// Points on [0, 1] give a valid line metric |x_u - x_v|.
inline Metric random_line_metric(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = unit(rng);
  Matrix m(n, n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) m(u, v) = x[u] > x[v] ? x[u] - x[v] : x[v] - x[u];
  return Metric::from_matrix(std::move(m));
}

inline std::vector<std::string> user_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t u = 0; u < n; ++u) names.push_back("u" + std::to_string(u));
  return names;
}

inline std::vector<std::vector<std::size_t>> singleton_categories(std::size_t k) {
  std::vector<std::vector<std::size_t>> cats(k);
  for (std::size_t i = 0; i < k; ++i) cats[i] = {i};
  return cats;
}

}  // namespace adfair::testing
