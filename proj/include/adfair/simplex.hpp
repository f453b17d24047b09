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
#include <span>
#include <vector>

#include "adfair/core.hpp"

namespace adfair {

// Dense two-phase simplex for  max c'x  s.t.  Ax <= b, x >= 0.
//
// The tableau is kept in dictionary form (one row per constraint, one column
// per non-basic variable), so its size is (m + 2) x (n + 2) regardless of how
// many slacks there are. Pricing is Dantzig's rule; after a run of degenerate
// pivots it switches to Bland's rule for the rest of the phase, which rules
// out cycling.

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct SimplexOptions {
  double eps = 1e-9;
  // 0 picks 50 * (m + n) + 1000.
  std::size_t max_pivots = 0;
  std::size_t degenerate_streak = 64;
  // Largest tableau, in doubles, the solver will allocate.
  std::size_t max_tableau = 25'000'000;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;  // primal, length n
  std::vector<double> y;  // duals of the m rows, >= 0
  std::size_t pivots = 0;
  bool used_bland = false;
};

// Throws CapacityError if the tableau would exceed options.max_tableau and
// NumericalError if the pivot cap is hit.
LpSolution solve_lp(const Matrix& A, std::span<const double> b, std::span<const double> c,
                    const SimplexOptions& options = {});

}  // namespace adfair
