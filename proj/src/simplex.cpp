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

#include "adfair/simplex.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace adfair {

namespace {

// Dictionary tableau. Rows 0..m-1 are constraints, row m the objective and
// row m+1 the phase-one objective. Columns 0..n-1 hold non-basic variables,
// column n the artificial variable, column n+1 the right-hand side.
class Tableau {
 public:
  Tableau(const Matrix& A, std::span<const double> b, std::span<const double> c,
          const SimplexOptions& options)
      : m_(A.rows()),
        n_(A.cols()),
        w_(n_ + 2),
        opt_(options),
        d_((m_ + 2) * w_, 0.0),
        basis_(m_),
        nonbasis_(n_ + 1) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = A(i, j);
      basis_[i] = static_cast<long>(n_ + i);
      at(i, n_) = -1.0;
      at(i, n_ + 1) = b[i];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasis_[j] = static_cast<long>(j);
      at(m_, j) = -c[j];
    }
    nonbasis_[n_] = -1;
    at(m_ + 1, n_) = 1.0;
    max_pivots_ = opt_.max_pivots ? opt_.max_pivots : 50 * (m_ + n_) + 1000;
  }

  LpSolution solve() {
    LpSolution out;
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i) {
      if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
    }
    if (m_ > 0 && at(r, n_ + 1) < -opt_.eps) {
      pivot(r, n_);
      if (!run(2) || at(m_ + 1, n_ + 1) < -opt_.eps) {
        out.status = LpStatus::kInfeasible;
        return finish(out);
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] != -1) continue;
        std::size_t s = 0;
        for (std::size_t j = 1; j <= n_; ++j) {
          if (better_bland(at(i, j), nonbasis_[j], at(i, s), nonbasis_[s])) s = j;
        }
        pivot(i, s);
      }
    }
    out.status = run(1) ? LpStatus::kOptimal : LpStatus::kUnbounded;
    out.objective = at(m_, n_ + 1);
    out.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) out.x[basis_[i]] = at(i, n_ + 1);
    }
    out.y.assign(m_, 0.0);
    for (std::size_t j = 0; j <= n_; ++j) {
      if (nonbasis_[j] >= static_cast<long>(n_)) {
        const double y = at(m_, j);
        out.y[nonbasis_[j] - n_] = y < 0.0 && y > -opt_.eps ? 0.0 : y;
      }
    }
    return finish(out);
  }

 private:
  double& at(std::size_t i, std::size_t j) { return d_[i * w_ + j]; }
  double at(std::size_t i, std::size_t j) const { return d_[i * w_ + j]; }

  static bool better_bland(double v, long id, double best, long best_id) {
    return v < best || (v == best && id < best_id);
  }

  LpSolution& finish(LpSolution& out) {
    out.pivots = pivots_;
    out.used_bland = used_bland_;
    return out;
  }

  void pivot(std::size_t r, std::size_t s) {
    if (++pivots_ > max_pivots_) {
      throw NumericalError("simplex pivot limit reached (" + std::to_string(max_pivots_) +
                           " pivots, " + std::to_string(m_) + " rows, " + std::to_string(n_) +
                           " columns)");
    }
    double* a = &at(r, 0);
    const double inv = 1.0 / a[s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* row = &at(i, 0);
      if (std::abs(row[s]) <= opt_.eps) continue;
      const double f = row[s] * inv;
      for (std::size_t j = 0; j < w_; ++j) row[j] -= a[j] * f;
      row[s] = a[s] * f;
    }
    for (std::size_t j = 0; j < w_; ++j) {
      if (j != s) a[j] *= inv;
    }
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i != r) at(i, s) *= -inv;
    }
    a[s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  // Phase 2 optimizes row m+1 (feasibility), phase 1 row m (objective).
  bool run(int phase) {
    const std::size_t x = m_ + static_cast<std::size_t>(phase) - 1;
    bool bland = false;
    std::size_t streak = 0;
    for (;;) {
      long s = -1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (nonbasis_[j] == -phase) continue;
        const double v = at(x, j);
        if (s < 0) {
          s = static_cast<long>(j);
          continue;
        }
        const double best = at(x, s);
        if (bland) {
          // Smallest variable index among the improving columns.
          if (v < -opt_.eps && (best >= -opt_.eps || nonbasis_[j] < nonbasis_[s])) s = static_cast<long>(j);
        } else if (better_bland(v, nonbasis_[j], best, nonbasis_[s])) {
          s = static_cast<long>(j);
        }
      }
      if (s < 0 || at(x, s) >= -opt_.eps) return true;
      long r = -1;
      for (std::size_t i = 0; i < m_; ++i) {
        if (at(i, s) <= opt_.eps) continue;
        if (r < 0) {
          r = static_cast<long>(i);
          continue;
        }
        const double ratio = at(i, n_ + 1) / at(i, s);
        const double best = at(r, n_ + 1) / at(r, s);
        if (ratio < best || (ratio == best && basis_[i] < basis_[r])) r = static_cast<long>(i);
      }
      if (r < 0) return false;
      const bool degenerate = at(r, n_ + 1) / at(r, s) <= opt_.eps;
      streak = degenerate ? streak + 1 : 0;
      if (!bland && streak >= opt_.degenerate_streak) {
        bland = true;
        used_bland_ = true;
      }
      pivot(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t w_;
  SimplexOptions opt_;
  std::vector<double> d_;
  std::vector<long> basis_;
  std::vector<long> nonbasis_;
  std::size_t pivots_ = 0;
  std::size_t max_pivots_ = 0;
  bool used_bland_ = false;
};

}  // namespace

LpSolution solve_lp(const Matrix& A, std::span<const double> b, std::span<const double> c,
                    const SimplexOptions& options) {
  if (b.size() != A.rows() || c.size() != A.cols()) {
    throw ContractError("LP dimensions do not match");
  }
  const double cells = static_cast<double>(A.rows() + 2) * static_cast<double>(A.cols() + 2);
  if (cells > static_cast<double>(options.max_tableau)) {
    throw CapacityError("LP tableau of " + std::to_string(A.rows() + 2) + " x " +
                        std::to_string(A.cols() + 2) + " exceeds the limit of " +
                        std::to_string(options.max_tableau) + " entries");
  }
  Tableau tableau(A, b, c, options);
  return tableau.solve();
}

}  // namespace adfair
