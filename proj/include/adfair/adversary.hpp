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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adfair/core.hpp"
#include "adfair/fairness.hpp"
#include "adfair/mechanisms.hpp"

namespace adfair {

struct AdversaryStep {
  std::vector<double> bids;
  std::vector<double> allocation;
  std::optional<CategorySet> preferred;
  double utility = 0.0;     // running
  double unfair_opt = 0.0;  // running
};

struct AdversaryTrace {
  std::string kind;
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> categories;
  double d = 0.0;  // uniform distance used for the trace's audit
  std::vector<AdversaryStep> steps;
  // Fair value of the whole trace.
  double realized = 0.0;
  double bound = 0.0;  // min(1, formula)
  double slack = 0.0;
  FairnessReport audit;

  bool within_bound(double tolerance = 1e-9) const { return realized <= bound + slack + tolerance; }
};

// The trace as an instance (users t0, t1, ...) plus the allocation it received.
Instance trace_instance(const AdversaryTrace& trace);
Allocation trace_allocation(const AdversaryTrace& trace);

// JSON lines: one object per step, then a summary object.
void write_trace_jsonl(const AdversaryTrace& trace, std::ostream& out);

// First user: every advertiser bids 1. The advertiser A with the smallest
// probability on it (lowest index on ties) then bids alpha on every later user
// and everybody else bids 1 / alpha. The audit is multiple-task fairness under
// the uniform metric d. Throws ContractError if the mechanism returns a row
// with negative entries or sum above 1 + 1e-9.
AdversaryTrace run_online_adversary(OnlineMechanism& mechanism, std::size_t k, double d,
                                    double alpha, std::size_t horizon);

// A mechanism that sees only the number of bidders: it returns probabilities
// for ranks 0 (highest bid) to k - 1, and the harness maps ranks onto
// advertisers. Ties in bids are ranked by advertiser index.
class PositionMechanism {
 public:
  virtual ~PositionMechanism() = default;
  virtual std::vector<double> allocate_ranks(std::size_t k) = 0;
  virtual std::string name() const = 0;
};

// 1/k on every rank.
class UniformSplitPosition : public PositionMechanism {
 public:
  std::vector<double> allocate_ranks(std::size_t k) override;
  std::string name() const override { return "uniform_split"; }
};

// 1/k + boost on the top rank, the remainder spread evenly over the others.
class TopBoostPosition : public PositionMechanism {
 public:
  explicit TopBoostPosition(double boost);
  std::vector<double> allocate_ranks(std::size_t k) override;
  std::string name() const override { return "top_boost"; }

 private:
  double boost_;
};

enum class PositionOpening {
  kZeros,    // 1, 0, ..., 0
  kNearTie,  // 1, 1 - delta, ..., 1 - delta
};

inline constexpr double kPositionDelta = 1e-6;
inline constexpr double kPositionAlpha = 1e6;

// After the opening user, the advertiser with the smallest probability on it
// bids alpha and the rest 1 / alpha. Bound: min(1, 1/k + 2d).
AdversaryTrace run_position_auction_adversary(PositionMechanism& mechanism, std::size_t k,
                                              double d, std::size_t horizon,
                                              PositionOpening opening = PositionOpening::kZeros);

// c single-advertiser categories. Each user bids 1 on one category C_u and 0
// elsewhere, and prefers a set S_u of 1..C categories excluding C_u. The
// sequence is chosen by beam search of the given width over the mechanism's
// cumulative utility (0 = exhaustive, guarded against blow-up); the greedy
// path is always evaluated too and the lower of the two is returned. The
// audit is beta envy-freeness. Bound: 1 / (1 + beta^-1 + ... + beta^-C).
AdversaryTrace run_envy_adversary(const OnlineMechanism& mechanism, std::size_t c, std::size_t C,
                                  double beta, std::size_t horizon, std::size_t search_width);

}  // namespace adfair
