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

#include "adfair/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "adfair/bounds.hpp"
#include "json.hpp"

namespace adfair {

namespace {

constexpr double kExhaustiveLimit = 1e6;

void check_row(const std::vector<double>& row, std::size_t k, const std::string& who) {
  if (row.size() != k) throw ContractError(who + " returned a row of the wrong length");
  double sum = 0.0;
  for (double x : row) {
    if (!(x >= -1e-12) || !std::isfinite(x)) throw ContractError(who + " returned a negative entry");
    sum += x;
  }
  if (sum > 1.0 + kTolerance) {
    throw ContractError(who + " returned a row summing to " + std::to_string(sum) + " > 1");
  }
}

std::size_t argmin_index(const std::vector<double>& row) {
  return static_cast<std::size_t>(std::min_element(row.begin(), row.end()) - row.begin());
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void push_step(AdversaryTrace& trace, std::vector<double> bids, std::vector<double> row,
               std::optional<CategorySet> preferred = std::nullopt) {
  const double prev_u = trace.steps.empty() ? 0.0 : trace.steps.back().utility;
  const double prev_o = trace.steps.empty() ? 0.0 : trace.steps.back().unfair_opt;
  const double top = *std::max_element(bids.begin(), bids.end());
  const double gain = dot(bids, row);
  trace.steps.push_back(
      {std::move(bids), std::move(row), std::move(preferred), prev_u + gain, prev_o + top});
}

void finish_trace(AdversaryTrace& trace, double formula, double alpha) {
  const auto& last = trace.steps.back();
  trace.realized = last.unfair_opt > 0.0 ? last.utility / last.unfair_opt : 1.0;
  trace.bound = std::min(1.0, formula);
  trace.slack = alpha > 0.0 ? adversary_slack(trace.bound, alpha, trace.steps.size()) : 0.0;
}

std::vector<std::vector<std::size_t>> single_category(std::size_t k) {
  std::vector<std::size_t> all(k);
  for (std::size_t i = 0; i < k; ++i) all[i] = i;
  return {all};
}

struct EnvyAction {
  std::size_t top;
  CategorySet preferred;
};

std::vector<EnvyAction> envy_actions(std::size_t c, std::size_t C) {
  std::vector<EnvyAction> out;
  for (std::size_t top = 0; top < c; ++top) {
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << c); ++mask) {
      if (mask & (std::uint32_t{1} << top)) continue;
      CategorySet s;
      for (std::size_t j = 0; j < c; ++j) {
        if (mask & (std::uint32_t{1} << j)) s.push_back(j);
      }
      if (s.size() <= C) out.push_back({top, std::move(s)});
    }
  }
  return out;
}

struct EnvyNode {
  std::shared_ptr<const EnvyNode> parent;
  std::vector<double> bids;
  std::vector<double> row;
  CategorySet preferred;
  double utility = 0.0;
};

struct EnvyState {
  std::unique_ptr<OnlineMechanism> mechanism;
  std::shared_ptr<const EnvyNode> path;
  double utility = 0.0;
};

EnvyState expand(const EnvyState& state, const EnvyAction& action, std::size_t c) {
  EnvyState next;
  next.mechanism = state.mechanism->clone();
  std::vector<double> bids(c, 0.0);
  bids[action.top] = 1.0;
  auto row = next.mechanism->allocate_user(bids, &action.preferred);
  check_row(row, c, next.mechanism->name());
  next.utility = state.utility + row[action.top];
  auto node = std::make_shared<EnvyNode>();
  node->parent = state.path;
  node->bids = std::move(bids);
  node->row = std::move(row);
  node->preferred = action.preferred;
  node->utility = next.utility;
  next.path = std::move(node);
  return next;
}

EnvyState beam_search(const OnlineMechanism& mechanism, const std::vector<EnvyAction>& actions,
                      std::size_t c, std::size_t horizon, std::size_t width) {
  std::vector<EnvyState> beam;
  beam.push_back({mechanism.clone(), nullptr, 0.0});
  for (std::size_t t = 0; t < horizon; ++t) {
    std::vector<EnvyState> next;
    for (const auto& state : beam) {
      for (const auto& action : actions) next.push_back(expand(state, action, c));
    }
    std::stable_sort(next.begin(), next.end(),
                     [](const EnvyState& a, const EnvyState& b) { return a.utility < b.utility; });
    if (next.size() > width) next.resize(width);
    beam = std::move(next);
  }
  return std::move(beam.front());
}

void exhaustive(const EnvyState& state, const std::vector<EnvyAction>& actions, std::size_t c,
                std::size_t depth_left, EnvyState& best) {
  if (depth_left == 0) {
    if (!best.path || state.utility < best.utility) {
      best.path = state.path;
      best.utility = state.utility;
    }
    return;
  }
  for (const auto& action : actions) {
    exhaustive(expand(state, action, c), actions, c, depth_left - 1, best);
  }
}

}  // namespace

Instance trace_instance(const AdversaryTrace& trace) {
  const std::size_t n = trace.steps.size();
  if (n == 0) throw ContractError("empty adversary trace");
  std::vector<std::string> users;
  Matrix bids(n, trace.k);
  bool has_pref = true;
  for (std::size_t t = 0; t < n; ++t) {
    users.push_back("t" + std::to_string(t));
    std::copy(trace.steps[t].bids.begin(), trace.steps[t].bids.end(), bids.row(t).begin());
    has_pref = has_pref && trace.steps[t].preferred.has_value();
  }
  std::optional<std::vector<CategorySet>> preferred;
  if (has_pref) {
    preferred.emplace();
    for (const auto& s : trace.steps) preferred->push_back(*s.preferred);
  }
  std::vector<Metric> metrics(trace.categories.size(), Metric::uniform(n, trace.d));
  return Instance(std::move(users), trace.k, trace.categories, std::move(bids), std::move(metrics),
                  std::move(preferred));
}

Allocation trace_allocation(const AdversaryTrace& trace) {
  Matrix p(trace.steps.size(), trace.k);
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    for (std::size_t i = 0; i < trace.k; ++i) p(t, i) = std::max(0.0, trace.steps[t].allocation[i]);
  }
  return Allocation(std::move(p));
}

void write_trace_jsonl(const AdversaryTrace& trace, std::ostream& out) {
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const auto& s = trace.steps[t];
    nlohmann::json line{{"step", t},
                        {"bids", s.bids},
                        {"allocation", s.allocation},
                        {"utility", s.utility},
                        {"unfair_opt", s.unfair_opt}};
    if (s.preferred) line["preferred"] = *s.preferred;
    out << line.dump() << '\n';
  }
  nlohmann::json summary{{"kind", trace.kind},
                         {"k", trace.k},
                         {"d", trace.d},
                         {"steps", trace.steps.size()},
                         {"realized", trace.realized},
                         {"bound", trace.bound},
                         {"slack", trace.slack},
                         {"within_bound", trace.within_bound()},
                         {"audit", to_json(trace.audit)}};
  out << nlohmann::json{{"summary", summary}}.dump() << '\n';
}

AdversaryTrace run_online_adversary(OnlineMechanism& mechanism, std::size_t k, double d,
                                    double alpha, std::size_t horizon) {
  if (horizon < 2) throw ContractError("online adversary needs horizon >= 2");
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw ContractError("alpha must be >= 1");
  const double formula = online_uniform_bound(k, d, alpha);
  AdversaryTrace trace;
  trace.kind = "online_uniform";
  trace.k = k;
  trace.categories = single_category(k);
  trace.d = d;
  trace.steps.reserve(horizon);

  std::vector<double> bids(k, 1.0);
  auto row = mechanism.allocate_user(bids, nullptr);
  check_row(row, k, mechanism.name());
  const std::size_t target = argmin_index(row);
  push_step(trace, bids, std::move(row));

  std::fill(bids.begin(), bids.end(), 1.0 / alpha);
  bids[target] = alpha;
  for (std::size_t t = 1; t < horizon; ++t) {
    row = mechanism.allocate_user(bids, nullptr);
    check_row(row, k, mechanism.name());
    push_step(trace, bids, std::move(row));
  }
  finish_trace(trace, formula, alpha);
  trace.audit = check_multiple_task(trace_instance(trace), trace_allocation(trace));
  return trace;
}

std::vector<double> UniformSplitPosition::allocate_ranks(std::size_t k) {
  return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

TopBoostPosition::TopBoostPosition(double boost) : boost_(boost) {
  if (!(boost >= 0.0)) throw ContractError("boost must be >= 0");
}

std::vector<double> TopBoostPosition::allocate_ranks(std::size_t k) {
  const double kk = static_cast<double>(k);
  const double top = std::min(1.0, 1.0 / kk + boost_);
  if (k == 1) return {top};
  std::vector<double> out(k, (1.0 - top) / (kk - 1.0));
  out[0] = top;
  return out;
}

AdversaryTrace run_position_auction_adversary(PositionMechanism& mechanism, std::size_t k,
                                              double d, std::size_t horizon,
                                              PositionOpening opening) {
  if (horizon < 2) throw ContractError("position adversary needs horizon >= 2");
  if (k < 1) throw ContractError("position adversary needs k >= 1");
  if (!(d >= 0.0 && d <= 1.0)) throw ContractError("d must lie in [0, 1]");
  AdversaryTrace trace;
  trace.kind = "position_auction";
  trace.k = k;
  trace.categories = single_category(k);
  trace.d = d;
  trace.steps.reserve(horizon);

  // Ranks map to advertisers by descending bid, ties by index.
  auto allocate = [&](const std::vector<double>& bids) {
    const auto ranks = mechanism.allocate_ranks(k);
    check_row(ranks, k, mechanism.name());
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return bids[a] > bids[b]; });
    std::vector<double> row(k);
    for (std::size_t r = 0; r < k; ++r) row[order[r]] = ranks[r];
    return row;
  };

  std::vector<double> bids(k, opening == PositionOpening::kZeros ? 0.0 : 1.0 - kPositionDelta);
  bids[0] = 1.0;
  auto row = allocate(bids);
  const std::size_t target = argmin_index(row);
  push_step(trace, bids, std::move(row));

  std::fill(bids.begin(), bids.end(), 1.0 / kPositionAlpha);
  bids[target] = kPositionAlpha;
  for (std::size_t t = 1; t < horizon; ++t) push_step(trace, bids, allocate(bids));

  const double formula = 1.0 / static_cast<double>(k) + 2.0 * d;
  finish_trace(trace, formula, kPositionAlpha);
  trace.audit = check_multiple_task(trace_instance(trace), trace_allocation(trace));
  return trace;
}

AdversaryTrace run_envy_adversary(const OnlineMechanism& mechanism, std::size_t c, std::size_t C,
                                  double beta, std::size_t horizon, std::size_t search_width) {
  if (C < 1) throw ContractError("envy adversary needs C >= 1");
  if (c <= C) throw ContractError("envy adversary needs c > C");
  if (c > 16) throw ContractError("envy adversary enumerates subsets and needs c <= 16");
  if (horizon < 1) throw ContractError("envy adversary needs horizon >= 1");
  const double formula = envy_tight_bound(beta, C);
  const auto actions = envy_actions(c, C);

  EnvyState best = beam_search(mechanism, actions, c, horizon, 1);
  if (search_width == 0) {
    const double leaves = std::pow(static_cast<double>(actions.size()), static_cast<double>(horizon));
    if (leaves > kExhaustiveLimit) {
      throw CapacityError("exhaustive envy search would visit " + std::to_string(leaves) +
                          " sequences; use a finite search width");
    }
    EnvyState found;
    exhaustive({mechanism.clone(), nullptr, 0.0}, actions, c, horizon, found);
    if (found.utility < best.utility) best = std::move(found);
  } else if (search_width > 1) {
    EnvyState beam = beam_search(mechanism, actions, c, horizon, search_width);
    if (beam.utility < best.utility) best = std::move(beam);
  }

  AdversaryTrace trace;
  trace.kind = "envy";
  trace.k = c;
  for (std::size_t j = 0; j < c; ++j) trace.categories.push_back({j});
  trace.d = 1.0;
  std::vector<const EnvyNode*> path;
  for (const EnvyNode* node = best.path.get(); node; node = node->parent.get()) path.push_back(node);
  std::reverse(path.begin(), path.end());
  trace.steps.reserve(path.size());
  for (const EnvyNode* node : path) push_step(trace, node->bids, node->row, node->preferred);
  finish_trace(trace, formula, 0.0);
  trace.audit = check_envy_freeness(trace_instance(trace), trace_allocation(trace), beta);
  return trace;
}

}  // namespace adfair
