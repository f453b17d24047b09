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

#include "adfair/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adfair {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_l(double l) {
  if (!(l >= 1.0) || !std::isfinite(l)) throw ContractError("mechanism parameter l must be >= 1");
}

void require_beta_c(double beta, std::size_t C) {
  if (!(beta >= 1.0) || !std::isfinite(beta)) throw ContractError("beta must be >= 1");
  if (C < 1) throw ContractError("C must be >= 1");
}

void require_preferred(const CategorySet& preferred, std::size_t c) {
  if (preferred.empty()) throw ContractError("preferred set must be non-empty");
  for (std::size_t j : preferred) {
    if (j >= c) throw ContractError("preferred set references an unknown category");
  }
}

std::vector<double> category_max_bids(std::span<const double> bids,
                                      const std::vector<std::vector<std::size_t>>& categories) {
  std::vector<double> out;
  out.reserve(categories.size());
  for (const auto& members : categories) {
    double best = 0.0;
    for (std::size_t i : members) best = std::max(best, bids[i]);
    out.push_back(best);
  }
  return out;
}

double geometric_sum(double beta, std::size_t from, std::size_t to) {
  double sum = 0.0;
  for (std::size_t t = from; t <= to; ++t) sum += std::pow(beta, -static_cast<double>(t));
  return sum;
}

template <typename T>
T field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("mechanism config is missing '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad mechanism field '") + key + "': " + e.what());
  }
}

GMap g_from_json(const json& doc) {
  if (doc.is_string()) {
    if (doc.get<std::string>() == "linear") return GMap::linear();
    throw ParseError("unknown g map '" + doc.get<std::string>() + "'");
  }
  if (doc.is_object() && doc.contains("power")) return GMap::power(field<double>(doc, "power"));
  if (doc.is_object() && doc.contains("table")) {
    return GMap::table(field<std::vector<std::pair<double, double>>>(doc, "table"));
  }
  throw ParseError("g must be \"linear\", {\"power\": l} or {\"table\": [[x, g], ...]}");
}

json g_to_json(const GMap& g) {
  if (!g.is_power()) return {{"table", g.knots()}};
  if (g.exponent() == 1.0) return "linear";
  return {{"power", g.exponent()}};
}

// Maps a category row back onto advertisers when every category holds one.
std::vector<double> spread_categories(std::span<const double> category_row,
                                      const std::vector<std::vector<std::size_t>>& categories,
                                      std::size_t k) {
  std::vector<double> out(k, 0.0);
  for (std::size_t j = 0; j < categories.size(); ++j) out[categories[j].front()] = category_row[j];
  return out;
}

class StatelessMechanism : public OnlineMechanism {
 public:
  StatelessMechanism(MechanismConfig config, std::vector<std::vector<std::size_t>> categories)
      : config_(std::move(config)), categories_(std::move(categories)) {
    for (const auto& c : categories_) k_ += c.size();
  }

  std::vector<double> allocate_user(std::span<const double> bids,
                                    const CategorySet* preferred) override {
    if (bids.size() != k_) throw ContractError("bid row length does not match the advertisers");
    if (needs_preferred_sets(config_) && preferred == nullptr) {
      throw ContractError(mechanism_name(config_) + " needs preferred sets");
    }
    return std::visit(
        Overloaded{
            [&](const Proportional& m) { return proportional_allocate(bids, GMap::power(m.l)); },
            [&](const ProportionalG& m) { return proportional_allocate(bids, m.g); },
            [&](const EqualSpread& m) {
              const auto row = equal_spread_allocate(category_max_bids(bids, categories_),
                                                     *preferred, m.beta, m.C);
              return spread_categories(row, categories_, k_);
            },
            [&](const HighestBidderWins&) {
              const auto row = highest_bidder_wins(category_max_bids(bids, categories_), *preferred);
              return spread_categories(row, categories_, k_);
            },
            [&](const Composed1&) { return composed_allocate(bids, categories_, *preferred, config_); },
            [&](const Composed2&) { return composed_allocate(bids, categories_, *preferred, config_); },
            [&](const UnfairFirstPrice&) { return unfair_first_price(bids); },
        },
        config_);
  }

  std::unique_ptr<OnlineMechanism> clone() const override {
    return std::make_unique<StatelessMechanism>(*this);
  }

  std::string name() const override { return mechanism_name(config_); }

 private:
  MechanismConfig config_;
  std::vector<std::vector<std::size_t>> categories_;
  std::size_t k_ = 0;
};

}  // namespace

GMap GMap::power(double l) {
  require_l(l);
  GMap g;
  g.l_ = l;
  return g;
}

GMap GMap::linear() { return power(1.0); }

GMap GMap::table(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw ContractError("g table needs at least two knots");
  if (knots.front().first != 0.0 || knots.front().second != 0.0) {
    throw ContractError("g table must start at (0, 0)");
  }
  for (std::size_t t = 1; t < knots.size(); ++t) {
    if (!(knots[t].first > knots[t - 1].first) || !(knots[t].second > knots[t - 1].second) ||
        !std::isfinite(knots[t].second)) {
      throw ContractError("g table must be finite and strictly increasing");
    }
  }
  GMap g;
  g.knots_ = std::move(knots);
  const double top = g.knots_.back().first;
  for (const auto& [a, ga] : g.knots_) {
    for (const auto& [b, gb] : g.knots_) {
      if (a + b > top) break;
      if (g(a + b) < ga + gb - 1e-12 * (1.0 + ga + gb)) {
        std::ostringstream os;
        os << "g table is not superadditive at x = " << a << ", y = " << b;
        throw ContractError(os.str());
      }
    }
  }
  return g;
}

double GMap::operator()(double x) const {
  if (!(x >= 0.0)) throw ContractError("g is defined on non-negative inputs");
  if (is_power()) return l_ == 1.0 ? x : std::pow(x, l_);
  auto hi = std::lower_bound(knots_.begin(), knots_.end(), x,
                             [](const auto& knot, double v) { return knot.first < v; });
  if (hi == knots_.end()) hi = knots_.end() - 1;
  if (hi == knots_.begin()) return knots_.front().second;
  const auto lo = hi - 1;
  const double t = (x - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

std::string GMap::describe() const {
  if (!is_power()) return "table(" + std::to_string(knots_.size()) + " knots)";
  std::ostringstream os;
  os << "x^" << l_;
  return os.str();
}

MechanismConfig mechanism_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("mechanism config must be a JSON object");
  const auto kind = field<std::string>(doc, "mechanism");
  MechanismConfig out;
  if (kind == "proportional") {
    out = Proportional{field<double>(doc, "l")};
  } else if (kind == "proportional_g") {
    if (!doc.contains("g")) throw ParseError("mechanism config is missing 'g'");
    out = ProportionalG{g_from_json(doc.at("g"))};
  } else if (kind == "equal_spread") {
    out = EqualSpread{field<double>(doc, "beta"), field<std::size_t>(doc, "C")};
  } else if (kind == "highest_bidder") {
    out = HighestBidderWins{};
  } else if (kind == "composed1") {
    out = Composed1{field<double>(doc, "l")};
  } else if (kind == "composed2") {
    out = Composed2{field<double>(doc, "beta"), field<std::size_t>(doc, "C"), field<double>(doc, "l")};
  } else if (kind == "first_price") {
    out = UnfairFirstPrice{};
  } else {
    throw ParseError("unknown mechanism '" + kind + "'");
  }
  validate(out);
  return out;
}

json to_json(const MechanismConfig& config) {
  return std::visit(
      Overloaded{
          [](const Proportional& m) -> json { return {{"mechanism", "proportional"}, {"l", m.l}}; },
          [](const ProportionalG& m) -> json {
            return {{"mechanism", "proportional_g"}, {"g", g_to_json(m.g)}};
          },
          [](const EqualSpread& m) -> json {
            return {{"mechanism", "equal_spread"}, {"beta", m.beta}, {"C", m.C}};
          },
          [](const HighestBidderWins&) -> json { return {{"mechanism", "highest_bidder"}}; },
          [](const Composed1& m) -> json { return {{"mechanism", "composed1"}, {"l", m.l}}; },
          [](const Composed2& m) -> json {
            return {{"mechanism", "composed2"}, {"beta", m.beta}, {"C", m.C}, {"l", m.l}};
          },
          [](const UnfairFirstPrice&) -> json { return {{"mechanism", "first_price"}}; },
      },
      config);
}

std::string mechanism_name(const MechanismConfig& config) {
  return to_json(config).at("mechanism").get<std::string>();
}

void validate(const MechanismConfig& config) {
  std::visit(Overloaded{
                 [](const Proportional& m) { require_l(m.l); },
                 [](const ProportionalG&) {},
                 [](const EqualSpread& m) { require_beta_c(m.beta, m.C); },
                 [](const HighestBidderWins&) {},
                 [](const Composed1& m) { require_l(m.l); },
                 [](const Composed2& m) {
                   require_beta_c(m.beta, m.C);
                   require_l(m.l);
                 },
                 [](const UnfairFirstPrice&) {},
             },
             config);
}

bool needs_preferred_sets(const MechanismConfig& config) {
  return std::holds_alternative<EqualSpread>(config) ||
         std::holds_alternative<HighestBidderWins>(config) ||
         std::holds_alternative<Composed1>(config) || std::holds_alternative<Composed2>(config);
}

std::vector<double> proportional_allocate(std::span<const double> bids, const GMap& g) {
  const std::size_t k = bids.size();
  if (k == 0) throw ContractError("empty bid row");
  double top = 0.0;
  for (double b : bids) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw ContractError("bids must be finite and >= 0");
    top = std::max(top, b);
  }
  std::vector<double> out(k);
  // For x^l the common factor top^l cancels; dividing first keeps large bids
  // and large l away from overflow.
  const double scale = g.is_power() && top > 0.0 ? top : 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = g(bids[i] / scale);
    total += out[i];
  }
  if (!(total > 0.0)) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(k));
    return out;
  }
  for (double& x : out) x /= total;
  return out;
}

double equal_spread_p_high(double beta, std::size_t C) {
  require_beta_c(beta, C);
  return 1.0 / geometric_sum(beta, 0, C);
}

double equal_spread_p_fair(double beta, std::size_t C, std::size_t preferred_size) {
  require_beta_c(beta, C);
  if (preferred_size < 1 || preferred_size > C) throw ContractError("need 1 <= |S_u| <= C");
  return geometric_sum(beta, 1, preferred_size) /
         (static_cast<double>(preferred_size) * geometric_sum(beta, 0, C));
}

std::vector<double> equal_spread_allocate(std::span<const double> category_bids,
                                          const CategorySet& preferred, double beta,
                                          std::size_t C) {
  require_preferred(preferred, category_bids.size());
  if (preferred.size() > C) throw ContractError("equal-spread needs |S_u| <= C");
  const auto top = static_cast<std::size_t>(
      std::max_element(category_bids.begin(), category_bids.end()) - category_bids.begin());
  std::vector<double> out(category_bids.size(), 0.0);
  const double fair = equal_spread_p_fair(beta, C, preferred.size());
  for (std::size_t j : preferred) out[j] = fair;
  out[top] = equal_spread_p_high(beta, C);
  return out;
}

std::vector<double> highest_bidder_wins(std::span<const double> category_bids,
                                        const CategorySet& preferred) {
  require_preferred(preferred, category_bids.size());
  double best = -1.0;
  for (std::size_t j : preferred) best = std::max(best, category_bids[j]);
  std::size_t ties = 0;
  for (std::size_t j : preferred) ties += category_bids[j] == best;
  std::vector<double> out(category_bids.size(), 0.0);
  for (std::size_t j : preferred) {
    if (category_bids[j] == best) out[j] = 1.0 / static_cast<double>(ties);
  }
  return out;
}

std::vector<double> composed_allocate(std::span<const double> bids,
                                      const std::vector<std::vector<std::size_t>>& categories,
                                      const CategorySet& preferred,
                                      const MechanismConfig& config) {
  const auto cat_bids = category_max_bids(bids, categories);
  std::vector<double> mass;
  double l = 1.0;
  if (const auto* m = std::get_if<Composed1>(&config)) {
    mass = highest_bidder_wins(cat_bids, preferred);
    l = m->l;
  } else if (const auto* m2 = std::get_if<Composed2>(&config)) {
    mass = equal_spread_allocate(cat_bids, preferred, m2->beta, m2->C);
    l = m2->l;
  } else {
    throw ContractError("composed_allocate needs a composed1 or composed2 config");
  }
  const GMap g = GMap::power(l);
  std::vector<double> out(bids.size(), 0.0);
  std::vector<double> inner;
  for (std::size_t j = 0; j < categories.size(); ++j) {
    if (mass[j] <= 0.0) continue;
    inner.clear();
    for (std::size_t i : categories[j]) inner.push_back(bids[i]);
    const auto cond = proportional_allocate(inner, g);
    for (std::size_t t = 0; t < categories[j].size(); ++t) out[categories[j][t]] = mass[j] * cond[t];
  }
  return out;
}

std::vector<double> unfair_first_price(std::span<const double> bids) {
  if (bids.empty()) throw ContractError("empty bid row");
  const double best = *std::max_element(bids.begin(), bids.end());
  const auto ties = static_cast<double>(std::count(bids.begin(), bids.end(), best));
  std::vector<double> out(bids.size(), 0.0);
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (bids[i] == best) out[i] = 1.0 / ties;
  }
  return out;
}

std::unique_ptr<OnlineMechanism> make_mechanism(const MechanismConfig& config,
                                                std::vector<std::vector<std::size_t>> categories) {
  validate(config);
  if (std::holds_alternative<EqualSpread>(config) ||
      std::holds_alternative<HighestBidderWins>(config)) {
    for (const auto& c : categories) {
      if (c.size() != 1) {
        throw ContractError(mechanism_name(config) + " needs one advertiser per category");
      }
    }
  }
  return std::make_unique<StatelessMechanism>(config, std::move(categories));
}

Allocation run_stream(const Instance& instance, const MechanismConfig& config) {
  if (needs_preferred_sets(config) && !instance.has_preferred_sets()) {
    throw ContractError(mechanism_name(config) + " needs preferred sets");
  }
  auto mechanism = make_mechanism(config, instance.categories());
  return run_stream(instance, *mechanism);
}

Allocation run_stream(const Instance& instance, OnlineMechanism& mechanism) {
  const std::size_t n = instance.num_users();
  const std::size_t k = instance.num_advertisers();
  Matrix p(n, k);
  for (std::size_t u = 0; u < n; ++u) {
    const CategorySet* preferred =
        instance.has_preferred_sets() ? &instance.preferred_set(u) : nullptr;
    const auto row = mechanism.allocate_user(instance.bids().row(u), preferred);
    if (row.size() != k) throw ContractError(mechanism.name() + " returned a row of wrong length");
    std::copy(row.begin(), row.end(), p.row(u).begin());
  }
  return Allocation(std::move(p));
}

}  // namespace adfair
