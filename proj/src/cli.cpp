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

#include "adfair/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "adfair/adversary.hpp"
#include "adfair/bounds.hpp"
#include "adfair/core.hpp"
#include "adfair/fairness.hpp"
#include "adfair/io.hpp"
#include "adfair/mechanisms.hpp"
#include "adfair/optlp.hpp"
#include "json.hpp"

namespace adfair {

using nlohmann::json;

namespace {

double parse_number(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw ParseError("not a number: '" + text + "'");
  return value;
}

json read_json_arg(const std::string& text) {
  try {
    if (!text.empty() && text.front() == '@') {
      std::ifstream in(text.substr(1));
      if (!in) throw ParseError("cannot open " + text.substr(1));
      return json::parse(in);
    }
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON argument: ") + e.what());
  }
}

std::vector<std::size_t> to_sizes(const std::vector<double>& values, const char* what) {
  std::vector<std::size_t> out;
  for (double v : values) {
    if (!(v >= 0.0) || v != std::floor(v)) {
      throw ContractError(std::string(what) + " values must be non-negative integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::ostream& open_or(std::ofstream& file, const std::string& path, std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file.open(path);
  if (!file) throw ParseError("cannot write " + path);
  return file;
}

bool uniform_common_distance(const Instance& instance, double& d) {
  for (const auto& m : instance.metrics()) {
    if (!m.is_uniform()) return false;
  }
  d = instance.metric(0).uniform_distance();
  for (const auto& m : instance.metrics()) {
    if (m.uniform_distance() != d) return false;
  }
  return true;
}

struct Options {
  std::string instance;
  std::string mech;
  std::string out;
  std::string summary;
  std::string allocation;
  std::string dump_lp;
  double beta = 1.0;
  std::optional<double> bid_ratio_l;
  std::string bid_ratio_table;

  std::string bound;
  std::optional<double> k, d, alpha, l, C, c, k_prime, h, n, r;
  std::optional<double> bound_beta;

  std::vector<std::string> l_values;
  std::string k_range;
  std::string d_range;

  std::string type;
  std::size_t horizon = 10000;
  std::size_t width = 1;
  std::string position_mech = "uniform_split";
  double boost = 0.0;
  std::string opening = "zeros";

  std::string kind = "random";
  std::uint64_t seed = 0;
  double b_high = 1.0;
  double b_low = 0.5;
};

int cmd_run(const Options& o, std::ostream& out) {
  const Instance instance = read_instance(o.instance);
  const MechanismConfig config = mechanism_from_json(read_json_arg(o.mech));
  const Allocation allocation = run_stream(instance, config);
  std::ofstream file;
  if (o.out.empty()) throw ContractError("run needs --out for the allocation CSV");
  write_allocation_csv(instance, allocation, open_or(file, o.out, out));
  const Ratio fv = fair_value(instance, allocation);
  json summary{{"mechanism", to_json(config)},
               {"utility", utility(instance, allocation)},
               {"unfair_opt", unfair_opt(instance)},
               {"fair_value", fv.value},
               {"degenerate", fv.degenerate}};
  if (instance.has_preferred_sets()) {
    const Ratio rfv = relaxed_fair_value(instance, allocation);
    summary["relaxed_fair_value"] = rfv.value;
    summary["relaxed_degenerate"] = rfv.degenerate;
  }
  std::ofstream sfile;
  open_or(sfile, o.summary, out) << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_audit(const Options& o, std::ostream& out) {
  const Instance instance = read_instance(o.instance);
  const Allocation allocation = read_allocation_csv(instance, std::filesystem::path(o.allocation));
  std::vector<FairnessReport> reports;
  reports.push_back(check_multiple_task(instance, allocation, o.beta));
  reports.push_back(check_total_variation(instance, allocation, o.beta));
  if (instance.has_preferred_sets()) {
    reports.push_back(check_envy_freeness(instance, allocation, o.beta));
    reports.push_back(check_compositional(instance, allocation, o.beta));
  }
  if (o.bid_ratio_l) {
    reports.push_back(check_bid_ratio(instance, BidRatioConstraint::family(*o.bid_ratio_l)));
  } else if (!o.bid_ratio_table.empty()) {
    const auto knots = read_json_arg(o.bid_ratio_table);
    std::vector<std::pair<double, double>> table;
    for (const auto& knot : knots) {
      if (!knot.is_array() || knot.size() != 2) throw ParseError("bid ratio knots are [d, f] pairs");
      const double f = knot[1].is_string() && knot[1].get<std::string>() == "inf"
                           ? std::numeric_limits<double>::infinity()
                           : knot[1].get<double>();
      table.emplace_back(knot[0].get<double>(), f);
    }
    reports.push_back(check_bid_ratio(instance, BidRatioConstraint::tabulated(std::move(table))));
  }
  json doc = json::array();
  bool pass = true;
  for (const auto& r : reports) {
    doc.push_back(to_json(r));
    pass = pass && r.pass;
  }
  out << doc.dump(2) << '\n';
  return pass ? kExitOk : kExitAuditFailed;
}

int cmd_opt(const Options& o, std::ostream& out) {
  const Instance instance = read_instance(o.instance);
  if (!o.dump_lp.empty()) {
    std::ofstream dump(o.dump_lp);
    if (!dump) throw ParseError("cannot write " + o.dump_lp);
    dump_lp(build_fair_lp(instance), dump);
  }
  const FairOptimum opt = solve_fair_lp(instance);
  const LpStructureReport structure =
      verify_lp_structure(instance, opt.allocation, opt.certificate);
  const Ratio fv = fair_value(instance, opt.allocation);
  json summary{{"objective", opt.primal},
               {"dual_objective", opt.dual},
               {"duality_gap", opt.gap},
               {"pivots", opt.pivots},
               {"unfair_opt", unfair_opt(instance)},
               {"fair_value", fv.value},
               {"degenerate", fv.degenerate},
               {"structure", to_json(structure)}};
  double d = 0.0;
  if (uniform_common_distance(instance, d) && instance.num_advertisers() >= 2) {
    try {
      const auto form = uniform_closed_form(instance.bids(), d);
      json cf = to_json(form);
      cf["agreement"] =
          std::abs(form.revenue - opt.primal) <= 1e-6 * std::max(1.0, std::abs(opt.primal));
      summary["closed_form"] = cf;
    } catch (const ContractError& e) {
      summary["closed_form"] = {{"error", e.what()}};
    }
  }
  if (!o.out.empty()) write_allocation_csv(instance, opt.allocation, std::filesystem::path(o.out));
  std::ofstream sfile;
  open_or(sfile, o.summary, out) << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_bounds(const Options& o, std::ostream& out) {
  BoundQuery q;
  q.name = bound_name_from_string(o.bound);
  q.k = o.k;
  q.d = o.d;
  q.alpha = o.alpha;
  q.l = o.l;
  q.beta = o.bound_beta;
  q.C = o.C;
  q.c = o.c;
  q.k_prime = o.k_prime;
  q.h = o.h;
  q.n = o.n;
  q.r = o.r;
  write_bound_rows({bound_row(q, bound_value(q))}, out);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  std::vector<double> ls;
  for (const auto& text : o.l_values) {
    for (double v : parse_range(text)) ls.push_back(v);
  }
  if (ls.empty()) throw ContractError("sweep needs --l");
  std::sort(ls.begin(), ls.end());
  const auto ks = to_sizes(parse_range(o.k_range), "--k");
  auto ds = parse_range(o.d_range);
  auto ks_sorted = ks;
  std::sort(ks_sorted.begin(), ks_sorted.end());
  std::sort(ds.begin(), ds.end());
  std::vector<BoundRow> rows;
  for (double l : ls) {
    const auto part = sweep_rows(sweep_ratio_surface(l, ks_sorted, ds));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::ofstream file;
  write_bound_rows(rows, open_or(file, o.out, out));
  return kExitOk;
}

int cmd_adversary(const Options& o, std::ostream& out) {
  AdversaryTrace trace;
  auto need = [](const std::optional<double>& v, const char* flag) {
    if (!v) throw ContractError(std::string("adversary needs ") + flag);
    return *v;
  };
  if (o.type == "online_uniform") {
    const auto k = to_sizes({need(o.k, "--k")}, "--k").front();
    const MechanismConfig config = mechanism_from_json(read_json_arg(o.mech));
    std::vector<std::size_t> all(k);
    for (std::size_t i = 0; i < k; ++i) all[i] = i;
    auto mech = make_mechanism(config, {all});
    trace = run_online_adversary(*mech, k, o.d.value_or(0.0), need(o.alpha, "--alpha"), o.horizon);
  } else if (o.type == "position") {
    const auto k = to_sizes({need(o.k, "--k")}, "--k").front();
    std::unique_ptr<PositionMechanism> mech;
    if (o.position_mech == "uniform_split") {
      mech = std::make_unique<UniformSplitPosition>();
    } else if (o.position_mech == "top_boost") {
      mech = std::make_unique<TopBoostPosition>(o.boost);
    } else {
      throw ContractError("unknown position mechanism '" + o.position_mech + "'");
    }
    PositionOpening opening;
    if (o.opening == "zeros") {
      opening = PositionOpening::kZeros;
    } else if (o.opening == "near_tie") {
      opening = PositionOpening::kNearTie;
    } else {
      throw ContractError("unknown opening '" + o.opening + "'");
    }
    trace = run_position_auction_adversary(*mech, k, need(o.d, "--d"), o.horizon, opening);
  } else if (o.type == "envy") {
    const auto c = to_sizes({need(o.c, "--c")}, "--c").front();
    const auto C = to_sizes({need(o.C, "--C")}, "--C").front();
    const MechanismConfig config = mechanism_from_json(read_json_arg(o.mech));
    std::vector<std::vector<std::size_t>> cats;
    for (std::size_t j = 0; j < c; ++j) cats.push_back({j});
    auto mech = make_mechanism(config, cats);
    trace = run_envy_adversary(*mech, c, C, o.bound_beta.value_or(1.0), o.horizon, o.width);
  } else {
    throw ContractError("unknown adversary type '" + o.type + "'");
  }
  if (!o.out.empty()) {
    std::ofstream file(o.out);
    if (!file) throw ParseError("cannot write " + o.out);
    write_trace_jsonl(trace, file);
  }
  json summary{{"kind", trace.kind},
               {"steps", trace.steps.size()},
               {"realized", trace.realized},
               {"bound", trace.bound},
               {"slack", trace.slack},
               {"within_bound", trace.within_bound()},
               {"audit", to_json(trace.audit)}};
  out << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_generate(const Options& o, std::ostream& out) {
  std::optional<Instance> instance;
  if (o.kind == "perfect_matching") {
    if (!o.k || !o.d) throw ContractError("perfect_matching needs --k and --d");
    instance = gen_perfect_matching(to_sizes({*o.k}, "--k").front(), *o.d, o.b_high, o.b_low);
  } else if (o.kind == "jack") {
    if (!o.c) throw ContractError("jack needs --c");
    instance = gen_jack_of_all_trades(to_sizes({*o.c}, "--c").front(), true);
  } else if (o.kind == "random") {
    if (!o.n || !o.k || !o.d) throw ContractError("random needs --n, --k and --d");
    const auto n = to_sizes({*o.n}, "--n").front();
    const auto k = to_sizes({*o.k}, "--k").front();
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix bids(n, k);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t i = 0; i < k; ++i) bids(u, i) = unit(rng);
    instance = make_uniform_instance(bids, *o.d);
  } else {
    throw ContractError("unknown instance kind '" + o.kind + "'");
  }
  std::ofstream file;
  open_or(file, o.out, out) << instance_to_json(*instance).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  if (text.empty()) throw ParseError("empty range");
  std::vector<std::string> parts;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw ParseError("range must be start:stop:step, got '" + text + "'");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0)) throw ParseError("range step must be positive");
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
      // Recompute from the index so long ranges do not accumulate error.
      const double v = start + static_cast<double>(i) * step;
      if (v >= stop - 1e-9 * step) break;
      out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
  }
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_number(part));
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fair sponsored-search allocation: mechanisms, audits, optimal LP, bounds"};
  // Bounds take a parameter called h, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Run a mechanism on an instance");
  run->add_option("--instance", o.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--mech", o.mech, "Mechanism config JSON, or @path")->required();
  run->add_option("--out", o.out, "Allocation CSV output")->required();
  run->add_option("--summary", o.summary, "Summary JSON output (default stdout)");

  auto* audit = app.add_subcommand("audit", "Audit an allocation against every fairness definition");
  audit->add_option("--instance", o.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  audit->add_option("--allocation", o.allocation, "Allocation CSV")
      ->required()
      ->check(CLI::ExistingFile);
  audit->add_option("--beta", o.beta, "Relaxation factor >= 1");
  audit->add_option("--bid-ratio-l", o.bid_ratio_l, "Also check bids against f_l");
  audit->add_option("--bid-ratio-table", o.bid_ratio_table,
                    "Also check bids against a [[d, f], ...] table (JSON or @path)");

  auto* opt = app.add_subcommand("opt", "Solve the optimal multiple-task fair LP");
  opt->add_option("--instance", o.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  opt->add_option("--out", o.out, "Optimal allocation CSV output");
  opt->add_option("--summary", o.summary, "Summary JSON output (default stdout)");
  opt->add_option("--dump-lp", o.dump_lp, "Write the LP in plain text");

  auto* bounds = app.add_subcommand("bounds", "Evaluate a fair-value bound formula");
  bounds->add_option("--name", o.bound, "Bound name")->required();
  bounds->add_option("--k", o.k, "Number of advertisers");
  bounds->add_option("--d", o.d, "Distance");
  bounds->add_option("--alpha", o.alpha, "Bid ratio f(d)");
  bounds->add_option("--l", o.l, "Exponent l");
  bounds->add_option("--beta", o.bound_beta, "Envy relaxation beta");
  bounds->add_option("--C", o.C, "Preferred set cap C (lp_norm: the norm value)");
  bounds->add_option("--c", o.c, "Number of categories");
  bounds->add_option("--k-prime", o.k_prime, "Largest category size");
  bounds->add_option("--h", o.h, "f(1) for concave constraints");
  bounds->add_option("--n", o.n, "Vector length for lp_norm");
  bounds->add_option("--r", o.r, "Fair value for propalloc_necessity");

  auto* sweep = app.add_subcommand("sweep", "Upper/lower bound ratio surface as CSV");
  sweep->add_option("--l", o.l_values, "Exponent(s) l; lists and ranges allowed")->required();
  sweep->add_option("--k", o.k_range, "k grid, start:stop:step")->required();
  sweep->add_option("--d", o.d_range, "d grid, start:stop:step")->required();
  sweep->add_option("--out", o.out, "CSV output (default stdout)");
  sweep->add_option("--seed", o.seed, "Accepted for uniformity; the sweep is deterministic");

  auto* adversary = app.add_subcommand("adversary", "Run an adaptive lower-bound adversary");
  adversary->add_option("--type", o.type, "online_uniform | position | envy")->required();
  adversary->add_option("--mech", o.mech, "Mechanism config JSON, or @path");
  adversary->add_option("--k", o.k, "Advertisers");
  adversary->add_option("--d", o.d, "Uniform distance");
  adversary->add_option("--alpha", o.alpha, "Bid ratio alpha");
  adversary->add_option("--horizon", o.horizon, "Number of users");
  adversary->add_option("--c", o.c, "Categories (envy)");
  adversary->add_option("--C", o.C, "Preferred set cap (envy)");
  adversary->add_option("--beta", o.bound_beta, "Envy relaxation beta");
  adversary->add_option("--width", o.width, "Beam width, 0 = exhaustive (envy)");
  adversary->add_option("--position-mech", o.position_mech, "uniform_split | top_boost");
  adversary->add_option("--boost", o.boost, "Top-rank boost for top_boost");
  adversary->add_option("--opening", o.opening, "zeros | near_tie (position)");
  adversary->add_option("--out", o.out, "Trace JSONL output");

  auto* generate = app.add_subcommand("generate", "Write an instance JSON");
  generate->add_option("--kind", o.kind, "random | perfect_matching | jack");
  generate->add_option("--n", o.n, "Users (random)");
  generate->add_option("--k", o.k, "Advertisers");
  generate->add_option("--d", o.d, "Uniform distance");
  generate->add_option("--c", o.c, "Categories (jack)");
  generate->add_option("--b-high", o.b_high, "Diagonal bid (perfect_matching)");
  generate->add_option("--b-low", o.b_low, "Off-diagonal bid (perfect_matching)");
  generate->add_option("--seed", o.seed, "64-bit RNG seed (random)");
  generate->add_option("--out", o.out, "Output path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (run->parsed()) return cmd_run(o, out);
    if (audit->parsed()) return cmd_audit(o, out);
    if (opt->parsed()) return cmd_opt(o, out);
    if (bounds->parsed()) return cmd_bounds(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (adversary->parsed()) return cmd_adversary(o, out);
    if (generate->parsed()) return cmd_generate(o, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ContractError& e) {
    err << "contract error: " << e.what() << '\n';
    return kExitContract;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitParse;
}

}  // namespace adfair
