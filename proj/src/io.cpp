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

#include "adfair/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace adfair {

using nlohmann::json;

namespace {

const json& require_key(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ParseError(std::string("instance document is missing key '") + key + "'");
  }
  return doc.at(key);
}

template <typename T>
T get_as(const json& value, const std::string& what) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    throw ParseError("bad value for " + what + ": " + e.what());
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && *begin == ' ') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw ParseError("not a number: '" + text + "'");
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

Instance instance_from_json(const json& doc) {
  auto users = get_as<std::vector<std::string>>(require_key(doc, "users"), "users");
  const auto k = get_as<std::size_t>(require_key(doc, "k"), "k");
  auto categories =
      get_as<std::vector<std::vector<std::size_t>>>(require_key(doc, "categories"), "categories");
  auto bid_rows = get_as<std::vector<std::vector<double>>>(require_key(doc, "bids"), "bids");
  const json& metric_docs = require_key(doc, "metrics");
  if (!metric_docs.is_array()) throw ParseError("'metrics' must be an array");

  std::vector<Metric> metrics;
  for (const auto& m : metric_docs) {
    if (m.contains("uniform")) {
      metrics.push_back(Metric::uniform(users.size(), get_as<double>(m.at("uniform"), "uniform")));
    } else if (m.contains("matrix")) {
      auto rows = get_as<std::vector<std::vector<double>>>(m.at("matrix"), "matrix");
      metrics.push_back(Metric::from_matrix(Matrix::from_rows(rows)));
    } else {
      throw ParseError("metric entries must have a 'uniform' or 'matrix' key");
    }
  }
  std::optional<std::vector<CategorySet>> preferred;
  if (doc.contains("preferred_sets") && !doc.at("preferred_sets").is_null()) {
    preferred = get_as<std::vector<CategorySet>>(doc.at("preferred_sets"), "preferred_sets");
  }
  if (bid_rows.size() != users.size()) {
    throw ContractError("'bids' needs one row per user");
  }
  return Instance(std::move(users), k, std::move(categories), Matrix::from_rows(bid_rows),
                  std::move(metrics), std::move(preferred));
}

json instance_to_json(const Instance& instance) {
  json doc;
  doc["users"] = instance.users();
  doc["k"] = instance.num_advertisers();
  doc["categories"] = instance.categories();
  doc["bids"] = instance.bids().to_rows();
  json metrics = json::array();
  for (const auto& m : instance.metrics()) {
    if (m.is_uniform()) {
      metrics.push_back({{"uniform", m.uniform_distance()}});
    } else {
      std::vector<std::vector<double>> rows(m.size(), std::vector<double>(m.size()));
      for (std::size_t u = 0; u < m.size(); ++u)
        for (std::size_t v = 0; v < m.size(); ++v) rows[u][v] = m(u, v);
      metrics.push_back({{"matrix", rows}});
    }
  }
  doc["metrics"] = metrics;
  if (instance.has_preferred_sets()) doc["preferred_sets"] = instance.preferred_sets();
  return doc;
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in " + path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

void write_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << instance_to_json(instance).dump(2) << '\n';
}

void write_allocation_csv(const Instance& instance, const Allocation& allocation,
                          std::ostream& out) {
  require_same_shape(instance, allocation);
  out << "user";
  for (std::size_t i = 0; i < allocation.num_advertisers(); ++i) out << ",adv_" << i;
  out << '\n';
  for (std::size_t u = 0; u < allocation.num_users(); ++u) {
    out << instance.users()[u];
    for (double x : allocation.row(u)) out << ',' << format_double(x);
    out << '\n';
  }
}

void write_allocation_csv(const Instance& instance, const Allocation& allocation,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  write_allocation_csv(instance, allocation, out);
}

Allocation read_allocation_csv(const Instance& instance, std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("allocation CSV is empty");
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "user") throw ParseError("allocation CSV header must start with 'user'");
  const std::size_t k = header.size() - 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (header[i + 1] != "adv_" + std::to_string(i)) {
      throw ParseError("unexpected allocation CSV column '" + header[i + 1] + "'");
    }
  }
  if (k != instance.num_advertisers()) {
    throw ContractError("allocation CSV has " + std::to_string(k) + " advertiser columns, instance has " +
                        std::to_string(instance.num_advertisers()));
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != k + 1) throw ParseError("allocation CSV row has the wrong number of fields");
    const std::size_t u = rows.size();
    if (u >= instance.num_users()) throw ContractError("allocation CSV has more rows than users");
    if (fields[0] != instance.users()[u]) {
      throw ContractError("allocation CSV row " + std::to_string(u) + " is for user '" + fields[0] +
                          "', expected '" + instance.users()[u] + "'");
    }
    std::vector<double> row;
    for (std::size_t i = 0; i < k; ++i) row.push_back(parse_double(fields[i + 1]));
    rows.push_back(std::move(row));
  }
  if (rows.size() != instance.num_users()) {
    throw ContractError("allocation CSV has " + std::to_string(rows.size()) + " rows, instance has " +
                        std::to_string(instance.num_users()) + " users");
  }
  return Allocation(Matrix::from_rows(rows));
}

Allocation read_allocation_csv(const Instance& instance, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open allocation file " + path.string());
  return read_allocation_csv(instance, in);
}

}  // namespace adfair
