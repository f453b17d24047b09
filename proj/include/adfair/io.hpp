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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "adfair/core.hpp"
#include "json.hpp"

namespace adfair {

// Instance document:
//   {"users": [...], "k": int, "categories": [[...], ...],
//    "bids": [[...], ...],
//    "metrics": [{"uniform": d} | {"matrix": [[...]]}, ...],
//    "preferred_sets": [[...], ...]}            (optional)
//
// Malformed JSON or missing keys raise ParseError; documents that parse but
// violate an Instance invariant raise ContractError.
Instance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const Instance& instance);
Instance read_instance(const std::filesystem::path& path);
void write_instance(const Instance& instance, const std::filesystem::path& path);

// Allocation CSV: header `user,adv_0,...,adv_{k-1}`, one row per user, values
// printed with 17 significant digits so they re-read bit-exactly.
void write_allocation_csv(const Instance& instance, const Allocation& allocation,
                          std::ostream& out);
void write_allocation_csv(const Instance& instance, const Allocation& allocation,
                          const std::filesystem::path& path);
// User names and dimensions must match the instance (ContractError otherwise).
Allocation read_allocation_csv(const Instance& instance, std::istream& in);
Allocation read_allocation_csv(const Instance& instance, const std::filesystem::path& path);

// Shortest decimal that round-trips a double.
std::string format_double(double x);

}  // namespace adfair
