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

#include <iosfwd>
#include <string>
#include <vector>

namespace adfair {

enum ExitCode : int {
  kExitOk = 0,
  kExitAuditFailed = 1,
  kExitParse = 2,
  kExitContract = 3,
  kExitCapacity = 4,
  kExitNumerical = 5,
};

// Entry point of the `adfair` tool; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// `start:stop:step` (stop exclusive), a comma list, or a single value.
std::vector<double> parse_range(const std::string& text);

}  // namespace adfair
