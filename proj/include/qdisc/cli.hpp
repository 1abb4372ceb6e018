// Copyright 2026 The qdisc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDISC_CLI_HPP
#define QDISC_CLI_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qdisc {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kDomain = 1;
inline constexpr int kParse = 2;
inline constexpr int kNumeric = 3;
inline constexpr int kUsage = 64;
}  // namespace exit_code

// Exact angle arccos F1(E, I) for channels whose name tags a known family:
// "identity", "rotation:<t>", "phase:<phi>", "replace:<t>".
std::optional<double> analytic_theta(const std::string& channel_name);

// Runs one command. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdisc

#endif  // QDISC_CLI_HPP
