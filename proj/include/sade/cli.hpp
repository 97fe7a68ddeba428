// Copyright 2026 The sade-bench Authors.
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

#ifndef SADE_CLI_HPP_
#define SADE_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace sade {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitProvider = 2;
inline constexpr int kExitUsage = 3;

// `args` excludes the program name. Errors go to `err` as one JSON line.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sade

#endif  // SADE_CLI_HPP_
