/*
 * Copyright 2026 The pathsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PATHSIM_CLI_HPP_
#define PATHSIM_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace pathsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitContextExhaustion = 3;
inline constexpr int kExitVerifyFailed = 4;

/// Runs `pathsim <args...>`; `args` excludes the program name. Reports go
/// to `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pathsim::cli

#endif  // PATHSIM_CLI_HPP_
