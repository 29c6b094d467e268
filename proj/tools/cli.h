// Copyright 2026 The AAOG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AAOG_TOOLS_CLI_H_
#define AAOG_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace aaog::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

// Runs one `aaog` subcommand. `args` excludes the program name. Machine
// output goes to `out` (or to files named by flags), diagnostics to `err`.
// Returns 0 on success, 1 on validation/runtime errors, 2 on usage errors.
int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace aaog::cli

#endif  // AAOG_TOOLS_CLI_H_
