// Copyright 2026 The ArchLens Authors.
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


#ifndef ARCHLENS_CLI_H_
#define ARCHLENS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace archlens {

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitFailure = 2;  // I/O, format or data failure
constexpr int kExitUsage = 64;

// Runs the `archlens` command line. `args` excludes the program name.
// Normal output goes to `out`, diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace archlens

#endif  // ARCHLENS_CLI_H_
