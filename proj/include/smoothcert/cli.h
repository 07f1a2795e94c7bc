//
// Copyright 2026 The SmoothCert Authors
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
//

// The `smoothcert` command line, as a library so it can be driven in-process.
//
// Subcommands: table, cert, smooth, realistic, estimate-error, compare.
// JSON reports have the shape {"manifest": {...}, "result": {...}}; the
// manifest carries the command, resolved config, seed, tool version and wall
// clock duration, and reruns with equal config produce byte-identical
// "result" payloads. CSV output uses commas, dot decimals and LF line ends.

#ifndef SMOOTHCERT_CLI_H_
#define SMOOTHCERT_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace smoothcert::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAbstain = 2;

// Environment variable supplying the default --seed.
inline constexpr const char* kSeedEnv = "SMOOTHCERT_SEED";

// `args` excludes the program name. Returns the process exit code: 0 on
// success, 1 on usage or I/O errors, 2 when the result is an abstention.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace smoothcert::cli

#endif  // SMOOTHCERT_CLI_H_
