// Copyright 2026 The PulseForge Authors. All Rights Reserved.
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

// `pulseforge` command-line front end: info, scan, grape, compare.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pulseforge::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kIoFailure = 3,
  kOptimizationFailure = 4,
};

// Runs one command. `args` excludes the program name, e.g.
// {"scan", "--error", "ple"}. Never throws; every failure maps to an ExitCode.
//
// `--config <file>` supplies `key=value` lines (`#` comments) that are
// applied as `--key=value` ahead of the explicit flags, so explicit flags win.
// The default output directory is $PULSEFORGE_OUT if set, else ".".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pulseforge::cli
