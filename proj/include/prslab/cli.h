// Copyright 2026 The prs-lab Authors
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

#ifndef PRSLAB_CLI_H
#define PRSLAB_CLI_H

#include <iosfwd>

namespace prslab {

/// Exit statuses of the command-line runner.
enum ExitStatus : int {
    kExitOk = 0,
    /// A suite ran but one of its assertions failed.
    kExitAssertionFailed = 1,
    /// The command line or config file is invalid.
    kExitUsage = 2,
    /// A computation was aborted (memory or enumeration budget, bad shape).
    kExitRuntimeError = 3,
};

/// Runs the prslab command line. Progress goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace prslab

#endif
