// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Kept as a library function so tests can drive the
// full argument-to-exit-code path without spawning processes.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dashgen {

// Process exit codes. Diagnostics go to `err`; payload output (IR documents,
// produced-file listings) goes to `out`.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int validation_failure = 1;
inline constexpr int layout_failure = 2;
inline constexpr int io_or_parse_failure = 3;
inline constexpr int usage_error = 4;
}  // namespace exit_code

// Run the tool with `args` (argv[1..], program name excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dashgen
