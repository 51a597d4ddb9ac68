// SPDX-License-Identifier: Apache-2.0
//
// CLI front end, exposed as a function so tests can drive it in-process.

#ifndef FDBIA_CLI_APP_HPP
#define FDBIA_CLI_APP_HPP

#include <string>
#include <vector>

namespace fdbia::cli {

inline constexpr const char* kToolVersion = "fdbia 1.0.0";

/// Runs the tool with the given arguments (argv[0] excluded).
/// Returns 0 on success, 1 on configuration/usage errors, 2 on numerical or
/// runtime failures.
int run(const std::vector<std::string>& args);

}  // namespace fdbia::cli

#endif  // FDBIA_CLI_APP_HPP
