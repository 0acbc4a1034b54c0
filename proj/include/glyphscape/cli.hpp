// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace glyphscape {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs the command line. `args` excludes the program name. Errors go to
/// `err` as a single line starting with "error:".
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace glyphscape
