// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace overlap::cli {

// 0 success, 1 runtime or input failure, 2 scaling request at d >= 4,
// 3 comparison failed (or refused at d >= 4).
enum ExitCode : int { kOk = 0, kFailure = 1, kDivergence = 2, kComparisonFailed = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace overlap::cli
