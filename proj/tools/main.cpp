// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include "overlap/cli.hpp"

int main(int argc, char** argv) { return overlap::cli::run(argc, argv); }
