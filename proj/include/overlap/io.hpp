// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "overlap/experiment.hpp"

// File formats. Floating-point fields are printed with 17 significant digits
// so every value round-trips exactly.
namespace overlap::io {

// Header: dim,R,t,xi,mean_w2,stderr_w2,mean_w1,stderr_w1,n
inline constexpr const char* kResultsHeader = "dim,R,t,xi,mean_w2,stderr_w2,mean_w1,stderr_w1,n";

void write_results_csv(std::ostream& out, const experiment::EnsembleResult& result);

/// Throws std::runtime_error on an empty or malformed file. The covariance
/// column is not stored, so cov_means is 0 for loaded rows.
experiment::EnsembleResult read_results_csv(std::istream& in);

/// Manifest as pretty-printed JSON; key names are listed in docs/formats.md.
std::string manifest_json(const experiment::RunManifest& manifest);

/// Header: t,q_hat,stderr
void write_persistence_csv(std::ostream& out, const experiment::PersistenceResult& result);

/// "%.17g"
std::string format_real(double value);

/// UTC ISO-8601 time from SOURCE_DATE_EPOCH when set, otherwise now.
std::string current_timestamp();

}  // namespace overlap::io
