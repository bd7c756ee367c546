// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "overlap/analytic.hpp"

namespace overlap::experiment {

// Stream assignment: slot 0 is the R = 0 baseline, slot k >= 1 the k-th
// distinct positive separation in configuration order. Realization i of
// slot s uses stream index s * n + i; walker 1 and walker 2 use lanes 0
// and 1 of that stream.
inline constexpr const char* kStreamRule = "stream = slot * realizations + realization_index";

struct EnsembleConfig {
  int dim = 1;
  std::vector<std::int64_t> separations{5, 10, 20, 50};
  std::int64_t steps = std::int64_t{1} << 14;
  std::int64_t realizations = std::int64_t{1} << 14;
  std::uint64_t master_seed = 0;
  int worker_count = 1;
  std::vector<std::int64_t> checkpoints;  // empty: powers of 2 up to steps

  void validate() const;
  // 0 followed by the distinct positive separations, in order.
  std::vector<std::int64_t> radii() const;
  std::vector<std::int64_t> effective_checkpoints() const;
};

struct EnsembleRow {
  std::int64_t R = 0;
  std::int64_t t = 0;
  double mean_w2 = 0.0;
  double stderr_w2 = 0.0;
  double mean_w1 = 0.0;
  double stderr_w1 = 0.0;
  double cov_means = 0.0;  // covariance of mean_w2 and mean_w1 (same walks)
  std::int64_t n = 0;
};

struct EnsembleResult {
  int dim = 1;
  std::vector<std::int64_t> radii;
  std::vector<std::int64_t> checkpoints;
  std::vector<EnsembleRow> rows;  // grouped by R (radii order), then t
  bool stderr_defined = true;     // false when n == 1

  bool has(std::int64_t R) const;
  const EnsembleRow& row(std::int64_t R, std::int64_t t) const;
  std::vector<EnsembleRow> rows_for(std::int64_t R) const;
};

struct StreamRange {
  std::int64_t R;
  std::int64_t slot;
  std::uint64_t first;
  std::uint64_t last;
};

struct RunManifest {
  EnsembleConfig config;
  std::string code_version;
  std::string timestamp;
  std::string stream_rule = kStreamRule;
  std::vector<StreamRange> streams;
};

struct EnsembleRun {
  EnsembleResult result;
  RunManifest manifest;
};

/// n pair realizations for every R (R = 0 always included). Counts are summed
/// as exact integers, so the result does not depend on worker_count or
/// scheduling. A failure in any realization discards the whole ensemble.
EnsembleRun run_ensemble(const EnsembleConfig& config);

enum class Provenance { measured, analytic };

struct CurvePoint {
  double xi = 0.0;
  double phi = 0.0;
  double sigma = 0.0;
  std::int64_t t = 0;  // 0 for analytic points
};

struct ScalingCurve {
  int dim = 1;
  std::int64_t R = 0;
  Provenance provenance = Provenance::measured;
  std::vector<CurvePoint> points;
};

/// phi(t) = mean_w2(R,t) / mean_w2(0,t) at xi = R / sqrt(2t), with
/// first-order error propagation treating the two ensembles as independent.
ScalingCurve collapse(const EnsembleResult& result, std::int64_t R);

/// Phi_d at the given xi values; sigma is the evaluation error estimate.
ScalingCurve analytic_curve(int dim, std::span<const double> xi,
                            const numerics::PrecisionBudget& budget = {});

struct FractionPoint {
  std::int64_t t;
  double f;
  double sigma;
};

struct FractionCurve {
  std::vector<FractionPoint> points;
  std::int64_t argmax_t = 0;
  double max_f = 0.0;
  double max_sigma = 0.0;
};

/// f(t) = mean_w2(R,t) / mean_w1(R,t) and its maximum over checkpoints.
FractionCurve fraction_curve(const EnsembleResult& result, std::int64_t R);

struct CompareOptions {
  double xi_min = 0.05;
  double xi_max = 2.0;
  double pull_threshold = 3.0;
  double pass_fraction = 0.95;
  numerics::PrecisionBudget budget{};
};

struct ComparisonPoint {
  double xi = 0.0;
  std::int64_t t = 0;
  double measured = 0.0;
  double sigma = 0.0;
  double reference = 0.0;
  double reference_sigma = 0.0;
  double residual = 0.0;
  double pull = 0.0;
};

struct ComparisonReport {
  int dim = 1;
  std::int64_t R = 0;
  std::vector<ComparisonPoint> points;  // only those inside [xi_min, xi_max]
  double max_abs_pull = 0.0;
  int within = 0;
  double fraction_within = 0.0;
  bool pass = false;
};

/// Measured curve against the analytic Phi_d. Raises ScalingDivergence for
/// d >= 4.
ComparisonReport compare(const ScalingCurve& measured, const CompareOptions& options = {});

/// Two curves matched point by point at equal xi (relative 1e-9); the
/// reference sigma enters the pull in quadrature.
ComparisonReport compare(const ScalingCurve& measured, const ScalingCurve& reference,
                         const CompareOptions& options = {});

struct PersistenceConfig {
  int dim = 1;
  std::int64_t steps = std::int64_t{1} << 14;
  std::int64_t realizations = std::int64_t{1} << 14;
  std::uint64_t master_seed = 0;
  int worker_count = 1;
  std::vector<std::int64_t> checkpoints;  // empty: powers of 2 up to steps

  void validate() const;
};

struct PersistencePoint {
  std::int64_t t;
  double q_hat;  // fraction of walkers not yet returned after t steps
  double stderr;
};

struct PersistenceResult {
  int dim = 1;
  std::int64_t n = 0;
  std::vector<PersistencePoint> points;
};

/// Empirical persistence q(t); realization i uses stream index i, lane 0.
PersistenceResult run_persistence(const PersistenceConfig& config);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  int points = 0;
};

/// Weighted least squares of ln q against ln t over t in [t_min, t_max],
/// weights (q / stderr)^2. Points with q == 0 are skipped.
SlopeFit fit_loglog_slope(std::span<const PersistencePoint> points, std::int64_t t_min,
                          std::int64_t t_max);

}  // namespace overlap::experiment
