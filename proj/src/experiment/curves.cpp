// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "overlap/experiment.hpp"

namespace overlap::experiment {

namespace {

double pull_of(double residual, double sigma) {
  if (sigma > 0.0) return residual / sigma;
  if (residual == 0.0) return 0.0;
  return std::copysign(std::numeric_limits<double>::infinity(), residual);
}

void finish(ComparisonReport& report, const CompareOptions& options) {
  report.within = 0;
  report.max_abs_pull = 0.0;
  for (const ComparisonPoint& p : report.points) {
    report.max_abs_pull = std::max(report.max_abs_pull, std::abs(p.pull));
    if (std::abs(p.pull) <= options.pull_threshold) ++report.within;
  }
  const auto count = static_cast<double>(report.points.size());
  report.fraction_within = report.points.empty() ? 0.0 : report.within / count;
  report.pass = !report.points.empty() && report.fraction_within >= options.pass_fraction;
}

bool in_window(double xi, const CompareOptions& options) {
  return xi >= options.xi_min && xi <= options.xi_max;
}

}  // namespace

ScalingCurve collapse(const EnsembleResult& result, std::int64_t R) {
  if (!result.has(0))
    throw std::invalid_argument("collapse needs the R = 0 baseline rows");
  if (!result.has(R))
    throw std::invalid_argument("collapse: no rows for R = " + std::to_string(R));
  ScalingCurve curve;
  curve.dim = result.dim;
  curve.R = R;
  curve.provenance = Provenance::measured;
  for (std::int64_t t : result.checkpoints) {
    const EnsembleRow& num = result.row(R, t);
    const EnsembleRow& den = result.row(0, t);
    CurvePoint p;
    p.t = t;
    p.xi = static_cast<double>(R) / std::sqrt(2.0 * static_cast<double>(t));
    p.phi = num.mean_w2 / den.mean_w2;
    // d(phi) = d(num)/den - phi d(den)/den, ensembles independent.
    const double a = num.stderr_w2 / den.mean_w2;
    const double b = p.phi * den.stderr_w2 / den.mean_w2;
    p.sigma = std::sqrt(a * a + b * b);
    curve.points.push_back(p);
  }
  return curve;
}

ScalingCurve analytic_curve(int dim, std::span<const double> xi,
                            const numerics::PrecisionBudget& budget) {
  ScalingCurve curve;
  curve.dim = dim;
  curve.provenance = Provenance::analytic;
  for (double x : xi) {
    const analytic::ScalingValue v = analytic::phi({x, static_cast<double>(dim), budget});
    curve.points.push_back({x, v.phi, v.error_estimate, 0});
  }
  return curve;
}

FractionCurve fraction_curve(const EnsembleResult& result, std::int64_t R) {
  if (!result.has(R))
    throw std::invalid_argument("fraction_curve: no rows for R = " + std::to_string(R));
  FractionCurve curve;
  bool first = true;
  for (const EnsembleRow& row : result.rows_for(R)) {
    const double a = row.mean_w2;
    const double b = row.mean_w1;
    const double f = a / b;
    // Delta method for a ratio of correlated means.
    const double var = row.stderr_w2 * row.stderr_w2 / (b * b) +
                 f * f * row.stderr_w1 * row.stderr_w1 / (b * b) -
                 2.0 * f * row.cov_means / (b * b);
    const double sigma = std::sqrt(std::max(0.0, var));
    curve.points.push_back({row.t, f, sigma});
    if (first || f > curve.max_f) {
      curve.max_f = f;
      curve.max_sigma = sigma;
      curve.argmax_t = row.t;
      first = false;
    }
  }
  return curve;
}

ComparisonReport compare(const ScalingCurve& measured, const CompareOptions& options) {
  ComparisonReport report;
  report.dim = measured.dim;
  report.R = measured.R;
  if (measured.dim >= 4) throw ScalingDivergence(measured.dim);
  for (const CurvePoint& m : measured.points) {
    if (!in_window(m.xi, options)) continue;
    const analytic::ScalingValue v =
        analytic::phi({m.xi, static_cast<double>(measured.dim), options.budget});
    ComparisonPoint p;
    p.xi = m.xi;
    p.t = m.t;
    p.measured = m.phi;
    p.sigma = m.sigma;
    p.reference = v.phi;
    p.reference_sigma = v.error_estimate;
    p.residual = m.phi - v.phi;
    p.pull = pull_of(p.residual, std::hypot(m.sigma, v.error_estimate));
    report.points.push_back(p);
  }
  finish(report, options);
  return report;
}

ComparisonReport compare(const ScalingCurve& measured, const ScalingCurve& reference,
                         const CompareOptions& options) {
  ComparisonReport report;
  report.dim = measured.dim;
  report.R = measured.R;
  for (const CurvePoint& m : measured.points) {
    if (!in_window(m.xi, options)) continue;
    for (const CurvePoint& r : reference.points) {
      if (std::abs(r.xi - m.xi) > 1e-9 * std::max(1.0, m.xi)) continue;
      ComparisonPoint p;
      p.xi = m.xi;
      p.t = m.t;
      p.measured = m.phi;
      p.sigma = m.sigma;
      p.reference = r.phi;
      p.reference_sigma = r.sigma;
      p.residual = m.phi - r.phi;
      p.pull = pull_of(p.residual, std::hypot(m.sigma, r.sigma));
      report.points.push_back(p);
      break;
    }
  }
  finish(report, options);
  return report;
}

}  // namespace overlap::experiment
