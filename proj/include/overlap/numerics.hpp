// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "overlap/errors.hpp"

namespace overlap::numerics {

struct PrecisionBudget {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_subdivisions = 4000;

  // Throws std::invalid_argument unless abs_tol > 0, rel_tol >= 0 and
  // max_subdivisions >= 1.
  void validate() const;

  friend bool operator==(const PrecisionBudget&, const PrecisionBudget&) = default;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

/// Error function, absolute error below 1e-14 on the whole real line.
///
/// Power series for |x| <= 2, continued fraction for erfc beyond. The result
/// is clamped strictly inside (-1, 1).
double erf(double x);

/// Complementary error function 1 - erf(x), accurate in relative terms for
/// large positive x.
double erfc(double x);

/// Exponential integral Ei(x) for x < 0 (principal value form
/// -int_{-x}^inf e^{-y}/y dy). Relative error below 1e-12 on [-50, -1e-8].
///
/// Throws DomainError at x == 0, for non-finite x, and for x > 0 which is
/// not supported.
double expint_ei(double x);

/// Globally adaptive 15-point Gauss-Kronrod integration of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate satisfies max(abs_tol, rel_tol*|value|). Nodes are strictly
/// interior, so integrable endpoint singularities are tolerated. If the
/// worst panel's estimate is already the rounding floor (50 eps times the
/// panel's integral of |f|) the loop stops early and that floor is what
/// error_estimate reports, which may exceed the requested tolerance.
///
/// Throws NonConvergence if max_subdivisions panels are not enough (or a
/// panel can no longer be split in floating point), IntegrandFailure if f
/// returns a non-finite value, std::invalid_argument unless a < b.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, const PrecisionBudget& budget);

namespace detail {
double erf_series(double x);
double erfc_continued_fraction(double x);
double expint_ei_series(double x);
double expint_e1_continued_fraction(double y);
}  // namespace detail

}  // namespace overlap::numerics
