// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "overlap/errors.hpp"
#include "overlap/numerics.hpp"

// Scaling functions Phi_d(xi) of the mean overlap volume of two walkers
// started a distance R apart, xi = R / sqrt(2t) in lattice units.
//
// Phi_d(xi) = I(xi, d) / I(0, d) where
//   d <  2:  I_<(xi,d) = int int dz1 dz2 (1-z1)^{-d/2} (1-z2)^{-d/2}
//                         exp(-d xi^2/(z1+z2)) / (z1+z2)^{d/2}
//   d >= 2:  I_>(xi,d) = int int dz1 dz2 exp(-d xi^2/(z1+z2)) / (z1+z2)^{d/2}
// over the unit square. I_>(0,d) diverges at d >= 4 and no scaling function
// exists there; every entry point raises ScalingDivergence in that case.
namespace overlap::analytic {

using numerics::PrecisionBudget;
using numerics::QuadratureResult;

struct ScalingQuery {
  double xi = 0.0;
  double dim = 1.0;
  PrecisionBudget budget{};

  void validate() const;
};

struct ScalingValue {
  double phi = 1.0;
  double numerator = 0.0;    // I(xi, d)
  double denominator = 0.0;  // I(0, d)
  double error_estimate = 0.0;
};

enum class Method { automatic, closed, quadrature, series };

// coefficient * xi^power * (log_factor ? ln(xi) : 1)
struct SeriesTerm {
  double power;
  bool log_factor;
  double coefficient;
};

struct SeriesExpansion {
  int dim;
  std::vector<SeriesTerm> terms;

  double evaluate(double xi) const;
};

/// I_<(xi, d) for 0 < d < 2 from the (u, v) reduced form.
///
/// The inner v-integral uses arcsin for d == 1 and nested quadrature
/// otherwise. Power-law endpoint factors are removed by substitution before
/// integrate_adaptive is called.
QuadratureResult i_less(double xi, double dim, const PrecisionBudget& budget = {});

/// I_<(xi, 1) with the u in [1, 2] part in closed form (exp and erf terms).
double i_less_1d_closed(double xi, const PrecisionBudget& budget = {});

/// I_>(xi, d) for 2 <= d < 4 as two one-dimensional u-integrals.
/// Throws ScalingDivergence for d >= 4.
QuadratureResult i_greater(double xi, double dim, const PrecisionBudget& budget = {});

/// Closed form of I_>(xi, 2) in terms of Ei; small-xi expansion below 1e-3.
double i_greater_2d_closed(double xi);

/// Closed form of I_>(xi, 3) in terms of erf; small-xi expansion below 1e-3.
double i_greater_3d_closed(double xi);

/// Phi_d(xi) as a ratio against the same route's xi = 0 value.
///
/// automatic: closed forms for d in {1, 2, 3}, integrals otherwise.
/// closed: d in {1, 2, 3} only. quadrature: i_less / i_greater.
/// series: small-xi expansion, d in {1, 2, 3}.
ScalingValue phi(const ScalingQuery& q, Method method = Method::automatic);

SeriesExpansion series_expansion(int dim);

/// Small-xi expansion of Phi_d, intended for xi <= 0.3.
double phi_series(double xi, int dim);

/// a(1) = 1 / (4 (sqrt 2 - 1)), the R^2/t correction amplitude in d = 1.
double correction_coefficient_a1();

namespace detail {
// Nested-quadrature route of I_< for any d in (0, 2), including d == 1.
QuadratureResult i_less_nested(double xi, double dim, const PrecisionBudget& budget);
// i_less_1d_closed with the quadrature error attached.
QuadratureResult i_less_1d_closed_result(double xi, const PrecisionBudget& budget);
// int_{-1}^{1} (1 - v^2)^{-d/2} dv = sqrt(pi) Gamma(1-d/2) / Gamma(3/2-d/2).
QuadratureResult symmetric_beta(double dim, const PrecisionBudget& budget);
}  // namespace detail

}  // namespace overlap::analytic
