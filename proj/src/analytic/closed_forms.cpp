// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "overlap/analytic.hpp"

namespace overlap::analytic {

namespace nm = overlap::numerics;
using std::numbers::egamma;
using std::numbers::ln2;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

// Below this xi the Ei/erf differences are replaced by their expansions.
constexpr double kSmallXi = 1e-3;

void check_xi(double xi) {
  if (!std::isfinite(xi) || xi < 0.0)
    throw std::invalid_argument("scaling variable xi must be finite and >= 0, got " +
                                std::to_string(xi));
}

// erf(a) - erf(b) for 0 <= a <= b, switching to erfc where erf saturates.
double erf_difference(double a, double b) {
  if (a > 1.0) return nm::erfc(b) - nm::erfc(a);
  return nm::erf(a) - nm::erf(b);
}

}  // namespace

namespace detail {

QuadratureResult i_less_1d_closed_result(double xi, const PrecisionBudget& budget) {
  check_xi(xi);
  budget.validate();
  // 2 int_0^1 u^{-1/2} e^{-xi^2/u} arcsin(u/(2-u)) du, with u = s^2.
  const double c = xi * xi;
  auto head = [=](double s) {
    const double u = s * s;
    return 4.0 * std::exp(-c / u) * std::asin(u / (2.0 - u));
  };
  QuadratureResult r = nm::integrate_adaptive(head, 0.0, 1.0, budget);
  r.value += 2.0 * pi * (sqrt2 * std::exp(-0.5 * c) - std::exp(-c));
  if (xi > 0.0)
    r.value += 2.0 * pi * std::sqrt(pi) * xi * erf_difference(xi / sqrt2, xi);
  return r;
}

}  // namespace detail

double i_less_1d_closed(double xi, const PrecisionBudget& budget) {
  return detail::i_less_1d_closed_result(xi, budget).value;
}

double i_greater_2d_closed(double xi) {
  check_xi(xi);
  if (xi < kSmallXi) {
    if (xi == 0.0) return 2.0 * ln2;
    const double x2 = xi * xi;
    return 2.0 * ln2 + x2 * (4.0 * std::log(xi) + 2.0 * egamma + 4.0 * ln2 - 4.0);
  }
  const double x2 = xi * xi;
  return 2.0 * (std::exp(-2.0 * x2) - std::exp(-x2)) +
         2.0 * (1.0 + 2.0 * x2) * nm::expint_ei(-2.0 * x2) -
         2.0 * (x2 + 1.0) * nm::expint_ei(-x2);
}

double i_greater_3d_closed(double xi) {
  check_xi(xi);
  const double s3p = std::sqrt(3.0 * pi);
  if (xi < kSmallXi)
    return 8.0 - 4.0 * sqrt2 - 2.0 * s3p * xi + (8.0 - 2.0 * sqrt2) * xi * xi;

  const double x2 = xi * xi;
  const double exps = 4.0 * std::exp(-3.0 * x2) - 2.0 * sqrt2 * std::exp(-1.5 * x2);
  const double a = std::sqrt(3.0) * xi;
  const double b = std::sqrt(1.5) * xi;
  const double inv = 2.0 / (3.0 * xi);
  if (xi <= 1.0) {
    return exps - 2.0 * s3p * xi + s3p * (4.0 * xi + inv) * nm::erf(a) -
           s3p * (2.0 * xi + inv) * nm::erf(b);
  }
  // Same expression with erf = 1 - erfc; the O(xi) terms cancel exactly.
  return exps - s3p * (4.0 * xi + inv) * nm::erfc(a) + s3p * (2.0 * xi + inv) * nm::erfc(b);
}

SeriesExpansion series_expansion(int dim) {
  switch (dim) {
    case 1:
      return {1, {{0.0, false, 1.0}, {2.0, false, -1.0 / (2.0 * (sqrt2 - 1.0))}}};
    case 2:
      return {2,
              {{0.0, false, 1.0},
               {2.0, true, 2.0 / ln2},
               {2.0, false, (2.0 * ln2 + egamma - 2.0) / ln2},
               {4.0, false, -1.5}}};
    case 3:
      return {3,
              {{0.0, false, 1.0},
               {1.0, false, -std::sqrt(3.0 * pi) / (2.0 * sqrt2 * (sqrt2 - 1.0))},
               {2.0, false, (3.0 + sqrt2) / 2.0}}};
    default:
      throw std::invalid_argument("series expansions exist for d in {1, 2, 3} only, got d = " +
                                  std::to_string(dim));
  }
}

double SeriesExpansion::evaluate(double xi) const {
  check_xi(xi);
  double total = 0.0;
  for (const SeriesTerm& term : terms) {
    if (term.power == 0.0) {
      total += term.coefficient;
      continue;
    }
    if (xi == 0.0) continue;  // xi^p and xi^p ln(xi) both vanish
    double v = term.coefficient * std::pow(xi, term.power);
    if (term.log_factor) v *= std::log(xi);
    total += v;
  }
  return total;
}

double phi_series(double xi, int dim) { return series_expansion(dim).evaluate(xi); }

double correction_coefficient_a1() { return 1.0 / (4.0 * (sqrt2 - 1.0)); }

}  // namespace overlap::analytic
