// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <numbers>

#include "overlap/numerics.hpp"

namespace overlap::numerics {

namespace {
constexpr double kSwitch = 2.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();
}  // namespace

namespace detail {

// erf(x) = 2/sqrt(pi) * x * exp(-x^2) * sum_n (2x^2)^n / (2n+1)!!
// All terms are positive, so there is no cancellation for |x| <= 2.
double erf_series(double x) {
  const double x2 = x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 200; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < 0.25 * kEps * sum) break;
  }
  return 2.0 * std::numbers::inv_sqrtpi * x * std::exp(-x2) * sum;
}

// erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// x > 0, evaluated with the modified Lentz algorithm.
double erfc_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 0.5 * kEps) break;
  }
  return std::exp(-x * x) * std::numbers::inv_sqrtpi / f;
}

}  // namespace detail

double erf(double x) {
  if (std::isnan(x)) return x;
  const double ax = std::abs(x);
  double r = ax <= kSwitch ? detail::erf_series(ax) : 1.0 - detail::erfc_continued_fraction(ax);
  // |erf| < 1 strictly for finite arguments.
  r = std::min(r, std::nextafter(1.0, 0.0));
  return x < 0 ? -r : r;
}

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x > kSwitch) return detail::erfc_continued_fraction(x);
  if (x < -kSwitch) return 2.0 - detail::erfc_continued_fraction(-x);
  return 1.0 - detail::erf_series(x);
}

}  // namespace overlap::numerics
