// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <numbers>

#include "overlap/numerics.hpp"

namespace overlap::numerics {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Series below, continued fraction above (in |x|).
constexpr double kSwitch = 1.0;
}  // namespace

namespace detail {

// Ei(x) = gamma + ln|x| + sum_{k>=1} x^k / (k k!)
double expint_ei_series(double x) {
  double term = 1.0;  // x^k / k!
  double sum = 0.0;
  for (int k = 1; k < 500; ++k) {
    term *= x / k;
    const double contrib = term / k;
    sum += contrib;
    if (std::abs(contrib) < 0.25 * kEps * std::abs(sum)) break;
  }
  return std::numbers::egamma + std::log(std::abs(x)) + sum;
}

// E1(y) = e^{-y} / (y + 1 - 1/(y + 3 - 4/(y + 5 - ...))), y > 0.
double expint_e1_continued_fraction(double y) {
  constexpr double big = 1e300;
  double b = y + 1.0;
  double c = big;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 0.5 * kEps) break;
  }
  return h * std::exp(-y);
}

}  // namespace detail

double expint_ei(double x) {
  if (!std::isfinite(x)) throw DomainError("expint_ei: argument must be finite");
  if (x == 0.0) throw DomainError("expint_ei: logarithmic singularity at x = 0");
  if (x > 0.0) throw DomainError("expint_ei: positive arguments are not supported");
  const double y = -x;
  if (y <= kSwitch) return detail::expint_ei_series(x);
  return -detail::expint_e1_continued_fraction(y);
}

}  // namespace overlap::numerics
