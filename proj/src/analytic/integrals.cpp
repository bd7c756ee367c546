// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "overlap/analytic.hpp"

namespace overlap::analytic {

namespace nm = overlap::numerics;

namespace {

void check_xi(double xi) {
  if (!std::isfinite(xi) || xi < 0.0)
    throw std::invalid_argument("scaling variable xi must be finite and >= 0, got " +
                                std::to_string(xi));
}

PrecisionBudget scaled(const PrecisionBudget& b, double factor) {
  PrecisionBudget out = b;
  out.abs_tol *= factor;
  out.rel_tol *= factor;
  return out;
}

QuadratureResult sum(const QuadratureResult& a, const QuadratureResult& b) {
  return {a.value + b.value, a.error_estimate + b.error_estimate, a.evaluations + b.evaluations};
}

// int_0^b (1 - v^2)^{-d/2} dv with 1 - v = t^m, m = 2/(2-d); the Jacobian
// cancels the (1-v)^{-d/2} factor, leaving m (1+v)^{-d/2} on [t_b, 1].
QuadratureResult inner_v_integral(double upper, double dim, const PrecisionBudget& budget) {
  const double m = 2.0 / (2.0 - dim);
  const double t_lo = std::pow(1.0 - upper, 1.0 / m);
  if (t_lo >= 1.0) return {0.0, 0.0, 0};
  auto f = [=](double t) {
    const double v = 1.0 - std::pow(t, m);
    return m * std::pow(1.0 + v, -0.5 * dim);
  };
  return nm::integrate_adaptive(f, t_lo, 1.0, budget);
}

// beta(d) * int_1^2 u^{-d/2} (1-u/2)^{1-d} exp(-d xi^2/u) du with
// 1 - u/2 = y^k, k = 1/(2-d), which absorbs the (1-u/2)^{1-d} factor.
QuadratureResult outer_tail(double xi, double dim, const PrecisionBudget& budget) {
  const double k = 1.0 / (2.0 - dim);
  const double c = dim * xi * xi;
  auto f = [=](double y) {
    const double u = 2.0 * (1.0 - std::pow(y, k));
    return 2.0 * k * std::pow(u, -0.5 * dim) * std::exp(-c / u);
  };
  return nm::integrate_adaptive(f, 0.0, std::pow(0.5, 2.0 - dim), budget);
}

void check_less_dim(double dim) {
  if (!(dim > 0.0 && dim < 2.0))
    throw std::invalid_argument("i_less requires 0 < d < 2, got d = " + std::to_string(dim));
}

}  // namespace

namespace detail {

QuadratureResult symmetric_beta(double dim, const PrecisionBudget& budget) {
  check_less_dim(dim);
  if (dim == 1.0) return {std::numbers::pi, 0.0, 0};
  QuadratureResult half = inner_v_integral(1.0, dim, scaled(budget, 0.5));
  return {2.0 * half.value, 2.0 * half.error_estimate, half.evaluations};
}

QuadratureResult i_less_nested(double xi, double dim, const PrecisionBudget& budget) {
  check_xi(xi);
  check_less_dim(dim);
  budget.validate();

  // u = s^{mA} removes u^{-d/2}: u^{-d/2} du = mA ds.
  const double m_a = 2.0 / (2.0 - dim);
  const double c = dim * xi * xi;
  const PrecisionBudget inner_budget = scaled(budget, 0.01);
  double inner_err = 0.0;
  long inner_evals = 0;
  auto head = [&](double s) {
    const double u = std::pow(s, m_a);
    const double weight = std::exp(-c / u);
    if (weight == 0.0) return 0.0;
    const QuadratureResult v = inner_v_integral(u / (2.0 - u), dim, inner_budget);
    inner_err = std::max(inner_err, v.error_estimate);
    inner_evals += v.evaluations;
    return 2.0 * m_a * std::pow(1.0 - 0.5 * u, 1.0 - dim) * weight * v.value;
  };
  QuadratureResult a = nm::integrate_adaptive(head, 0.0, 1.0, scaled(budget, 0.4));
  // (1-u/2)^{1-d} <= 2 on [0, 1], so each unit of inner error moves the
  // outer integral by at most 4 mA.
  a.error_estimate += 4.0 * m_a * inner_err;
  a.evaluations += inner_evals;

  const QuadratureResult beta = symmetric_beta(dim, scaled(budget, 0.01));
  const QuadratureResult tail = outer_tail(xi, dim, scaled(budget, 0.4));
  const QuadratureResult b{beta.value * tail.value,
                           beta.value * tail.error_estimate + beta.error_estimate * tail.value,
                           beta.evaluations + tail.evaluations};
  return sum(a, b);
}

}  // namespace detail

QuadratureResult i_less(double xi, double dim, const PrecisionBudget& budget) {
  check_xi(xi);
  check_less_dim(dim);
  budget.validate();
  if (dim != 1.0) return detail::i_less_nested(xi, dim, budget);

  // d = 1: inner integral is arcsin(u/(2-u)), u = s^2, and beta(1) = pi.
  const double c = xi * xi;
  auto head = [=](double s) {
    const double u = s * s;
    return 4.0 * std::exp(-c / u) * std::asin(u / (2.0 - u));
  };
  const QuadratureResult a = nm::integrate_adaptive(head, 0.0, 1.0, scaled(budget, 0.5));
  const QuadratureResult tail = outer_tail(xi, 1.0, scaled(budget, 0.5 / std::numbers::pi));
  return sum(a, {std::numbers::pi * tail.value, std::numbers::pi * tail.error_estimate,
                 tail.evaluations});
}

QuadratureResult i_greater(double xi, double dim, const PrecisionBudget& budget) {
  check_xi(xi);
  if (std::isfinite(dim) && dim >= 4.0) throw ScalingDivergence(dim);
  if (!(dim >= 2.0 && dim < 4.0))
    throw std::invalid_argument("i_greater requires 2 <= d < 4, got d = " + std::to_string(dim));
  budget.validate();

  const double c = dim * xi * xi;
  // int_0^1 u^{1-d/2} g(u) du = (1/p) int_0^1 g(s^{1/p}) ds, p = 2 - d/2.
  const double p = 2.0 - 0.5 * dim;
  auto head = [=](double s) { return std::exp(-c / std::pow(s, 1.0 / p)) / p; };
  auto tail = [=](double u) { return (2.0 - u) * std::pow(u, -0.5 * dim) * std::exp(-c / u); };
  const PrecisionBudget half = scaled(budget, 0.5);
  return sum(nm::integrate_adaptive(head, 0.0, 1.0, half),
             nm::integrate_adaptive(tail, 1.0, 2.0, half));
}

}  // namespace overlap::analytic
