// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "overlap/numerics.hpp"

namespace overlap::numerics {

void PrecisionBudget::validate() const {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("PrecisionBudget: abs_tol must be > 0");
  if (!(rel_tol >= 0.0)) throw std::invalid_argument("PrecisionBudget: rel_tol must be >= 0");
  if (max_subdivisions < 1)
    throw std::invalid_argument("PrecisionBudget: max_subdivisions must be >= 1");
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kUnderflow = std::numeric_limits<double>::min();

// Kronrod abscissae on [-1, 1] (non-negative half); odd indices are the
// 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool roundoff_limited;  // error is the 50 eps * |f| floor
};

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

class Evaluator {
 public:
  explicit Evaluator(const std::function<double(double)>& f) : f_(f) {}

  double operator()(double x) {
    ++count_;
    const double y = f_(x);
    if (!std::isfinite(y))
      throw IntegrandFailure("integrand returned a non-finite value at x = " + std::to_string(x));
    return y;
  }

  long count() const { return count_; }

 private:
  const std::function<double(double)>& f_;
  long count_ = 0;
};

// One 15-point Kronrod panel with the QUADPACK error heuristic.
Panel kronrod15(Evaluator& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  const double fc = f(center);
  double result_gauss = fc * kWg[3];
  double result_kronrod = fc * kWgk[7];
  double result_abs = std::abs(result_kronrod);
  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};

  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    // On very narrow panels the outer nodes can round onto an endpoint.
    const double x1 = std::max(center - dx, std::nextafter(a, b));
    const double x2 = std::min(center + dx, std::nextafter(b, a));
    const double f1 = f(x1);
    const double f2 = f(x2);
    fv1[j] = f1;
    fv2[j] = f2;
    result_kronrod += kWgk[j] * (f1 + f2);
    result_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
  }

  const double mean = 0.5 * result_kronrod;
  double result_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    result_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

  const double value = result_kronrod * half;
  result_abs *= abs_half;
  result_asc *= abs_half;
  double err = std::abs((result_kronrod - result_gauss) * half);
  if (result_asc != 0.0 && err != 0.0)
    err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
  bool limited = false;
  if (result_abs > kUnderflow / (50.0 * kEps) && 50.0 * kEps * result_abs >= err) {
    err = 50.0 * kEps * result_abs;
    limited = true;
  }
  return Panel{a, b, value, err, limited};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const PrecisionBudget& budget) {
  budget.validate();
  if (!(a < b)) throw std::invalid_argument("integrate_adaptive: requires a < b");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("integrate_adaptive: bounds must be finite");

  Evaluator eval(f);
  std::priority_queue<Panel, std::vector<Panel>, ByError> panels;
  panels.push(kronrod15(eval, a, b));
  double value = panels.top().value;
  double error = panels.top().error;

  auto converged = [&] { return error <= std::max(budget.abs_tol, budget.rel_tol * std::abs(value)); };

  while (!converged()) {
    if (static_cast<int>(panels.size()) >= budget.max_subdivisions)
      throw NonConvergence("integrate_adaptive: no convergence within " +
                           std::to_string(budget.max_subdivisions) +
                           " subdivisions (error estimate " + std::to_string(error) + ")");
    const Panel worst = panels.top();
    // Splitting cannot beat rounding; accept and report the floor.
    if (worst.roundoff_limited) break;
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b) ||
        (worst.b - worst.a) < 16.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b)))
      throw NonConvergence("integrate_adaptive: panel [" + std::to_string(worst.a) + ", " +
                           std::to_string(worst.b) + "] cannot be refined further");
    panels.pop();
    const Panel left = kronrod15(eval, worst.a, mid);
    const Panel right = kronrod15(eval, mid, worst.b);
    panels.push(left);
    panels.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }

  // Final totals are summed from the panel list, not the running values.
  QuadratureResult out;
  out.evaluations = eval.count();
  while (!panels.empty()) {
    out.value += panels.top().value;
    out.error_estimate += panels.top().error;
    panels.pop();
  }
  return out;
}

}  // namespace overlap::numerics
