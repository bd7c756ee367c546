// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <tuple>

#include "overlap/analytic.hpp"

namespace overlap::analytic {

namespace {

// Rounding allowance reported for the pure closed forms (d = 2, 3).
constexpr double kClosedFormRoundoff = 1e-13;

enum class Route { closed_1d, less, greater };

struct CacheKey {
  Route route;
  double dim;
  double abs_tol;
  double rel_tol;
  int max_subdivisions;

  auto operator<=>(const CacheKey&) const = default;
};

// I(0, d) per route and budget. Concurrent readers share the lock; a miss
// computes outside the lock, so two threads may both compute the same
// (deterministic) value and the second insert is a no-op.
class DenominatorCache {
 public:
  template <typename Compute>
  QuadratureResult get(const CacheKey& key, Compute&& compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = values_.find(key); it != values_.end()) return it->second;
    }
    QuadratureResult value = compute();
    std::unique_lock lock(mutex_);
    return values_.try_emplace(key, value).first->second;
  }

 private:
  std::shared_mutex mutex_;
  std::map<CacheKey, QuadratureResult> values_;
};

DenominatorCache& cache() {
  static DenominatorCache instance;
  return instance;
}

CacheKey key_for(Route route, double dim, const PrecisionBudget& b) {
  return {route, dim, b.abs_tol, b.rel_tol, b.max_subdivisions};
}

bool is_integer_dim(double dim) { return dim == 1.0 || dim == 2.0 || dim == 3.0; }

ScalingValue ratio(const QuadratureResult& num, const QuadratureResult& den) {
  ScalingValue v;
  v.numerator = num.value;
  v.denominator = den.value;
  v.phi = num.value / den.value;
  v.error_estimate = (num.error_estimate + std::abs(v.phi) * den.error_estimate) / den.value;
  return v;
}

ScalingValue closed(const ScalingQuery& q) {
  const int d = static_cast<int>(q.dim);
  if (d == 1) {
    const QuadratureResult den = cache().get(key_for(Route::closed_1d, 1.0, q.budget), [&] {
      return detail::i_less_1d_closed_result(0.0, q.budget);
    });
    const QuadratureResult num =
        q.xi == 0.0 ? den : detail::i_less_1d_closed_result(q.xi, q.budget);
    return ratio(num, den);
  }
  double (*form)(double) = d == 2 ? &i_greater_2d_closed : &i_greater_3d_closed;
  const QuadratureResult den{form(0.0), kClosedFormRoundoff, 0};
  const QuadratureResult num = q.xi == 0.0 ? den : QuadratureResult{form(q.xi), kClosedFormRoundoff, 0};
  return ratio(num, den);
}

ScalingValue quadrature(const ScalingQuery& q) {
  if (q.dim < 2.0) {
    const QuadratureResult den = cache().get(key_for(Route::less, q.dim, q.budget),
                                             [&] { return i_less(0.0, q.dim, q.budget); });
    const QuadratureResult num = q.xi == 0.0 ? den : i_less(q.xi, q.dim, q.budget);
    return ratio(num, den);
  }
  const QuadratureResult den = cache().get(key_for(Route::greater, q.dim, q.budget),
                                           [&] { return i_greater(0.0, q.dim, q.budget); });
  const QuadratureResult num = q.xi == 0.0 ? den : i_greater(q.xi, q.dim, q.budget);
  return ratio(num, den);
}

ScalingValue series(const ScalingQuery& q) {
  if (!is_integer_dim(q.dim))
    throw std::invalid_argument("series route requires d in {1, 2, 3}, got d = " +
                                std::to_string(q.dim));
  const int d = static_cast<int>(q.dim);
  ScalingValue v;
  v.phi = phi_series(q.xi, d);
  v.numerator = v.phi;
  v.denominator = 1.0;
  // Order of magnitude of the first omitted term.
  v.error_estimate = std::pow(q.xi, d == 1 ? 3.0 : 4.0);
  return v;
}

}  // namespace

void ScalingQuery::validate() const {
  if (!std::isfinite(xi) || xi < 0.0)
    throw std::invalid_argument("scaling variable xi must be finite and >= 0, got " +
                                std::to_string(xi));
  if (!std::isfinite(dim) || dim <= 0.0)
    throw std::invalid_argument("dimension must be finite and > 0, got " + std::to_string(dim));
  if (dim >= 4.0) throw ScalingDivergence(dim);
  budget.validate();
}

ScalingValue phi(const ScalingQuery& q, Method method) {
  q.validate();
  switch (method) {
    case Method::series:
      return series(q);
    case Method::closed:
      if (!is_integer_dim(q.dim))
        throw std::invalid_argument("closed forms exist for d in {1, 2, 3} only, got d = " +
                                    std::to_string(q.dim));
      return closed(q);
    case Method::quadrature:
      return quadrature(q);
    case Method::automatic:
      break;
  }
  return is_integer_dim(q.dim) ? closed(q) : quadrature(q);
}

}  // namespace overlap::analytic
