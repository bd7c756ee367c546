// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace overlap {

// Argument outside the mathematical domain of a function (e.g. Ei at 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Adaptive quadrature exhausted its subdivision budget.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The integrand returned NaN or an infinity.
class IntegrandFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for any scaling-function request at d >= 4, where I(0,d) diverges.
class ScalingDivergence : public std::domain_error {
 public:
  explicit ScalingDivergence(double dim)
      : std::domain_error("no scaling function exists for d >= 4 (requested d = " +
                          std::to_string(dim) + "): I(0,d) diverges"),
        dim_(dim) {}

  double dim() const noexcept { return dim_; }

 private:
  double dim_;
};

}  // namespace overlap
