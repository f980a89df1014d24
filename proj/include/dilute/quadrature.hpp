// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dilute/errors.hpp"

namespace dilute {

inline constexpr double kQuadratureRelTol = 1e-10;

// Adaptive Gauss-Kronrod on [a,b]; throws if the error estimate misses the
// requested tolerance relative to the L1 norm of the integrand and abs_tol.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = kQuadratureRelTol,
                 unsigned max_depth = 20, double abs_tol = 0.0) {
  if (!(b > a)) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, max_depth, rel_tol, &error, &l1);
  if (!std::isfinite(value))
    throw AccuracyError("quadrature produced a non-finite value");
  if (error > 10.0 * rel_tol * l1 && error > abs_tol && error > 1e-300)
    throw AccuracyError("quadrature did not converge: error " + std::to_string(error) +
                        " vs L1 " + std::to_string(l1));
  return value;
}

// Piecewise integration over sorted breakpoints (kinks or jumps of f).
template <class F>
double integrate_pieces(F&& f, const std::vector<double>& breaks,
                        double rel_tol = kQuadratureRelTol, double abs_tol = 0.0) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    total += integrate(f, breaks[i], breaks[i + 1], rel_tol, 20, abs_tol);
  return total;
}

}  // namespace dilute
