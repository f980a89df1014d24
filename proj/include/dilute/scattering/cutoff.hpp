// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dilute/errors.hpp"
#include "dilute/lattice_grid.hpp"
#include "dilute/radial_transform.hpp"
#include "dilute/scattering/neumann.hpp"

namespace dilute {

struct CutoffParams {
  double gamma = 1.0 / 3.0;
  double eta = 1.0 / 6.0;
  double delta = 2.0;
  double beta = 0.1;
};

// Three-window split of phihat chi(rho^beta |k|):
//   lower  = chi(|k| / rho^eta)
//   middle = chi(|k| / rho^(eta/delta)) - chi(|k| / rho^eta)
//   upper  = chi(rho^beta |k|) - chi(|k| / rho^(eta/delta))
struct CutoffDecomposition {
  CutoffParams params;
  double rho = 0.0;
  double dr = 0.0;
  std::size_t points = 0;
  std::vector<double> k;
  std::vector<double> phi_hat;
  std::array<std::vector<double>, 3> components;  // Fourier tables on k
  std::array<double, 3> l1_norms{};

  std::array<double, 3> windows(double kk) const { return window_values(params, rho, kk); }

  static std::array<double, 3> window_values(const CutoffParams& p, double rho, double kk) {
    const double lo = chi(kk / std::pow(rho, p.eta));
    const double mid = chi(kk / std::pow(rho, p.eta / p.delta));
    const double hi = chi(std::pow(rho, p.beta) * kk);
    return {lo, mid - lo, hi - mid};
  }
};

inline void check_cutoff_params(const CutoffParams& p) {
  if (!(p.eta >= 0.0) || !(p.eta < p.gamma))
    throw ParameterError("cutoff_decomposition: require 0 <= eta < gamma");
  if (!(p.delta > 1.0)) throw ParameterError("cutoff_decomposition: require delta > 1");
  if (!(p.beta >= 0.0)) throw ParameterError("cutoff_decomposition: require beta >= 0");
}

// L1 norms are evaluated in the infinite-volume limit on a radial DST grid
// over [0, 8R] with spacing <= min(rho^beta, R0)/8.
inline CutoffDecomposition cutoff_decomposition(const NeumannSolution& sol, double support_radius,
                                                double rho, const CutoffParams& params,
                                                std::size_t max_points = std::size_t(1) << 23) {
  check_cutoff_params(params);
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("cutoff_decomposition: require 0 < rho < 1");
  const double r_max = 8.0 * sol.R;
  const double dr_target = std::min(std::pow(rho, params.beta), support_radius) / 8.0;
  std::size_t n = 1024;
  while (r_max / double(n) > dr_target) {
    n *= 2;
    if (n > max_points) throw AccuracyError("cutoff_decomposition: radial grid exceeds the point cap");
  }
  RadialGrid grid(r_max / double(n), n);
  std::vector<double> phi(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) phi[j] = sol.phi(grid.r(j));

  CutoffDecomposition out;
  out.params = params;
  out.rho = rho;
  out.dr = grid.dr();
  out.points = grid.size();
  out.phi_hat = grid.to_momentum(phi);
  out.k.resize(grid.size());
  for (auto& c : out.components) c.resize(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    out.k[m] = grid.k(m);
    const auto w = out.windows(out.k[m]);
    for (int c = 0; c < 3; ++c) out.components[c][m] = w[c] * out.phi_hat[m];
  }
  for (int c = 0; c < 3; ++c) out.l1_norms[c] = grid.l1_norm(grid.to_position(out.components[c]));
  return out;
}

}  // namespace dilute
