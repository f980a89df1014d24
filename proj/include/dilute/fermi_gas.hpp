// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "dilute/errors.hpp"
#include "dilute/fit.hpp"
#include "dilute/lattice_grid.hpp"
#include "dilute/parallel.hpp"
#include "dilute/potential.hpp"
#include "dilute/quadrature.hpp"
#include "dilute/radial_transform.hpp"

namespace dilute {

enum class Spin : int { up = 0, down = 1 };

inline const char* spin_name(Spin s) { return s == Spin::up ? "up" : "down"; }

// Completely filled shells |n|^2 <= shell_norm2 of the lattice (2pi/L) Z^3.
struct FermiBall {
  Spin spin = Spin::up;
  double L = 1.0;
  long shell_norm2 = 0;
  std::vector<IntVec3> momenta;

  std::size_t N() const { return momenta.size(); }
  double volume() const { return L * L * L; }
  double density() const { return double(N()) / volume(); }
  double k_F() const { return kTwoPi / L * std::sqrt(double(shell_norm2)); }
  double mu() const { return k_F() * k_F(); }
  bool contains(const IntVec3& n) const { return n.norm2() <= shell_norm2; }
  // Occupation multiplier of the one-particle density matrix (0 or 1).
  double omega_hat(const IntVec3& n) const { return contains(n) ? 1.0 : 0.0; }
};

inline FermiBall build_fermi_ball(double L, long N, Spin spin) {
  if (!(L > 0.0)) throw ParameterError("build_fermi_ball: L must be positive");
  const auto sizes = closed_shell_sizes(L, std::max<long>(N, 1) * 2 + 64);
  const auto it = std::find(sizes.begin(), sizes.end(), N);
  if (it == sizes.end()) {
    auto hi = std::lower_bound(sizes.begin(), sizes.end(), N);
    std::string msg = "build_fermi_ball: N = " + std::to_string(N) + " is not a closed-shell size";
    if (hi != sizes.begin()) msg += "; nearest below " + std::to_string(*(hi - 1));
    if (hi != sizes.end()) msg += "; nearest above " + std::to_string(*hi);
    throw AdmissibilityError(msg);
  }
  // Smallest squared radius whose cumulative count reaches N.
  long bound = 4;
  long m = -1;
  while (m < 0) {
    const auto r3 = shell_multiplicities(bound);
    long total = 0;
    for (long j = 0; j <= bound && m < 0; ++j) {
      total += r3[std::size_t(j)];
      if (total == N) m = j;
    }
    bound *= 2;
  }
  const auto lat = enumerate_momenta_norm2(L, m);
  return FermiBall{spin, L, m, lat.points()};
}

// L^-3 sum_{k in B} |k|^2.
inline double kinetic_energy_density(const FermiBall& ball) {
  long s = 0;
  for (const auto& n : ball.momenta) s += n.norm2();
  const double u = kTwoPi / ball.L;
  return u * u * double(s) / ball.volume();
}

inline double kinetic_energy_density_limit(double rho) {
  return 0.6 * std::pow(6.0 * std::numbers::pi * std::numbers::pi, 2.0 / 3.0) * std::pow(rho, 5.0 / 3.0);
}

struct HFBreakdown {
  double kinetic = 0.0;
  double direct = 0.0;
  double exchange = 0.0;
  double total = 0.0;
};

// Histogram of |n - n'|^2 over ordered pairs of the ball (exact integers).
inline std::vector<long long> pair_difference_histogram(const FermiBall& ball) {
  const long mmax = 4 * ball.shell_norm2;
  const auto& pts = ball.momenta;
  const std::size_t chunks = chunk_count(pts.size());
  std::vector<std::vector<long long>> partial(chunks, std::vector<long long>(std::size_t(mmax + 1), 0));
  parallel_chunks(pts.size(), [&](std::size_t c, std::size_t b, std::size_t e) {
    auto& h = partial[c];
    for (std::size_t i = b; i < e; ++i)
      for (const auto& q : pts) ++h[std::size_t((pts[i] - q).norm2())];
  });
  std::vector<long long> hist(std::size_t(mmax + 1), 0);
  for (const auto& h : partial)
    for (std::size_t m = 0; m < h.size(); ++m) hist[m] += h[m];
  return hist;
}

inline HFBreakdown hf_energy(const FermiBall& up, const FermiBall& down, const PeriodizedPotential& v) {
  if (std::abs(up.L - down.L) > 1e-12 * up.L || std::abs(up.L - v.box_length()) > 1e-12 * up.L)
    throw ParameterError("hf_energy: balls and potential must share L");
  HFBreakdown out;
  const double vol = up.volume();
  out.kinetic = (kinetic_energy_density(up) + kinetic_energy_density(down)) * vol;
  const double n = double(up.N() + down.N());
  out.direct = 0.5 * v.coefficient_norm2(0) * n * n / vol;
  double ex = 0.0;
  for (const FermiBall* ball : {&up, &down}) {
    const auto hist = pair_difference_histogram(*ball);
    for (std::size_t m = 0; m < hist.size(); ++m)
      if (hist[m]) ex += double(hist[m]) * v.coefficient_norm2(long(m));
  }
  out.exchange = -0.5 * ex / vol;
  out.total = out.kinetic + out.direct + out.exchange;
  return out;
}

// omega(r) = L^-3 sum_{k in B} cos(k.r).
inline double omega_kernel(const FermiBall& ball, const std::array<double, 3>& r) {
  const double u = kTwoPi / ball.L;
  double s = 0.0;
  for (const auto& n : ball.momenta) s += std::cos(u * (n.x * r[0] + n.y * r[1] + n.z * r[2]));
  return s / ball.volume();
}

// Smooth multipliers around the Fermi surface:
//   v = chi((|k| - (kF - 2 rho^alpha)) / rho^alpha),  u = chi(rho^beta |k|)(1 - chi(|k|/kF)),
//   omega = v^2,  delta = chi(rho^beta |k|),  nu = chi(|k|/kF),  delta_gt = 1 - delta.
class RegularizedKernels {
 public:
  RegularizedKernels(double rho, double alpha, double beta, double epsilon, double k_f)
      : rho_(rho), alpha_(alpha), beta_(beta), epsilon_(epsilon), k_f_(k_f) {
    if (!(rho > 0.0)) throw ConfigError("regularized kernels: rho must be positive");
    if (!(beta > 0.0)) throw ConfigError("regularized kernels: beta must be positive");
    if (!(epsilon >= 0.0)) throw ConfigError("regularized kernels: epsilon must be >= 0");
    if (std::abs(alpha - (1.0 + epsilon) / 3.0) > 1e-12)
      throw ConfigError("regularized kernels: alpha must equal 1/3 + epsilon/3");
    width_ = std::pow(rho, alpha);
    inv_high_ = std::pow(rho, beta);
    if (!(k_f - 2.0 * width_ > 0.0)) throw ConfigError("regularized kernels: need k_F > 2 rho^alpha");
    if (!(1.0 / inv_high_ >= 2.0 * k_f)) throw ConfigError("regularized kernels: need rho^-beta >= 2 k_F");
  }

  double rho() const { return rho_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double epsilon() const { return epsilon_; }
  double k_F() const { return k_f_; }

  double v_hat(double k) const { return chi((k - (k_f_ - 2.0 * width_)) / width_); }
  double u_hat(double k) const { return chi(inv_high_ * k) * (1.0 - chi(k / k_f_)); }
  double omega_hat(double k) const {
    const double v = v_hat(k);
    return v * v;
  }
  double delta_hat(double k) const { return chi(inv_high_ * k); }
  double nu_hat(double k) const { return chi(k / k_f_); }
  double delta_gt_hat(double k) const { return 1.0 - chi(inv_high_ * k); }

 private:
  double rho_, alpha_, beta_, epsilon_, k_f_;
  double width_ = 0.0;
  double inv_high_ = 0.0;
};

inline RegularizedKernels build_regularized_kernels(double rho, double alpha, double beta, double epsilon,
                                                    double k_f) {
  return RegularizedKernels(rho, alpha, beta, epsilon, k_f);
}

inline RegularizedKernels build_regularized_kernels(double rho, double beta, double epsilon) {
  const double k_f = std::cbrt(6.0 * std::numbers::pi * std::numbers::pi * rho);
  return RegularizedKernels(rho, (1.0 + epsilon) / 3.0, beta, epsilon, k_f);
}

struct KernelNormRow {
  double rho = 0.0;
  double k_F = 0.0;
  double u_l2 = 0.0;
  double u_l2_parseval = 0.0;
  double v_l2 = 0.0;
  double omega_l1 = 0.0;
  double u_l1 = 0.0;
  double omega_at_zero = 0.0;
  double dr = 0.0;
  std::size_t points = 0;
};

struct KernelNormReport {
  double beta = 0.0;
  double epsilon = 0.0;
  std::vector<KernelNormRow> rows;
  double u_l2_exponent = 0.0;
  double v_l2_exponent = 0.0;
  double omega_l1_exponent = 0.0;
  double u_l1_exponent = 0.0;
};

// Position-space norms (infinite-volume limit) on a radial grid with spacing
// <= min(rho^beta, rho^(1/3))/8 and extent 200 max(rho^-alpha, 1/kF).
inline KernelNormRow kernel_norms(const RegularizedKernels& ker, std::size_t max_points = std::size_t(1) << 23) {
  KernelNormRow row;
  row.rho = ker.rho();
  row.k_F = ker.k_F();
  const double dr_target = std::min(std::pow(ker.rho(), ker.beta()), std::cbrt(ker.rho())) / 8.0;
  const double r_max = 200.0 * std::max(std::pow(ker.rho(), -ker.alpha()), 1.0 / ker.k_F());
  std::size_t n = 1024;
  while (r_max / double(n) > dr_target) {
    n *= 2;
    if (n > max_points) throw AccuracyError("kernel_norms: grid too coarse for the oscillatory kernels");
  }
  RadialGrid grid(r_max / double(n), n);
  if (grid.k(grid.size() - 1) < 2.0 / std::pow(ker.rho(), ker.beta()))
    throw AccuracyError("kernel_norms: momentum grid does not cover the u cutoff");
  const auto uh = grid.sample_momentum([&](double k) { return ker.u_hat(k); });
  const auto vh = grid.sample_momentum([&](double k) { return ker.v_hat(k); });
  const auto wh = grid.sample_momentum([&](double k) { return ker.omega_hat(k); });
  const auto u = grid.to_position(uh);
  const auto v = grid.to_position(vh);
  const auto w = grid.to_position(wh);
  row.u_l2 = grid.l2_norm(u);
  row.u_l2_parseval = grid.l2_norm_momentum(uh);
  row.v_l2 = grid.l2_norm(v);
  row.omega_l1 = grid.l1_norm(w);
  row.u_l1 = grid.l1_norm(u);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  row.omega_at_zero = integrate([&](double k) { return k * k * ker.omega_hat(k); }, 0.0, ker.k_F(), 1e-12) /
                      (2.0 * pi2);
  row.dr = grid.dr();
  row.points = grid.size();
  return row;
}

inline KernelNormReport kernel_norm_diagnostics(const std::vector<double>& rhos, double beta, double epsilon) {
  if (rhos.size() < 4) throw ParameterError("kernel_norm_diagnostics: need at least 4 densities");
  const auto [lo, hi] = std::minmax_element(rhos.begin(), rhos.end());
  if (*hi < 10.0 * *lo * (1.0 - 1e-12)) throw ParameterError("kernel_norm_diagnostics: sweep must span a decade");
  KernelNormReport rep;
  rep.beta = beta;
  rep.epsilon = epsilon;
  for (double rho : rhos) rep.rows.push_back(kernel_norms(build_regularized_kernels(rho, beta, epsilon)));
  std::vector<double> x, a, b, c, d;
  for (const auto& r : rep.rows) {
    x.push_back(r.rho);
    a.push_back(r.u_l2);
    b.push_back(r.v_l2);
    c.push_back(r.omega_l1);
    d.push_back(r.u_l1);
  }
  rep.u_l2_exponent = fit_exponent(x, a);
  rep.v_l2_exponent = fit_exponent(x, b);
  rep.omega_l1_exponent = fit_exponent(x, c);
  rep.u_l1_exponent = fit_exponent(x, d);
  return rep;
}

// |{k : ||k|^2 - mu| <= w}| by enumeration.
inline long shell_count(double L, double mu, double w) {
  if (!(w >= 0.0)) throw ParameterError("shell_count: w must be >= 0");
  if (!(L > 0.0)) throw ParameterError("shell_count: L must be positive");
  const double c = (kTwoPi / L) * (kTwoPi / L);
  const double top = mu + w;
  if (top < 0.0) return 0;
  const long mmax = static_cast<long>(std::floor(top / c * (1.0 + 1e-12) + 1e-12));
  const auto r3 = shell_multiplicities(mmax);
  const double slack = 1e-12 * (std::abs(mu) + w) + 1e-300;
  long count = 0;
  for (long m = 0; m <= mmax; ++m)
    if (std::abs(c * double(m) - mu) <= w + slack) count += r3[std::size_t(m)];
  return count;
}

struct EnergyFormula {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double xi1 = 2.0 / 9.0;
  double xi2 = 1.0 / 9.0;
};

// (3/5)(6pi^2)^(2/3)(rho_up^(5/3) + rho_down^(5/3)) + 8 pi a rho_up rho_down
// with band [-C rho^(2+xi2), +C rho^(2+xi1)], rho = rho_up + rho_down.
inline EnergyFormula eval_energy_formula(double rho_up, double rho_down, double a, double c = 1.0) {
  if (!(rho_up >= 0.0) || !(rho_down >= 0.0)) throw ParameterError("eval_energy_formula: densities must be >= 0");
  EnergyFormula out;
  out.value = kinetic_energy_density_limit(rho_up) + kinetic_energy_density_limit(rho_down) +
              8.0 * std::numbers::pi * a * rho_up * rho_down;
  const double rho = rho_up + rho_down;
  out.lower = out.value - c * std::pow(rho, 2.0 + out.xi2);
  out.upper = out.value + c * std::pow(rho, 2.0 + out.xi1);
  return out;
}

}  // namespace dilute
