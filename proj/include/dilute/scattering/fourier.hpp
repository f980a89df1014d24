// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include <fftw3.h>

#include "dilute/errors.hpp"
#include "dilute/lattice_grid.hpp"
#include "dilute/potential.hpp"
#include "dilute/radial_transform.hpp"
#include "dilute/scattering/neumann.hpp"

namespace dilute {

// (Vhat * phi)(p) = L^-3 sum_{q in grid} Vhat(p - q) phi(q) for p in a ball
// grid, by zero-padded 3D FFT (box >= 4 nmax + 1, so no wrap-around).
class LatticeConvolution {
 public:
  LatticeConvolution(const MomentumLattice& grid, const PeriodizedPotential& v)
      : grid_(grid), volume_(v.volume()) {
    if (std::abs(grid.box_length() - v.box_length()) > 1e-12 * v.box_length())
      throw ParameterError("LatticeConvolution: grid and potential box lengths differ");
    const int nmax = grid.max_component();
    n_ = 4 * nmax + 2;
    const std::size_t total = std::size_t(n_) * n_ * n_;
    const std::size_t half = std::size_t(n_) * n_ * (n_ / 2 + 1);
    real_ = fftw_alloc_real(total);
    spec_ = fftw_alloc_complex(half);
    kernel_.resize(half);
    if (!real_ || !spec_) throw ResourceLimitError("LatticeConvolution: FFTW allocation failed");
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      forward_ = fftw_plan_dft_r2c_3d(n_, n_, n_, real_, spec_, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_3d(n_, n_, n_, spec_, real_, FFTW_ESTIMATE);
    }
    std::fill(real_, real_ + total, 0.0);
    const long dmax2 = 4 * grid.max_norm2();
    std::vector<double> by_norm2(std::size_t(dmax2 + 1));
    for (long m = 0; m <= dmax2; ++m) by_norm2[std::size_t(m)] = v.coefficient_norm2(m);
    const int c = 2 * nmax;
    for (int x = -c; x <= c; ++x)
      for (int y = -c; y <= c; ++y)
        for (int z = -c; z <= c; ++z) {
          const long m = long(x) * x + long(y) * y + long(z) * z;
          if (m > dmax2) continue;
          real_[index({x, y, z})] = by_norm2[std::size_t(m)];
        }
    fftw_execute(forward_);
    for (std::size_t i = 0; i < half; ++i) kernel_[i] = {spec_[i][0], spec_[i][1]};
    index_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) index_[i] = index(grid.points()[i]);
  }

  LatticeConvolution(const LatticeConvolution&) = delete;
  LatticeConvolution& operator=(const LatticeConvolution&) = delete;

  ~LatticeConvolution() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(real_);
    fftw_free(spec_);
  }

  const MomentumLattice& grid() const { return grid_; }
  double volume() const { return volume_; }
  int fft_size() const { return n_; }

  std::vector<double> apply(const std::vector<double>& phi) const {
    std::lock_guard<std::mutex> lock(mutex_);
    const std::size_t total = std::size_t(n_) * n_ * n_;
    const std::size_t half = std::size_t(n_) * n_ * (n_ / 2 + 1);
    std::fill(real_, real_ + total, 0.0);
    for (std::size_t i = 0; i < index_.size(); ++i) real_[index_[i]] = phi[i];
    fftw_execute(forward_);
    for (std::size_t i = 0; i < half; ++i) {
      const std::complex<double> z = std::complex<double>(spec_[i][0], spec_[i][1]) * kernel_[i];
      spec_[i][0] = z.real();
      spec_[i][1] = z.imag();
    }
    fftw_execute(backward_);
    const double scale = 1.0 / (double(total) * volume_);
    std::vector<double> out(index_.size());
    for (std::size_t i = 0; i < index_.size(); ++i) out[i] = real_[index_[i]] * scale;
    return out;
  }

 private:
  std::size_t index(const IntVec3& n) const {
    auto wrap = [this](int a) { return std::size_t(((a % n_) + n_) % n_); };
    return (wrap(n.x) * std::size_t(n_) + wrap(n.y)) * std::size_t(n_) + wrap(n.z);
  }

  MomentumLattice grid_;
  double volume_;
  int n_ = 0;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  std::vector<std::complex<double>> kernel_;
  std::vector<std::size_t> index_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
  mutable std::mutex mutex_;
};

struct EnergyValue {
  double value = 0.0;
  std::vector<double> gradient;
};

// e(phi) = L^-3 sum_p (|p|^2 phi^2 - Vhat phi + (1/2)(Vhat * phi) phi) and
// its gradient with respect to each phi(p).
inline EnergyValue energy_functional_e(const std::vector<double>& phi, const PeriodizedPotential& v,
                                       const LatticeConvolution& conv) {
  const auto& grid = conv.grid();
  if (phi.size() != grid.size()) throw ParameterError("energy_functional_e: size mismatch");
  const auto c = conv.apply(phi);
  EnergyValue out;
  out.gradient.resize(phi.size());
  const double inv_vol = 1.0 / conv.volume();
  double e = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double p2 = grid.norm2(i);
    const double vh = v.coefficient(grid.points()[i]);
    e += p2 * phi[i] * phi[i] - vh * phi[i] + 0.5 * c[i] * phi[i];
    out.gradient[i] = inv_vol * (2.0 * p2 * phi[i] - vh + c[i]);
  }
  out.value = e * inv_vol;
  return out;
}

inline EnergyValue energy_functional_e(const std::vector<double>& phi, const PeriodizedPotential& v,
                                       const MomentumLattice& grid) {
  LatticeConvolution conv(grid, v);
  return energy_functional_e(phi, v, conv);
}

struct FourierScatteringSolution {
  MomentumLattice grid;
  std::vector<double> phi;  // aligned with grid.points(); zero at p = 0
  double residual_norm = 0.0;  // max_p |residual| / max_p |Vhat|, p != 0
  double p0_residual = 0.0;    // (Vhat * phi)(0) - Vhat(0)
  double e_value = 0.0;
  int iterations = 0;
};

// Solves 2|p|^2 phi + (Vhat * phi) = Vhat on the grid without p = 0 by
// Jacobi-preconditioned conjugate gradients.
inline FourierScatteringSolution solve_scattering_fourier(const PeriodizedPotential& v,
                                                          const MomentumLattice& grid,
                                                          double rel_tol = 1e-13,
                                                          int max_iterations = 20000) {
  LatticeConvolution conv(grid, v);
  const std::size_t n = grid.size();
  const double inv_vol = 1.0 / v.volume();
  std::vector<double> b(n), diag(n), p2(n);
  std::vector<char> active(n);
  double bmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    active[i] = grid.points()[i].norm2() != 0;
    p2[i] = grid.norm2(i);
    b[i] = active[i] ? v.coefficient(grid.points()[i]) : 0.0;
    diag[i] = 2.0 * p2[i] + v.coefficient_norm2(0) * inv_vol;
    bmax = std::max(bmax, std::abs(b[i]));
  }
  auto op = [&](const std::vector<double>& x) {
    auto y = conv.apply(x);
    for (std::size_t i = 0; i < n; ++i) y[i] = active[i] ? y[i] + 2.0 * p2[i] * x[i] : 0.0;
    return y;
  };
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * c[i];
    return s;
  };
  FourierScatteringSolution out;
  out.grid = grid;
  out.phi.assign(n, 0.0);
  std::vector<double> r = b, z(n), d(n);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm > 0.0) {
    for (std::size_t i = 0; i < n; ++i) z[i] = active[i] ? r[i] / diag[i] : 0.0;
    d = z;
    double rz = dot(r, z);
    int it = 0;
    for (; it < max_iterations; ++it) {
      if (std::sqrt(dot(r, r)) <= rel_tol * bnorm) break;
      const auto ad = op(d);
      const double alpha = rz / dot(d, ad);
      for (std::size_t i = 0; i < n; ++i) {
        out.phi[i] += alpha * d[i];
        r[i] -= alpha * ad[i];
      }
      for (std::size_t i = 0; i < n; ++i) z[i] = active[i] ? r[i] / diag[i] : 0.0;
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
    }
    if (it == max_iterations) throw ConvergenceError("solve_scattering_fourier: CG did not converge");
    out.iterations = it;
  }
  const auto c = conv.apply(out.phi);
  double rmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) {
      out.p0_residual = c[i] - v.coefficient_norm2(0);
      continue;
    }
    rmax = std::max(rmax, std::abs(2.0 * p2[i] * out.phi[i] + c[i] - b[i]));
  }
  out.residual_norm = bmax > 0.0 ? rmax / bmax : 0.0;
  out.e_value = energy_functional_e(out.phi, v, conv).value;
  return out;
}

// Fourier coefficients of the periodised phi_infinity = 1 - f_R (zero outside
// the ball), tabulated by |n|^2 up to pmax.
class PeriodizedPhi {
 public:
  PeriodizedPhi(NeumannSolution sol, double box_length, double pmax)
      : sol_(std::move(sol)), box_length_(box_length), pmax_(pmax) {
    if (!(box_length > 0.0)) throw ParameterError("PeriodizedPhi: box length must be positive");
    if (sol_.R > 0.5 * box_length)
      throw GeometryError("PeriodizedPhi: ball radius must not exceed L/2");
    max_norm2_ = max_norm2_for_cutoff(box_length, pmax);
    table_.resize(std::size_t(max_norm2_ + 1));
    const double u = kTwoPi / box_length;
    for (long m = 0; m <= max_norm2_; ++m) table_[std::size_t(m)] = radial_transform(u * std::sqrt(double(m)));
  }

  const NeumannSolution& solution() const { return sol_; }
  double box_length() const { return box_length_; }
  double volume() const { return box_length_ * box_length_ * box_length_; }
  double ball_radius() const { return sol_.R; }
  double pmax() const { return pmax_; }
  long max_norm2() const { return max_norm2_; }
  double unit() const { return kTwoPi / box_length_; }

  double coefficient_norm2(long m) const {
    if (m <= max_norm2_) return table_[std::size_t(m)];
    return radial_transform(unit() * std::sqrt(double(m)));
  }
  double coefficient(const IntVec3& n) const { return coefficient_norm2(n.norm2()); }

  // phihat_infinity(p) = (4pi/p) int_0^R r sin(pr) phi(r) dr (Simpson on the mesh).
  double radial_transform(double p) const {
    const auto& r = sol_.r;
    const std::size_t M = r.size() - 1;
    const double h = sol_.spacing();
    auto g = [&](std::size_t i) {
      const double phi = 1.0 - sol_.f[i];
      if (p == 0.0) return r[i] * r[i] * phi;
      return r[i] * phi * std::sin(p * r[i]) / p;
    };
    const std::size_t even = M - (M % 2);
    double s = g(0) + g(even);
    for (std::size_t i = 1; i < even; ++i) s += (i % 2 ? 4.0 : 2.0) * g(i);
    s *= h / 3.0;
    if (even != M) s += 0.5 * h * (g(even) + g(M));
    return 4.0 * std::numbers::pi * s;
  }

  double phi_infinity(double r) const { return sol_.phi(r); }

  // phi(x) = L^-3 sum_{|p| <= pmax} cos(p.x) phihat(p).
  double evaluate(const std::array<double, 3>& x) const {
    const double u = unit();
    const int c = static_cast<int>(std::floor(std::sqrt(double(max_norm2_)) + 1e-9));
    double total = 0.0;
    for (int i = -c; i <= c; ++i)
      for (int j = -c; j <= c; ++j)
        for (int k = -c; k <= c; ++k) {
          const long m = long(i) * i + long(j) * j + long(k) * k;
          if (m > max_norm2_) continue;
          total += std::cos(u * (i * x[0] + j * x[1] + k * x[2])) * table_[std::size_t(m)];
        }
    return total / volume();
  }

  // int |phi| over the torus (= 4pi int r^2 phi, the ball fits in the box).
  double l1_norm() const {
    double s = 0.0;
    const auto& r = sol_.r;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      const double a = r[i] * r[i] * std::abs(1.0 - sol_.f[i]);
      const double b = r[i + 1] * r[i + 1] * std::abs(1.0 - sol_.f[i + 1]);
      s += 0.5 * (a + b) * (r[i + 1] - r[i]);
    }
    return 4.0 * std::numbers::pi * s;
  }

 private:
  NeumannSolution sol_;
  double box_length_;
  double pmax_;
  long max_norm2_ = 0;
  std::vector<double> table_;
};

inline PeriodizedPhi periodize_phi(const NeumannSolution& sol, double box_length, double pmax) {
  return PeriodizedPhi(sol, box_length, pmax);
}

// int V (1 - phi) = Vhat(0) - L^-3 sum_p Vhat(p) phihat(p) over the common lattice.
inline double effective_interaction(const PeriodizedPotential& v, const PeriodizedPhi& phi) {
  if (std::abs(v.box_length() - phi.box_length()) > 1e-12 * v.box_length())
    throw ParameterError("effective_interaction: box lengths differ");
  const long mmax = std::min(v.max_norm2(), phi.max_norm2());
  const auto r3 = shell_multiplicities(mmax);
  double s = 0.0;
  for (long m = 0; m <= mmax; ++m)
    if (r3[std::size_t(m)]) s += double(r3[std::size_t(m)]) * v.coefficient_norm2(m) * phi.coefficient_norm2(m);
  return v.coefficient_norm2(0) - s / v.volume();
}

inline double effective_interaction(const PeriodizedPotential& v, const FourierScatteringSolution& sol) {
  double s = 0.0;
  for (std::size_t i = 0; i < sol.grid.size(); ++i) s += v.coefficient(sol.grid.points()[i]) * sol.phi[i];
  return v.coefficient_norm2(0) - s / v.volume();
}

}  // namespace dilute
