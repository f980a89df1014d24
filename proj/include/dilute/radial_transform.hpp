// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <vector>

#include <fftw3.h>

#include "dilute/errors.hpp"

namespace dilute {

// The FFTW planner is not reentrant.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Radial Fourier pair on r_j = j dr, k_m = m pi/(n dr), j,m = 1..n-1, via DST-I:
//   k fhat(k) = 4pi int r f(r) sin(kr) dr
//   r f(r)    = (1/2pi^2) int k fhat(k) sin(kr) dk
class RadialGrid {
 public:
  RadialGrid(double dr, std::size_t n) : dr_(dr), n_(n) {
    if (!(dr > 0.0) || n < 4) throw ParameterError("RadialGrid: need dr > 0 and n >= 4");
  }

  double dr() const { return dr_; }
  std::size_t size() const { return n_ - 1; }
  double r_max() const { return dr_ * double(n_); }
  double dk() const { return std::numbers::pi / r_max(); }
  double r(std::size_t j) const { return dr_ * double(j + 1); }
  double k(std::size_t m) const { return dk() * double(m + 1); }

  // fhat(k_m) from f(r_j).
  std::vector<double> to_momentum(const std::vector<double>& f) const {
    std::vector<double> x(size());
    for (std::size_t j = 0; j < size(); ++j) x[j] = r(j) * f[j];
    dst(x);
    for (std::size_t m = 0; m < size(); ++m) x[m] *= 4.0 * std::numbers::pi * dr_ / 2.0 / k(m);
    return x;
  }

  // f(r_j) from fhat(k_m).
  std::vector<double> to_position(const std::vector<double>& fhat) const {
    std::vector<double> x(size());
    for (std::size_t m = 0; m < size(); ++m) x[m] = k(m) * fhat[m];
    dst(x);
    const double c = dk() / (2.0 * std::numbers::pi * std::numbers::pi) / 2.0;
    for (std::size_t j = 0; j < size(); ++j) x[j] *= c / r(j);
    return x;
  }

  template <class F>
  std::vector<double> sample_momentum(F&& fhat) const {
    std::vector<double> out(size());
    for (std::size_t m = 0; m < size(); ++m) out[m] = fhat(k(m));
    return out;
  }

  double l1_norm(const std::vector<double>& f) const {
    double s = 0.0;
    for (std::size_t j = 0; j < size(); ++j) s += r(j) * r(j) * std::abs(f[j]);
    return 4.0 * std::numbers::pi * s * dr_;
  }
  double l2_norm(const std::vector<double>& f) const {
    double s = 0.0;
    for (std::size_t j = 0; j < size(); ++j) s += r(j) * r(j) * f[j] * f[j];
    return std::sqrt(4.0 * std::numbers::pi * s * dr_);
  }
  // ((2pi)^-3 int |fhat|^2)^(1/2) on the k grid.
  double l2_norm_momentum(const std::vector<double>& fhat) const {
    double s = 0.0;
    for (std::size_t m = 0; m < size(); ++m) s += k(m) * k(m) * fhat[m] * fhat[m];
    return std::sqrt(s * dk() / (2.0 * std::numbers::pi * std::numbers::pi));
  }

 private:
  // In-place unnormalised RODFT00: y_k = 2 sum_j x_j sin(pi (j+1)(k+1)/n).
  void dst(std::vector<double>& x) const {
    const int len = static_cast<int>(x.size());
    double* buf = fftw_alloc_real(x.size());
    if (buf == nullptr) throw ResourceLimitError("RadialGrid: FFTW allocation failed");
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      plan = fftw_plan_r2r_1d(len, buf, buf, FFTW_RODFT00, FFTW_ESTIMATE);
    }
    std::copy(x.begin(), x.end(), buf);
    fftw_execute(plan);
    std::copy(buf, buf + len, x.begin());
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
    fftw_free(buf);
  }

  double dr_;
  std::size_t n_;
};

}  // namespace dilute
