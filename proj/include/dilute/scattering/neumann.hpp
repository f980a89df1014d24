// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include "dilute/errors.hpp"
#include "dilute/potential.hpp"
#include "dilute/quadrature.hpp"

namespace dilute {

// Ground state of (-Delta + V/2) f = E f on the ball of radius R with
// f(R) = 1 and vanishing normal derivative, sampled on r_i = i R/M.
struct NeumannSolution {
  double R = 0.0;
  std::vector<double> r;
  std::vector<double> f;
  double energy = 0.0;
  double a_R = 0.0;

  double spacing() const { return r.size() > 1 ? r[1] - r[0] : 0.0; }

  double f_at(double x) const {
    if (x >= R) return 1.0;
    const double h = spacing();
    const std::size_t i = std::min(static_cast<std::size_t>(x / h), r.size() - 2);
    const double t = (x - r[i]) / h;
    return (1.0 - t) * f[i] + t * f[i + 1];
  }

  // phi_infinity = 1 - f inside the ball, 0 outside.
  double phi(double x) const { return x >= R ? 0.0 : 1.0 - f_at(x); }

  // One-sided second-order f'(R).
  double boundary_slope() const {
    const std::size_t m = f.size() - 1;
    return (3.0 * f[m] - 4.0 * f[m - 1] + f[m - 2]) / (2.0 * spacing());
  }

  // (1/8pi) int V f over the ball, using the piecewise linear f.
  double recompute_a(const RadialPotential& v) const {
    if (v.is_zero()) return 0.0;
    auto breaks = v.breakpoints();
    const double r0 = std::min(v.support_radius(), R);
    std::vector<double> b;
    for (double x : breaks)
      if (x <= r0) b.push_back(x);
    if (b.back() < r0) b.push_back(r0);
    // Add mesh nodes so each piece sees a linear f.
    std::vector<double> pts;
    for (std::size_t i = 0; i < r.size() && r[i] < r0; ++i) pts.push_back(r[i]);
    pts.insert(pts.end(), b.begin(), b.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double scale = std::abs(v(0.0)) * r0 * r0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      total += integrate([&](double x) { return x * x * v(x) * f_at(x); }, pts[i], pts[i + 1], 1e-10, 20,
                         1e-14 * scale * (pts[i + 1] - pts[i]));
    return 0.5 * total;
  }
};

namespace detail {

inline double cell_average(const RadialPotential& v, double lo, double hi) {
  const double r0 = v.support_radius();
  const double width = hi - lo;
  if (lo >= r0) return 0.0;
  std::vector<double> b{lo};
  for (double x : v.breakpoints())
    if (x > lo && x < std::min(hi, r0)) b.push_back(x);
  b.push_back(std::min(hi, r0));
  const double floor = 1e-14 * std::max(std::abs(v(0.0)), std::abs(v(lo))) * width;
  return integrate_pieces([&](double x) { return v(x); }, b, 1e-11, floor) / width;
}

}  // namespace detail

// Finite differences on u = r f over a uniform mesh, Neumann condition
// u'(R) = u(R)/R via a one-sided second-order stencil, lowest eigenpair by
// shifted inverse iteration on the symmetrised tridiagonal matrix.
inline NeumannSolution solve_neumann(const RadialPotential& v, double R, std::size_t mesh_size) {
  if (!(R > v.support_radius())) throw GeometryError("solve_neumann: R must exceed the support radius");
  if (mesh_size < 200) throw ParameterError("solve_neumann: mesh_size must be >= 200");
  const std::size_t M = mesh_size;
  const double h = R / double(M);
  const std::size_t n = M - 1;  // unknowns u_1..u_{M-1}
  const double ih2 = 1.0 / (h * h);
  const double c = 1.0 / (3.0 - 2.0 * h / R);

  std::vector<double> diag(n), off(n > 0 ? n - 1 : 0, -ih2);
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = h * double(i + 1);
    diag[i] = 2.0 * ih2 + 0.5 * detail::cell_average(v, std::max(0.0, ri - 0.5 * h), ri + 0.5 * h);
  }
  diag[n - 1] += -4.0 * c * ih2;
  off[n - 2] = -std::sqrt(1.0 - c) * ih2;

  const double sigma = -2.5 / (R * R);
  std::vector<double> w(n), y(n), cp(n), dp(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = h * double(i + 1);
  auto normalize = [](std::vector<double>& x) {
    double s = 0.0;
    for (double t : x) s += t * t;
    s = std::sqrt(s);
    for (double& t : x) t /= s;
  };
  normalize(w);
  double energy = 0.0;
  bool converged = false;
  for (int it = 0; it < 500; ++it) {
    // Thomas solve of (S - sigma) y = w.
    cp[0] = off.empty() ? 0.0 : off[0] / (diag[0] - sigma);
    dp[0] = w[0] / (diag[0] - sigma);
    for (std::size_t i = 1; i < n; ++i) {
      const double den = diag[i] - sigma - off[i - 1] * cp[i - 1];
      if (i + 1 < n) cp[i] = off[i] / den;
      dp[i] = (w[i] - off[i - 1] * dp[i - 1]) / den;
    }
    y[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) y[i] = dp[i] - cp[i] * y[i + 1];
    double wy = 0.0;
    for (std::size_t i = 0; i < n; ++i) wy += w[i] * y[i];
    const double e_new = sigma + 1.0 / wy;
    normalize(y);
    if (y[n - 1] < 0.0)
      for (double& t : y) t = -t;
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(y[i] - w[i]));
    w.swap(y);
    energy = e_new;
    if (diff < 1e-14 && it > 2) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ConvergenceError("solve_neumann: inverse iteration did not converge");
  if (energy < -1e-9 / (R * R))
    throw AccuracyError("solve_neumann: negative eigenvalue, discretisation failure");

  std::vector<double> u(M + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) u[i + 1] = w[i];
  u[M - 1] *= std::sqrt(1.0 - c);  // undo the symmetrising scale
  u[M] = c * (4.0 * u[M - 1] - u[M - 2]);
  const double scale = R / u[M];

  NeumannSolution sol;
  sol.R = R;
  sol.energy = std::max(energy, 0.0);
  sol.r.resize(M + 1);
  sol.f.resize(M + 1);
  for (std::size_t i = 0; i <= M; ++i) sol.r[i] = h * double(i);
  for (std::size_t i = 1; i <= M; ++i) sol.f[i] = u[i] * scale / sol.r[i];
  sol.f[0] = (8.0 * u[1] - u[2]) * scale / (6.0 * h);
  double acc = 0.0;
  for (std::size_t i = 1; i < M; ++i) {
    const double ri = sol.r[i];
    acc += ri * ri * detail::cell_average(v, std::max(0.0, ri - 0.5 * h), ri + 0.5 * h) * sol.f[i];
  }
  sol.a_R = 0.5 * h * acc;
  return sol;
}

namespace detail {

using OdeState = std::array<double, 3>;  // u, u', (1/2) int r V u

// Integrates u'' = (V/2 - E) u from u(0)=0, u'(0)=1 across [0, R0], recording
// u at the requested (ascending) radii.
inline OdeState integrate_interior(const RadialPotential& v, double energy,
                                   const std::vector<double>& record_at = {},
                                   std::vector<double>* recorded = nullptr) {
  namespace ode = boost::numeric::odeint;
  auto rhs = [&](const OdeState& x, OdeState& dx, double r) {
    const double vr = v(r);
    dx[0] = x[1];
    dx[1] = (0.5 * vr - energy) * x[0];
    dx[2] = 0.5 * r * vr * x[0];
  };
  OdeState x{0.0, 1.0, 0.0};
  const auto breaks = v.breakpoints();
  std::size_t next = 0;
  if (recorded) recorded->assign(record_at.size(), 0.0);
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double lo = breaks[b], hi = breaks[b + 1];
    auto stepper = ode::make_dense_output(1e-15, 1e-13, ode::runge_kutta_dopri5<OdeState>());
    stepper.initialize(x, lo, std::min(1e-3, (hi - lo) / 16.0));
    while (next < record_at.size() && record_at[next] <= lo) {
      (*recorded)[next] = x[0];
      ++next;
    }
    while (stepper.current_time() < hi) {
      if (hi - stepper.current_time() < stepper.current_time_step())
        stepper.initialize(stepper.current_state(), stepper.current_time(), hi - stepper.current_time());
      stepper.do_step(rhs);
      while (next < record_at.size() && record_at[next] <= stepper.current_time() &&
             record_at[next] <= hi) {
        OdeState tmp;
        stepper.calc_state(record_at[next], tmp);
        (*recorded)[next] = tmp[0];
        ++next;
      }
      if (hi - stepper.current_time() < 1e-14 * std::max(1.0, hi)) break;
    }
    x = stepper.current_state();
  }
  return x;
}

// W(k)/k for the interior solution against the exterior Neumann solution
// g(r) = sin(k(r-R)) + kR cos(k(r-R)).
inline double reduced_wronskian(const OdeState& in, double k, double r0, double R) {
  const double s = r0 - R;
  const double sinc_term = k == 0.0 ? s : std::sin(k * s) / k;
  const double g_over_k = sinc_term + R * std::cos(k * s);
  const double dg_over_k = std::cos(k * s) - k * R * std::sin(k * s);
  return in[1] * g_over_k - in[0] * dg_over_k;
}

}  // namespace detail

struct MatchedNeumann {
  double R = 0.0;
  double k = 0.0;
  double energy = 0.0;
  double a_R = 0.0;
};

// Neumann ground state by exact matching: interior ODE on [0, R0], analytic
// exterior solution, lowest root of the Wronskian in k = sqrt(E).
inline MatchedNeumann solve_neumann_matched(const RadialPotential& v, double R) {
  const double r0 = v.support_radius();
  if (!(R > r0)) throw GeometryError("solve_neumann_matched: R must exceed the support radius");
  MatchedNeumann out;
  out.R = R;
  if (v.is_zero()) return out;
  auto wr = [&](double k) {
    return detail::reduced_wronskian(detail::integrate_interior(v, k * k), k, r0, R);
  };
  const double w0 = wr(0.0);
  if (!(w0 > 0.0)) throw AccuracyError("solve_neumann_matched: degenerate zero-energy Wronskian");
  const double dk = 0.05 / R;
  double lo = 0.0, flo = w0, hi = dk, fhi = wr(hi);
  int guard = 0;
  while (fhi > 0.0) {
    lo = hi;
    flo = fhi;
    hi += dk;
    fhi = wr(hi);
    if (++guard > 400) throw ConvergenceError("solve_neumann_matched: no Wronskian root bracketed");
  }
  boost::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      wr, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52), iters);
  if (iters >= 200) throw ConvergenceError("solve_neumann_matched: root refinement did not converge");
  const double k = 0.5 * (a + b);
  const auto in = detail::integrate_interior(v, k * k);
  const double s = r0 - R;
  const double g_over_k = std::sin(k * s) / k + R * std::cos(k * s);
  out.k = k;
  out.energy = k * k;
  out.a_R = in[2] * g_over_k / in[0];
  return out;
}

// Same eigenpair with f sampled on a uniform mesh of mesh_size intervals.
inline NeumannSolution neumann_profile_matched(const RadialPotential& v, double R, std::size_t mesh_size) {
  if (mesh_size < 2) throw ParameterError("neumann_profile_matched: mesh_size must be >= 2");
  const auto m = solve_neumann_matched(v, R);
  NeumannSolution sol;
  sol.R = R;
  sol.energy = m.energy;
  sol.a_R = m.a_R;
  const double h = R / double(mesh_size);
  sol.r.resize(mesh_size + 1);
  sol.f.assign(mesh_size + 1, 1.0);
  for (std::size_t i = 0; i <= mesh_size; ++i) sol.r[i] = h * double(i);
  if (v.is_zero()) return sol;
  const double r0 = v.support_radius();
  const double k = m.k;
  std::vector<double> inner_r;
  for (double x : sol.r)
    if (x < r0) inner_r.push_back(x);
  std::vector<double> inner_u;
  const auto end = detail::integrate_interior(v, m.energy, inner_r, &inner_u);
  // f = g(r) / (k r) outside, matched amplitude inside.
  auto g_over_k = [&](double x) { return std::sin(k * (x - R)) / k + R * std::cos(k * (x - R)); };
  const double amp = g_over_k(r0) / end[0];
  for (std::size_t i = 0; i < inner_r.size(); ++i)
    sol.f[i] = i == 0 ? amp : amp * inner_u[i] / inner_r[i];
  for (std::size_t i = inner_r.size(); i <= mesh_size; ++i) sol.f[i] = g_over_k(sol.r[i]) / sol.r[i];
  sol.f[mesh_size] = 1.0;
  return sol;
}

struct ScatteringLength {
  double value = 0.0;
  double error_estimate = 0.0;
  std::array<double, 3> radii{};
  std::array<double, 3> a_R{};
};

// Richardson extrapolation of a_R in 1/R at R1 = 1000 R0, 2 R1, 4 R1.
inline ScatteringLength scattering_length(const RadialPotential& v) {
  ScatteringLength out;
  if (v.is_zero()) return out;
  const double r1 = 1000.0 * v.support_radius();
  out.radii = {r1, 2.0 * r1, 4.0 * r1};
  for (int i = 0; i < 3; ++i) out.a_R[i] = solve_neumann_matched(v, out.radii[i]).a_R;
  const double tol = 1e-12 * out.a_R[0];
  if (out.a_R[1] > out.a_R[0] + tol || out.a_R[2] > out.a_R[1] + tol)
    throw AccuracyError("scattering_length: non-monotone a_R sequence, refine the solver");
  const double e1 = 2.0 * out.a_R[1] - out.a_R[0];
  const double e2 = 2.0 * out.a_R[2] - out.a_R[1];
  out.value = e2;
  out.error_estimate = std::abs(e2 - e1);
  return out;
}

// Partial sums of the Born series for the scattering length (continuum).
inline std::vector<double> born_series(const RadialPotential& v, int order) {
  if (order < 1 || order > 2) throw ParameterError("born_series: order must be 1 or 2");
  const double a1 = fourier_transform_radial(v, 0.0) / (8.0 * std::numbers::pi);
  std::vector<double> out{a1};
  if (order == 1) return out;
  if (v.is_zero()) {
    out.push_back(0.0);
    return out;
  }
  const auto breaks = v.breakpoints();
  const double r0 = v.support_radius();
  auto pieces_between = [&](double lo, double hi) {
    std::vector<double> b{lo};
    for (double x : breaks)
      if (x > lo && x < hi) b.push_back(x);
    b.push_back(hi);
    return b;
  };
  // W(r) = (1/r) int_0^r s^2 V + int_r^R0 s V.
  auto w = [&](double r) {
    if (r <= 0.0) return integrate_pieces([&](double s) { return s * v(s); }, breaks, 1e-11);
    const double inner = integrate_pieces([&](double s) { return s * s * v(s); }, pieces_between(0.0, r), 1e-11);
    const double outer = integrate_pieces([&](double s) { return s * v(s); }, pieces_between(r, r0), 1e-11);
    return inner / r + outer;
  };
  const double second = 0.25 * integrate_pieces([&](double r) { return r * r * v(r) * w(r); }, breaks, 1e-10);
  out.push_back(a1 - second);
  return out;
}

// Lattice version: a2 = a1 - (1/8pi) L^-3 sum_{p != 0} Vhat^2 / (2 p^2).
inline std::vector<double> born_series(const PeriodizedPotential& v, int order,
                                       const MomentumLattice& grid) {
  if (order < 1 || order > 2) throw ParameterError("born_series: order must be 1 or 2");
  const double eight_pi = 8.0 * std::numbers::pi;
  const double a1 = v.coefficient_norm2(0) / eight_pi;
  std::vector<double> out{a1};
  if (order == 1) return out;
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const long m = grid.points()[i].norm2();
    if (m == 0) continue;
    const double c = v.coefficient_norm2(m);
    s += c * c / (2.0 * grid.norm2(i));
  }
  out.push_back(a1 - s / (eight_pi * v.volume()));
  return out;
}

}  // namespace dilute
