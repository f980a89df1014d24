// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dilute/fit.hpp"
#include "dilute/scattering.hpp"
#include "oracles.hpp"

namespace dilute {
namespace {

constexpr double kEightPi = 8.0 * std::numbers::pi;

TEST(ScatteringLength, SquareWellClosedForm) {
  for (auto [v0, r0] : {std::pair{1.0, 1.0}, {10.0, 0.5}, {0.1, 2.0}}) {
    const double a = scattering_length(RadialPotential::square_well(v0, r0)).value;
    EXPECT_NEAR(a, oracle::square_well_length(v0, r0), 1e-6 * oracle::square_well_length(v0, r0));
  }
  EXPECT_EQ(scattering_length(RadialPotential::zero()).value, 0.0);
}

TEST(ScatteringLength, BumpAgainstShootingOracle) {
  for (int order : {kInfiniteOrder, 2}) {
    const auto v = RadialPotential::smooth_bump(3.0, 1.2, order);
    const double ref = oracle::rk4_scattering_length([&](double r) { return v(r); }, 1.2, 40000);
    EXPECT_NEAR(scattering_length(v).value, ref, 1e-8 * ref) << order;
  }
}

TEST(ScatteringLength, BelowBornBound) {
  for (double v0 : {0.01, 0.3, 5.0, 100.0}) {
    const auto v = RadialPotential::smooth_bump(v0, 1.0);
    const double a = scattering_length(v).value;
    EXPECT_GT(a, 0.0);
    EXPECT_LT(a, fourier_transform_radial(v, 0.0) / kEightPi);
    EXPECT_LT(a, 1.0);
  }
}

TEST(BornSeries, OrderingAndThirdOrderRemainder) {
  std::vector<double> eps, err;
  for (double v0 : {0.4, 0.2, 0.1, 0.05}) {
    const auto v = RadialPotential::square_well(v0, 1.0);
    const auto b = born_series(v, 2);
    const double a = oracle::square_well_length(v0, 1.0);
    EXPECT_NEAR(b[0], fourier_transform_radial(v, 0.0) / kEightPi, 1e-15);
    EXPECT_GE(b[0], a);
    EXPECT_GE(a, b[1]);
    eps.push_back(v0);
    err.push_back(std::abs(a - b[1]));
  }
  EXPECT_GE(fit_exponent(eps, err), 2.7);
  EXPECT_EQ(born_series(RadialPotential::zero(), 2)[1], 0.0);
  EXPECT_THROW(born_series(RadialPotential::zero(), 3), ParameterError);
}

TEST(Neumann, ProfileBoundsAndEnergy) {
  const auto v = RadialPotential::square_well(2.0, 1.0);
  const auto sol = neumann_profile_matched(v, 8.0, 4000);
  for (double f : sol.f) {
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
  }
  EXPECT_DOUBLE_EQ(sol.f.back(), 1.0);
  EXPECT_TRUE(std::is_sorted(sol.f.begin(), sol.f.end()));
  EXPECT_NEAR(sol.boundary_slope(), 0.0, 1e-5);
  EXPECT_NEAR(sol.recompute_a(v), sol.a_R, 1e-5 * sol.a_R);
  const double a = oracle::square_well_length(2.0, 1.0);
  EXPECT_GT(sol.a_R, a);
  EXPECT_GT(sol.energy, 0.0);
  EXPECT_THROW(solve_neumann_matched(v, 0.5), GeometryError);
}

TEST(Neumann, FiniteDifferenceConvergesToMatched) {
  const auto v = RadialPotential::smooth_bump(2.0, 1.0);
  const double ref = solve_neumann_matched(v, 6.0).a_R;
  std::vector<double> h, err;
  for (std::size_t m : {600u, 1200u, 2400u}) {
    const auto fd = solve_neumann(v, 6.0, m);
    h.push_back(6.0 / double(m));
    err.push_back(std::abs(fd.a_R - ref));
  }
  EXPECT_LT(err.back(), 1e-4 * ref);
  EXPECT_GE(fit_exponent(h, err), 1.8);
}

TEST(Neumann, ApproachesScatteringLength) {
  const auto v = RadialPotential::square_well(1.0, 1.0);
  const double a = oracle::square_well_length(1.0, 1.0);
  double prev = 1e300;
  for (double R : {4.0, 8.0, 16.0, 32.0}) {
    const auto m = solve_neumann_matched(v, R);
    EXPECT_GT(m.a_R, a);
    EXPECT_LT(m.a_R, prev);
    prev = m.a_R;
    EXPECT_NEAR(m.energy * R * R * R / (3.0 * a), 1.0, 3.0 / R);
  }
}

TEST(FourierScattering, MinimizerIdentityAndStationarity) {
  const double L = 10.0;
  const auto v = RadialPotential::square_well(1.0, 1.0);
  const PeriodizedPotential pv(v, L, 40.0);
  const auto grid = enumerate_momenta_norm2(L, 64);
  const auto sol = solve_scattering_fourier(pv, grid);
  EXPECT_LT(sol.residual_norm, 1e-10);
  LatticeConvolution conv(grid, pv);
  const auto e = energy_functional_e(sol.phi, pv, conv);
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += pv.coefficient(grid.points()[i]) * sol.phi[i];
  const double expected = -0.5 * s / pv.volume();
  EXPECT_NEAR(e.value, expected, 1e-10 * std::abs(expected));
  for (double t : {0.9, 1.1}) {
    auto scaled = sol.phi;
    for (auto& x : scaled) x *= t;
    EXPECT_GT(energy_functional_e(scaled, pv, conv).value, e.value);
  }
  const double veff = effective_interaction(pv, sol);
  EXPECT_LT(veff, pv.coefficient_norm2(0));
  EXPECT_GT(veff, 0.0);
}

TEST(FourierScattering, ConvolutionMatchesDirectSum) {
  const double L = 7.0;
  const PeriodizedPotential pv(RadialPotential::square_well(1.0, 1.0), L, 30.0);
  const auto grid = enumerate_momenta_norm2(L, 5);
  LatticeConvolution conv(grid, pv);
  std::vector<double> phi(grid.size());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = std::cos(0.7 * double(i));
  const auto c = conv.apply(phi);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
      d += pv.coefficient(grid.points()[i] - grid.points()[j]) * phi[j];
    EXPECT_NEAR(c[i], d / pv.volume(), 1e-12);
  }
}

TEST(Cutoff, WindowsPartitionTheRegulator) {
  const CutoffParams p{};
  for (double rho : {1e-8, 1e-6}) {
    for (double k : {0.0, 1e-3, 0.02, 0.1, 1.0, 10.0, 1e3}) {
      const auto w = CutoffDecomposition::window_values(p, rho, k);
      EXPECT_NEAR(w[0] + w[1] + w[2], chi(std::pow(rho, p.beta) * k), 1e-15);
      for (double x : w) EXPECT_GE(x, -1e-15);
    }
  }
  CutoffParams bad;
  bad.eta = 0.5;
  EXPECT_THROW(check_cutoff_params(bad), ParameterError);
}

TEST(Cutoff, ComponentsSumToRegularisedProfile) {
  const auto v = RadialPotential::square_well(1.0, 1.0);
  const auto sol = neumann_profile_matched(v, 50.0, 10000);
  const auto d = cutoff_decomposition(sol, 1.0, 1e-6, CutoffParams{});
  for (std::size_t m = 0; m < d.k.size(); m += 97) {
    const double total = d.components[0][m] + d.components[1][m] + d.components[2][m];
    EXPECT_NEAR(total, chi(std::pow(1e-6, 0.1) * d.k[m]) * d.phi_hat[m], 1e-12 * std::abs(d.phi_hat[0]));
  }
  for (std::size_t m : {0u, 10u, 200u}) {
    const double k = d.k[m];
    const double ref = 4.0 * std::numbers::pi / k *
                       oracle::simpson([&](double r) { return r * std::sin(k * r) * sol.phi(r); }, 0.0, 50.0, 200000);
    EXPECT_NEAR(d.phi_hat[m], ref, 1e-3 * std::abs(d.phi_hat[0])) << m;
  }
}

TEST(Cutoff, PhiDecaysLikeInverseRadius) {
  const auto v = RadialPotential::square_well(1.0, 1.0);
  const double a = oracle::square_well_length(1.0, 1.0);
  // phi(x) x / a = 1 + O(x / R) outside the support.
  for (double R : {400.0, 1600.0}) {
    const auto sol = neumann_profile_matched(v, R, std::size_t(50 * R));
    for (double x : {1.5, 5.0, 20.0}) EXPECT_NEAR(sol.phi(x) * x / a, 1.0, 2.0 * x / R) << R << " " << x;
  }
}

}  // namespace
}  // namespace dilute
