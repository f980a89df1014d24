// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "dilute/fit.hpp"
#include "dilute/potential.hpp"
#include "oracles.hpp"

namespace dilute {
namespace {

TEST(RadialPotential, SupportAndSign) {
  for (const auto& v : {RadialPotential::square_well(2.0, 1.5), RadialPotential::smooth_bump(1.0, 2.0),
                        RadialPotential::smooth_bump(1.0, 2.0, 3)}) {
    for (int i = 0; i <= 400; ++i) {
      const double r = 4.0 * i / 400.0;
      EXPECT_GE(v(r), 0.0);
      if (r > v.support_radius()) {
        EXPECT_EQ(v(r), 0.0);
      }
    }
  }
  EXPECT_THROW(RadialPotential::square_well(-1.0, 1.0), ParameterError);
  EXPECT_THROW(RadialPotential::square_well(1.0, 0.0), ParameterError);
}

TEST(RadialPotential, BumpSmoothAtEdge) {
  const auto v = RadialPotential::smooth_bump(1.0, 1.0, 2);
  // C^2: value, first and second difference quotients vanish at R0.
  const double h = 1e-3;
  EXPECT_NEAR(v(1.0 - h), 0.0, 1e-7);
  EXPECT_NEAR((v(1.0) - v(1.0 - h)) / h, 0.0, 1e-4);
  const auto inf = RadialPotential::smooth_bump(1.0, 1.0);
  EXPECT_LT(inf(1.0 - 1e-2), 1e-20);
}

TEST(FourierTransform, SquareWellClosedForm) {
  const auto v = RadialPotential::square_well(3.0, 0.7);
  for (double p : {0.0, 0.05, 0.5, 2.0, 7.3, 40.0})
    EXPECT_NEAR(fourier_transform_radial(v, p), oracle::square_well_vhat(3.0, 0.7, p),
                1e-12 * oracle::square_well_vhat(3.0, 0.7, 0.0))
        << p;
  // Both sides of the small-argument switch against direct quadrature.
  for (double p : {0.1 / 0.7 * (1.0 - 1e-9), 0.1 / 0.7 * (1.0 + 1e-9), 1e-4}) {
    const double ref = 4.0 * std::numbers::pi * 3.0 *
                       oracle::simpson([&](double r) { return r * std::sin(p * r) / p; }, 0.0, 0.7, 2000);
    EXPECT_NEAR(fourier_transform_radial(v, p), ref, 1e-13 * ref) << p;
  }
  EXPECT_NEAR(fourier_transform_radial(v, 0.0), 4.0 * std::numbers::pi * 3.0 * 0.343 / 3.0, 1e-12);
}

TEST(FourierTransform, BumpAgainstSimpson) {
  const auto v = RadialPotential::smooth_bump(2.0, 1.3);
  for (double p : {0.0, 0.7, 3.0, 11.0}) {
    const double ref = 4.0 * std::numbers::pi *
                       oracle::simpson([&](double r) { return p == 0.0 ? r * r * v(r) : r * std::sin(p * r) * v(r) / p; },
                                       0.0, 1.3, 40000);
    EXPECT_NEAR(fourier_transform_radial(v, p), ref, 1e-9 * std::max(1.0, std::abs(ref)));
  }
  EXPECT_EQ(fourier_transform_radial(RadialPotential::zero(), 2.0), 0.0);
}

TEST(FourierTransform, DecayMatchesSmoothness) {
  const int k = 2;
  const auto v = RadialPotential::smooth_bump(1.0, 1.0, k);
  std::vector<double> p, env;
  for (double x = 20.0; x <= 160.0; x *= 1.25) {
    double m = 0.0;
    for (int i = 0; i < 64; ++i) m = std::max(m, std::abs(fourier_transform_radial(v, x * (1.0 + i / 64.0 * 0.25))));
    p.push_back(x);
    env.push_back(m);
  }
  EXPECT_LE(fit_exponent(p, env), -(k - 1.0));
}

TEST(PeriodizedPotential, ZeroAndMeanCoefficient) {
  const PeriodizedPotential z(RadialPotential::zero(), 6.0, 5.0);
  for (long m = 0; m <= z.max_norm2(); ++m) EXPECT_EQ(z.coefficient_norm2(m), 0.0);
  const auto v = RadialPotential::square_well(1.0, 1.0);
  const PeriodizedPotential pv(v, 6.0, 5.0);
  EXPECT_NEAR(pv.coefficient_norm2(0), 4.0 * std::numbers::pi / 3.0, 1e-12);
  EXPECT_THROW(PeriodizedPotential(v, 1.5, 5.0), GeometryError);
}

TEST(PeriodizedPotential, InversionParsevalPositivity) {
  const auto v = RadialPotential::smooth_bump(1.0, 1.0);
  const double L = 5.0;
  const PeriodizedPotential pv(v, L, suggest_pmax(v, L, 1e-8));
  EXPECT_NEAR(pv.evaluate({0.0, 0.0, 0.0}), v(0.0), 1e-6);
  EXPECT_NEAR(pv.evaluate({0.3, -0.2, 0.4}), v(std::sqrt(0.29)), 1e-6);
  const double l2 = 4.0 * std::numbers::pi * oracle::simpson([&](double r) { return r * r * v(r) * v(r); }, 0, 1);
  EXPECT_NEAR(pv.parseval_sum(), l2, 1e-6 * l2);
  for (double x : {0.0, 0.9, 1.4, 2.0, 2.5}) EXPECT_GE(pv.evaluate({x, 0.1, 0.0}), -1e-6);
}

TEST(TabulatedPotential, ReadsTwoColumnFile) {
  const auto path = std::filesystem::temp_directory_path() / "dilute_tab_potential.txt";
  {
    std::ofstream f(path);
    f << "# r V\n0 2\n0.5 1\n1.0 0\n";
  }
  const auto v = read_tabulated_potential(path);
  EXPECT_DOUBLE_EQ(v(0.25), 1.5);
  EXPECT_EQ(v(1.2), 0.0);
  EXPECT_DOUBLE_EQ(v.support_radius(), 1.0);
  std::filesystem::remove(path);
  EXPECT_THROW(read_tabulated_potential("/nonexistent/table"), ConfigError);
}

}  // namespace
}  // namespace dilute
