// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "dilute/lattice_grid.hpp"
#include "oracles.hpp"

namespace dilute {
namespace {

TEST(EnumerateMomenta, SmallCutoffs) {
  EXPECT_EQ(enumerate_momenta(kTwoPi, 0.0).size(), 1u);
  EXPECT_EQ(enumerate_momenta(kTwoPi, 1.0).size(), 7u);
  EXPECT_EQ(enumerate_momenta(kTwoPi, std::sqrt(2.0)).size(), 19u);
}

TEST(EnumerateMomenta, MatchesBruteForceAndIsSymmetric) {
  for (long m : {0L, 3L, 10L, 50L, 101L}) {
    const auto lat = enumerate_momenta_norm2(5.0, m);
    EXPECT_EQ(lat.size(), oracle::ball(m).size()) << m;
    std::set<IntVec3> seen(lat.points().begin(), lat.points().end());
    EXPECT_EQ(seen.size(), lat.size());
    for (const auto& n : lat.points()) {
      EXPECT_LE(n.norm2(), m);
      EXPECT_TRUE(seen.count(-n));
    }
    EXPECT_TRUE(std::is_sorted(lat.points().begin(), lat.points().end(), lattice_less));
  }
}

TEST(EnumerateMomenta, CountStableUnderSmallCutoffShift) {
  const double L = 3.0;
  const double u = kTwoPi / L;
  for (long m : {4L, 9L, 27L}) {
    const double k = u * std::sqrt(double(m));
    const double gap = u * (std::sqrt(double(m + 1)) - std::sqrt(double(m)));
    EXPECT_EQ(enumerate_momenta(L, k).size(), enumerate_momenta(L, k + 0.5 * gap).size());
  }
}

TEST(EnumerateMomenta, LimitAndValidation) {
  EXPECT_THROW(enumerate_momenta(1.0, 1000.0, 1000), ResourceLimitError);
  EXPECT_THROW(enumerate_momenta(-1.0, 1.0), ParameterError);
  EXPECT_THROW(enumerate_momenta(1.0, -1.0), ParameterError);
}

TEST(ClosedShellSizes, FirstValuesAndGaps) {
  const auto s = closed_shell_sizes(1.0, 40);
  ASSERT_GE(s.size(), 5u);
  EXPECT_EQ(std::vector<long>(s.begin(), s.begin() + 5), (std::vector<long>{1, 7, 19, 27, 33}));
  EXPECT_EQ(std::count(s.begin(), s.end(), 8), 0);
}

TEST(ClosedShellSizes, IncreasingAndIndependentOfL) {
  const auto a = closed_shell_sizes(1.0, 5000);
  const auto b = closed_shell_sizes(17.5, 5000);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(std::adjacent_find(a.begin(), a.end(), std::greater_equal<long>()) == a.end());
  // Each size is an achievable ball count.
  for (long n : {a[3], a[10], a[40]}) {
    long r = 0;
    while (long(oracle::ball(r).size()) < n) ++r;
    EXPECT_EQ(long(oracle::ball(r).size()), n);
  }
}

TEST(Chi, EndpointsAndMonotone) {
  EXPECT_EQ(chi(0.5), 1.0);
  EXPECT_EQ(chi(1.0), 1.0);
  EXPECT_EQ(chi(2.0), 0.0);
  EXPECT_EQ(chi(3.0), 0.0);
  EXPECT_GT(chi(1.5), 0.0);
  EXPECT_LT(chi(1.5), 1.0);
  EXPECT_GE(chi(1.4), chi(1.6));
  double prev = 1.0;
  for (int i = 0; i <= 30000; ++i) {
    const double t = 3.0 * i / 30000.0;
    EXPECT_LE(chi(t), prev + 1e-15);
    prev = chi(t);
  }
}

TEST(Chi, DerivativeBound) {
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 1; i < 20000; ++i) {
    const double t = 1.0 + i / 20000.0;
    worst = std::max(worst, std::abs(chi(t + h) - chi(t - h)) / (2 * h));
  }
  EXPECT_LE(worst, kChiSlopeBound * (1.0 + 1e-6));
  EXPECT_GT(worst, 0.9 * kChiSlopeBound);
}

}  // namespace
}  // namespace dilute
