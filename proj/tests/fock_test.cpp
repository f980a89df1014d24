// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "dilute/fock_ed.hpp"
#include "oracles.hpp"

namespace dilute {
namespace {

std::uint64_t to_mask(const Word& w) {
  std::uint64_t s = 0;
  for (auto i : w) s |= std::uint64_t(1) << i;
  return s;
}

std::shared_ptr<const ModeSet> small_modes(double L, long cut_up, long cut_down) {
  return std::make_shared<const ModeSet>(ModeSet::from_cutoff(L, cut_up, cut_down));
}

TEST(ModeSet, OrderingAndValidation) {
  const auto m = small_modes(3.0, 1, 2);
  EXPECT_EQ(m->count(Spin::up), 7u);
  EXPECT_EQ(m->count(Spin::down), 19u);
  EXPECT_EQ(m->offset(Spin::down), 7u);
  EXPECT_EQ(*m->index(Spin::up, IntVec3{}), 0u);
  EXPECT_EQ(*m->index(Spin::down, IntVec3{}), 7u);
  EXPECT_FALSE(m->index(Spin::up, IntVec3{1, 1, 0}));
  for (std::size_t i = 1; i < 7; ++i) EXPECT_TRUE(lattice_less(m->mode(i - 1).n, m->mode(i).n));
  EXPECT_THROW(ModeSet(3.0, {IntVec3{1, 0, 0}}, {}), ParameterError);
}

TEST(Sector, DimensionsAgainstBruteForce) {
  const auto m = small_modes(4.0, 1, 1);
  EXPECT_EQ(build_sector(m, 1, 1).dim(), 49u);
  EXPECT_EQ(build_sector(m, 2, 3).dim(), 21u * 35u);
  // Zero total momentum for one up and one down: k_down = -k_up.
  EXPECT_EQ(build_sector(m, 1, 1, IntVec3{}).dim(), 7u);
  for (const IntVec3 p : {IntVec3{1, 0, 0}, IntVec3{1, 1, 0}, IntVec3{2, 0, 0}, IntVec3{2, 1, 0}}) {
    std::size_t count = 0;
    for (std::uint64_t s = 0; s < (1u << 14); ++s) {
      if (std::popcount(s & 0x7f) != 2 || std::popcount(s >> 7) != 1) continue;
      IntVec3 t{};
      for (int j = 0; j < 14; ++j)
        if (s >> j & 1) t = t + m->mode(std::size_t(j)).n;
      if (t == p) ++count;
    }
    EXPECT_EQ(build_sector(m, 2, 1, p).dim(), count) << p.x << p.y << p.z;
  }
  EXPECT_THROW(build_sector(m, 8, 0), ParameterError);
  EXPECT_THROW(build_sector(m, 3, 3, std::nullopt, 100), ResourceLimitError);
}

TEST(Sector, WordsSortedByBitstring) {
  const auto s = build_sector(small_modes(4.0, 1, 1), 2, 2);
  for (std::size_t i = 1; i < s.dim(); ++i) EXPECT_LT(to_mask(s.word(i - 1)), to_mask(s.word(i)));
  for (std::size_t i = 0; i < s.dim(); i += 37) EXPECT_EQ(*s.find(s.word(i)), i);
  EXPECT_FALSE(s.find(Word{0}));
}

TEST(Words, CreationAnnihilationMatchJordanWigner) {
  constexpr int m = 6;
  auto modes = std::make_shared<const ModeSet>(3.0, std::vector<IntVec3>{{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}},
                                               std::vector<IntVec3>{{0, 0, 0}, {0, 1, 0}, {0, -1, 0}});
  const auto space = build_fock_space(modes);
  ASSERT_EQ(space.dim(), 64u);
  for (std::size_t i = 0; i < space.dim(); ++i) ASSERT_EQ(to_mask(space.word(i)), i);
  for (int j = 0; j < m; ++j) {
    const auto ref = oracle::jw_annihilator(m, j);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(64, 64), c = a;
    for (std::size_t s = 0; s < 64; ++s) {
      Word w = space.word(s);
      if (int sg = annihilate(w, std::uint32_t(j))) a(Eigen::Index(*space.find(w)), Eigen::Index(s)) = sg;
      Word x = space.word(s);
      if (int sg = create(x, std::uint32_t(j))) c(Eigen::Index(*space.find(x)), Eigen::Index(s)) = sg;
    }
    EXPECT_EQ((a - ref).norm(), 0.0);
    EXPECT_EQ((c - ref.transpose()).norm(), 0.0);
  }
  // Canonical anticommutation relations on the library matrices.
  std::vector<Eigen::MatrixXd> ops;
  for (int j = 0; j < m; ++j) ops.push_back(oracle::jw_annihilator(m, j));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Eigen::MatrixXd ac = ops[i] * ops[j].transpose() + ops[j].transpose() * ops[i];
      const Eigen::MatrixXd expected = (i == j ? 1.0 : 0.0) * Eigen::MatrixXd::Identity(64, 64);
      EXPECT_EQ((ac - expected).norm(), 0.0);
      EXPECT_EQ((ops[i] * ops[j] + ops[j] * ops[i]).norm(), 0.0);
    }
}

TEST(Words, MonomialsMatchBitmaskOracle) {
  const auto modes = small_modes(4.0, 1, 1);
  std::mt19937_64 rng(3);
  const auto sector = build_sector(modes, 2, 2);
  const auto psi = random_unit_vector(sector.dim(), rng);
  const auto fv = to_fock_vector(sector, psi);
  const std::vector<Monomial> op{{0.7, {{3, true}, {8, true}, {9, false}, {1, false}}},
                                 {-1.3, {{12, true}, {2, false}}}};
  const auto out = apply_monomials(op, fv);
  oracle::BitVector ref;
  for (std::size_t i = 0; i < sector.dim(); ++i) {
    for (const auto& mono : op) {
      std::uint64_t s = to_mask(sector.word(i));
      int sg = 1;
      for (auto it = mono.ops.rbegin(); it != mono.ops.rend() && sg; ++it)
        sg *= it->creation ? oracle::bit_create(s, int(it->mode)) : oracle::bit_annihilate(s, int(it->mode));
      if (sg) ref[s] += mono.amplitude * sg * psi[i];
    }
  }
  std::size_t nonzero = 0;
  for (const auto& [w, c] : out) {
    EXPECT_NEAR(c, ref[to_mask(w)], 1e-15);
    if (c != 0.0) ++nonzero;
  }
  std::size_t ref_nonzero = 0;
  for (const auto& [s, c] : ref) ref_nonzero += c != 0.0;
  EXPECT_EQ(nonzero, ref_nonzero);
}

TEST(ParticleHole, UnitaryAndFillsBalls) {
  const double L = 5.0;
  const auto modes = small_modes(L, 2, 1);
  const auto up = build_fermi_ball(L, 7, Spin::up);
  const auto down = build_fermi_ball(L, 1, Spin::down);
  const ParticleHoleMap r(*modes, up, down);
  EXPECT_EQ(r.ffg_word().size(), 8u);
  const auto vac = build_sector(modes, 0, 0);
  const auto filled = r.image_sector(vac);
  const auto img = r.apply(vac, filled, {1.0});
  ASSERT_EQ(img.size(), 1u);
  EXPECT_EQ(img[0], 1.0);
  EXPECT_EQ(filled.word(0), r.ffg_word());

  const auto sector = build_sector(modes, 7, 1);
  const auto image = r.image_sector(sector);
  EXPECT_EQ(image.dim(), sector.dim());
  std::mt19937_64 rng(5);
  for (int k = 0; k < 4; ++k) {
    const auto psi = random_unit_vector(sector.dim(), rng);
    const auto xi = r.apply_adjoint(sector, image, psi);
    EXPECT_NEAR(norm(xi), norm(psi), 1e-15);
    const auto back = r.apply(image, sector, xi);
    for (std::size_t i = 0; i < psi.size(); ++i) EXPECT_DOUBLE_EQ(back[i], psi[i]);
  }
  EXPECT_THROW(ParticleHoleMap(*modes, build_fermi_ball(L, 27, Spin::up).momenta, down.momenta), ParameterError);
}

TEST(ParticleHole, ConjugatesCreationOnBall) {
  // R a*_k R* = a_k for k in the ball and a*_k otherwise, checked on the full Fock space.
  auto modes = std::make_shared<const ModeSet>(3.0, std::vector<IntVec3>{{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}},
                                               std::vector<IntVec3>{{0, 0, 0}, {0, 1, 0}, {0, -1, 0}});
  const auto space = build_fock_space(modes);
  const auto up = build_fermi_ball(3.0, 1, Spin::up);
  const auto down = build_fermi_ball(3.0, 1, Spin::down);
  const ParticleHoleMap r(*modes, up, down);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(64, 64);
  for (std::size_t j = 0; j < 64; ++j) {
    std::vector<double> e(64, 0.0);
    e[j] = 1.0;
    const auto col = r.apply(space, space, e);
    for (std::size_t i = 0; i < 64; ++i) R(Eigen::Index(i), Eigen::Index(j)) = col[i];
  }
  EXPECT_NEAR((R.transpose() * R - Eigen::MatrixXd::Identity(64, 64)).norm(), 0.0, 1e-14);
  for (int j = 0; j < 6; ++j) {
    const Eigen::MatrixXd a = oracle::jw_annihilator(6, j);
    const bool in_ball = j == 0 || j == 3;
    const Eigen::MatrixXd lhs = R * a.transpose() * R.transpose();
    EXPECT_NEAR((lhs - (in_ball ? a : Eigen::MatrixXd(a.transpose()))).norm(), 0.0, 1e-14) << j;
  }
}

TEST(Sparse, TripletsTransposeAndDense) {
  const auto m = SparseMatrix::from_triplets(2, 3, {{0, 1, 2.0}, {1, 2, -1.0}, {0, 1, 0.5}, {1, 0, 4.0}});
  const auto d = m.dense();
  EXPECT_EQ(d(0, 1), 2.5);
  EXPECT_EQ(d(1, 0), 4.0);
  EXPECT_EQ(d(1, 2), -1.0);
  EXPECT_EQ(m.transpose().dense(), d.transpose());
  const auto y = m.apply({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(y[0], 5.0);
  EXPECT_DOUBLE_EQ(y[1], 1.0);
  EXPECT_DOUBLE_EQ(m.norm_inf(), 5.0);
  EXPECT_EQ((m + m.scaled(-1.0)).norm_inf(), 0.0);
}

TEST(Spectral, LanczosAgreesWithDense) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  const std::size_t n = 300;
  std::vector<Triplet> t;
  for (std::uint32_t i = 0; i < n; ++i) {
    t.push_back({i, i, double(i % 17) * 0.3});
    for (int k = 0; k < 3; ++k) {
      const auto j = std::uint32_t(rng() % n);
      const double x = g(rng);
      t.push_back({i, j, x});
      t.push_back({j, i, x});
    }
  }
  const auto h = SparseMatrix::from_triplets(n, n, t);
  EXPECT_LT(h.max_asymmetry(), 1e-15);
  const auto d = dense_ground_state(h);
  const auto l = lanczos_ground_state(h);
  EXPECT_NEAR(l.E0, d.E0, 1e-10);
  EXPECT_LT(l.residual, 1e-8);
  EXPECT_NEAR(std::abs(dot(l.ground_vector, d.ground_vector)), 1.0, 1e-8);
  const auto ev = dense_eigenvalues(h);
  EXPECT_DOUBLE_EQ(ev.front(), d.E0);
  EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end()));
}

TEST(Spectral, ExponentialSeriesMatchesDense) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  const std::size_t n = 40;
  std::vector<Triplet> t;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (rng() % 4 == 0) {
        const double x = 0.3 * g(rng);
        t.push_back({i, j, x});
        t.push_back({j, i, -x});
      }
  const auto a = SparseMatrix::from_triplets(n, n, t);
  const auto v = random_unit_vector(n, rng);
  const auto s = expm_apply_series(a, v);
  const auto d = expm_apply_dense(a, v);
  EXPECT_NEAR(norm(s.value), 1.0, 1e-13);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(s.value[i], d.value[i], 1e-12);
  const Eigen::MatrixXd ref = a.dense().exp();
  for (std::size_t i = 0; i < n; ++i) {
    double x = 0.0;
    for (std::size_t j = 0; j < n; ++j) x += ref(Eigen::Index(i), Eigen::Index(j)) * v[j];
    EXPECT_NEAR(d.value[i], x, 1e-12);
  }
}

}  // namespace
}  // namespace dilute
