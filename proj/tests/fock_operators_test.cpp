// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "dilute/fock_ed.hpp"
#include "dilute/scattering.hpp"
#include "oracles.hpp"

namespace dilute {
namespace {

std::uint64_t to_mask(const Word& w) {
  std::uint64_t s = 0;
  for (auto i : w) s |= std::uint64_t(1) << i;
  return s;
}

std::vector<oracle::BitMode> bit_modes(const ModeSet& m) {
  std::vector<oracle::BitMode> out;
  for (const auto& md : m.modes()) out.push_back({{md.n.x, md.n.y, md.n.z}, md.spin == Spin::up ? 0 : 1});
  return out;
}

struct Fixture {
  double L;
  RadialPotential v;
  std::shared_ptr<const ModeSet> modes;
  FermiBall up, down;
  OperatorContext ctx;
  ParticleHoleMap r;

  Fixture(double L_, RadialPotential v_, long cut, long n_up, long n_down)
      : L(L_),
        v(std::move(v_)),
        modes(std::make_shared<const ModeSet>(ModeSet::from_cutoff(L_, cut, cut))),
        up(build_fermi_ball(L_, n_up, Spin::up)),
        down(build_fermi_ball(L_, n_down, Spin::down)),
        ctx(modes, up, down, v),
        r(*modes, up, down) {}
};

TEST(Hamiltonian, MatchesBitmaskOracle) {
  const double v0 = 4.0, r0 = 1.2;
  Fixture f(5.0, RadialPotential::square_well(v0, r0), 1, 1, 1);
  const auto sector = build_sector(f.modes, 2, 1);
  const auto h = build_operator(f.ctx, OperatorKind::hamiltonian, sector);
  EXPECT_LT(h.max_asymmetry(), 1e-14);
  std::mt19937_64 rng(17);
  const auto vhat = [&](double p) { return oracle::square_well_vhat(v0, r0, p); };
  for (int k = 0; k < 3; ++k) {
    const auto psi = random_unit_vector(sector.dim(), rng);
    oracle::BitVector bv;
    for (std::size_t i = 0; i < sector.dim(); ++i) bv[to_mask(sector.word(i))] = psi[i];
    const auto ref = oracle::apply_hamiltonian(bit_modes(*f.modes), f.L, vhat, bv);
    const auto hpsi = h.apply(psi);
    double diff = 0.0;
    for (std::size_t i = 0; i < sector.dim(); ++i) {
      auto it = ref.find(to_mask(sector.word(i)));
      diff = std::max(diff, std::abs(hpsi[i] - (it == ref.end() ? 0.0 : it->second)));
    }
    EXPECT_LT(diff, 1e-12);
    EXPECT_NEAR(dot(psi, hpsi), oracle::bit_inner(bv, ref), 1e-12);
  }
}

TEST(Hamiltonian, ConservesMomentum) {
  Fixture f(6.0, RadialPotential::smooth_bump(2.0, 1.0), 2, 1, 1);
  const auto all = build_sector(f.modes, 1, 1);
  const auto h = build_operator(f.ctx, OperatorKind::hamiltonian, all);
  for (const auto& t : h.triplets())
    EXPECT_EQ(word_momentum(all.word(t.row), *f.modes), word_momentum(all.word(t.col), *f.modes));
  const auto p0 = build_sector(f.modes, 1, 1, IntVec3{});
  const auto hp = build_operator(f.ctx, OperatorKind::hamiltonian, p0);
  // Restricting to a momentum sector loses nothing: eigenvalues appear in the full spectrum.
  const auto ev_full = dense_eigenvalues(h);
  const auto ev_p = dense_eigenvalues(hp);
  for (double e : ev_p) {
    double best = 1e300;
    for (double x : ev_full) best = std::min(best, std::abs(x - e));
    EXPECT_LT(best, 1e-10);
  }
}

TEST(Hamiltonian, EnergyAtLeastKineticForRepulsion) {
  Fixture f(6.0, RadialPotential::square_well(1.0, 1.0), 1, 1, 1);
  const auto sector = build_sector(f.modes, 2, 2);
  const auto h = build_operator(f.ctx, OperatorKind::hamiltonian, sector);
  const auto kin = build_operator(f.ctx, OperatorKind::kinetic, sector);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 5; ++k) {
    const auto psi = random_unit_vector(sector.dim(), rng);
    EXPECT_GE(expectation(h, psi), expectation(kin, psi) - 1e-12);
  }
}

TEST(HfIdentity, RandomStatesAndFilledBalls) {
  for (const auto& v : {RadialPotential::square_well(5.0, 1.5), RadialPotential::zero()}) {
    Fixture f(6.0, v, 1, 1, 1);
    const auto sector = build_sector(f.modes, 1, 1);
    const HfIdentityChecker chk(f.ctx, f.r, sector);
    std::mt19937_64 rng(4);
    for (int k = 0; k < 4; ++k) EXPECT_LT(chk.check(random_unit_vector(sector.dim(), rng)).residual, 1e-10);
    std::vector<double> ffg(sector.dim(), 0.0);
    ffg[*sector.find(f.r.ffg_word())] = 1.0;
    const auto res = chk.check(ffg);
    EXPECT_LT(res.residual, 1e-12);
    EXPECT_NEAR(res.energy, f.ctx.hf_energy(), 1e-12);
    EXPECT_NEAR(res.h0 + res.x + res.q, 0.0, 1e-12);
  }
}

TEST(HfIdentity, HartreeFockEnergyByDirectSum) {
  const double v0 = 2.0, r0 = 1.0, L = 6.0;
  Fixture f(L, RadialPotential::square_well(v0, r0), 1, 7, 1);
  const double u = kTwoPi / L;
  double kin = 0.0, ex = 0.0;
  for (const auto& k : f.up.momenta) {
    kin += u * u * double(k.norm2());
    for (const auto& q : f.up.momenta) ex += oracle::square_well_vhat(v0, r0, u * std::sqrt(double((k - q).norm2())));
  }
  ex += oracle::square_well_vhat(v0, r0, 0.0);
  const double direct = 0.5 * oracle::square_well_vhat(v0, r0, 0.0) * 64.0 / (L * L * L);
  EXPECT_NEAR(f.ctx.hf_energy(), kin + direct - 0.5 * ex / (L * L * L), 1e-12);
}

TEST(QOperators, PositivityParityVacuum) {
  Fixture f(6.0, RadialPotential::square_well(5.0, 1.5), 1, 1, 1);
  const auto image = f.r.image_sector(build_sector(f.modes, 1, 1));
  const auto d = q_operator_diagnostics(f.ctx, image, 10, 3);
  EXPECT_GE(d.q1_min_eig, -1e-12);
  EXPECT_LT(d.q3_parity_max, 1e-12);
  EXPECT_LT(d.vacuum_max, 1e-12);
  EXPECT_EQ(d.dim, image.dim());
}

// <psi, [b_p, b*_q] psi> with b_p = sum_{k in ball, k+p outside} a_{k+p} a_k, from bitmask operators.
double commutator_oracle(const ModeSet& m, const FermiBall& bp, const IntVec3& p, const FermiBall& bq,
                         const IntVec3& q, const oracle::BitVector& psi) {
  using Pairs = std::vector<std::pair<int, int>>;  // (out, in): a_out a_in
  auto pairs = [&](const FermiBall& b, const IntVec3& s) {
    Pairs out;
    for (const auto& k : b.momenta) {
      if (b.contains(k + s)) continue;
      auto i = m.index(b.spin, k);
      auto o = m.index(b.spin, k + s);
      if (i && o) out.push_back({int(*o), int(*i)});
    }
    return out;
  };
  auto apply = [](const Pairs& ps, bool dagger, const oracle::BitVector& x) {
    oracle::BitVector y;
    for (const auto& [s0, c] : x)
      for (const auto& [o, i] : ps) {
        std::uint64_t s = s0;
        int sg = 1;
        if (dagger) {
          sg *= oracle::bit_create(s, o);
          if (sg) sg *= oracle::bit_create(s, i);
        } else {
          sg *= oracle::bit_annihilate(s, i);
          if (sg) sg *= oracle::bit_annihilate(s, o);
        }
        if (sg) y[s] += sg * c;
      }
    return y;
  };
  const auto P = pairs(bp, p), Q = pairs(bq, q);
  return oracle::bit_inner(psi, apply(P, false, apply(Q, true, psi))) -
         oracle::bit_inner(psi, apply(Q, true, apply(P, false, psi)));
}

TEST(PseudoBosons, CommutatorThreeRoutes) {
  const double L = 5.0;
  const auto modes = std::make_shared<const ModeSet>(ModeSet::from_cutoff(L, 2, 2));
  const auto up = build_fermi_ball(L, 7, Spin::up);
  const auto down = build_fermi_ball(L, 7, Spin::down);
  std::mt19937_64 rng(21);
  const auto sector = build_sector(modes, 6, 1, IntVec3{});
  const auto psi = random_unit_vector(sector.dim(), rng);
  const auto fv = to_fock_vector(sector, psi);
  oracle::BitVector bv;
  for (std::size_t i = 0; i < sector.dim(); ++i) bv[to_mask(sector.word(i))] = psi[i];
  const std::vector<IntVec3> ps{{1, 0, 0}, {-1, 0, 0}, {0, 1, 1}, {1, 1, 0}};
  for (const auto& p : ps)
    for (const auto& q : ps)
      for (const FermiBall* bq : {&up, &down}) {
        const auto brute = pseudo_boson_commutator(*modes, up, p, *bq, q, fv);
        const double formula = pseudo_boson_commutator_formula(*modes, up, p, *bq, q, fv);
        const double ref = commutator_oracle(*modes, up, p, *bq, q, bv);
        EXPECT_NEAR(brute.b_bdag, ref, 1e-12);
        EXPECT_NEAR(formula, ref, 1e-12);
        EXPECT_LT(brute.b_b, 1e-12);
        if (bq == &down) {
          EXPECT_NEAR(ref, 0.0, 1e-14);
        }
      }
}

struct PhiFixture : Fixture {
  PhiFixture(long cut) : Fixture(8.0, RadialPotential::smooth_bump(1.0, 1.0), cut, 1, 1) {
    ctx.set_phi(PeriodizedPhi(neumann_profile_matched(v, 2.0, 4000), 8.0, 10.0));
  }
};

TEST(CorrelationOperator, UnitaryAndSeriesMatchesDense) {
  PhiFixture f(2);
  const auto sector = build_sector(f.modes, 1, 1, IntVec3{});
  const CorrelationStructure t(f.ctx, f.r.image_sector(sector));
  EXPECT_LT((t.generator() + t.generator().transpose()).norm_inf(), 1e-15);
  const auto vac = t.vacuum();
  const auto s = t.apply(1.0, vac, true);
  const auto d = expm_apply_dense(t.generator(), vac);
  EXPECT_NEAR(norm(s.value), 1.0, 1e-13);
  for (std::size_t i = 0; i < vac.size(); ++i) EXPECT_NEAR(s.value[i], d.value[i], 1e-12);
  EXPECT_EQ(t.apply(0.0, vac).value, vac);
}

TEST(CorrelationOperator, TrialStateBetweenGroundAndHartreeFock) {
  for (long cut : {2L, 3L}) {
    PhiFixture f(cut);
    const auto sector = build_sector(f.modes, 1, 1, IntVec3{});
    const auto h = build_operator(f.ctx, OperatorKind::hamiltonian, sector);
    const auto gs = ground_state(h);
    const auto trial = trial_state_energy(f.ctx, f.r, sector, h);
    EXPECT_NEAR(trial.norm, 1.0, 1e-12);
    EXPECT_LE(gs.E0, trial.energy + 1e-12);
    EXPECT_LE(trial.energy, trial.e_hf + 1e-12);
  }
}

TEST(CorrelationOperator, ResidualTermsVanishWithoutKernel) {
  PhiFixture f(2);
  const auto image = f.r.image_sector(build_sector(f.modes, 1, 1, IntVec3{}));
  std::mt19937_64 rng(8);
  const auto xi = random_unit_vector(image.dim(), rng);
  const auto with = t_operator_residual(f.ctx, image, xi);
  EXPECT_GT(std::abs(with.t1) + std::abs(with.t2), 0.0);
  f.ctx.set_phi(PeriodizedPhi(neumann_profile_matched(f.v, 2.0, 4000), 8.0, 10.0), 0.0);
  const auto without = t_operator_residual(f.ctx, image, xi);
  EXPECT_EQ(without.t1, 0.0);
  EXPECT_EQ(without.t2, 0.0);
}

TEST(CorrelationOperator, SpinSectorsDecouple) {
  PhiFixture f(2);
  const auto image = f.r.image_sector(build_sector(f.modes, 1, 1, IntVec3{}));
  std::mt19937_64 rng(12);
  const auto xi = random_unit_vector(image.dim(), rng);
  const auto s = spin_sector_orthogonality(f.ctx, image, xi);
  EXPECT_LT(s.commutator_norm, 1e-12);
}

TEST(TwoBody, GroundEnergyMatchesRelativeMotionMatrix) {
  const double L = 8.0;
  const auto v = RadialPotential::smooth_bump(1.0, 1.0);
  Fixture f(L, v, 16, 1, 1);
  const auto sector = build_sector(f.modes, 1, 1, IntVec3{});
  const auto gs = ground_state(build_operator(f.ctx, OperatorKind::hamiltonian, sector));
  std::map<double, double> cache;
  const auto vhat = [&](double p) {
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    const double x = 4.0 * oracle::kPi *
                     oracle::simpson([&](double r) { return p == 0.0 ? r * r * v(r) : r * std::sin(p * r) * v(r) / p; },
                                     0.0, 1.0, 4000);
    return cache[p] = x;
  };
  const double ref = oracle::two_body_ground_energy(L, 16, vhat);
  EXPECT_NEAR(gs.E0, ref, 1e-11 * std::abs(ref));
}

}  // namespace
}  // namespace dilute
