// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "dilute/errors.hpp"
#include "dilute/fock/field_terms.hpp"
#include "dilute/fock/operators.hpp"
#include "dilute/fock/particle_hole.hpp"
#include "dilute/fock/sector.hpp"
#include "dilute/fock/spectral.hpp"
#include "dilute/fock/sparse.hpp"

namespace dilute {

inline std::vector<double> random_unit_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  const double s = norm(v);
  for (auto& x : v) x /= s;
  return v;
}

struct HfIdentityResult {
  double energy = 0.0;  // <psi, H psi>
  double e_hf = 0.0;
  double h0 = 0.0;
  double x = 0.0;
  double q = 0.0;
  double residual = 0.0;
};

// Compares <psi, H psi> with E_HF + <R* psi, (H0 + X + Q) R* psi> on one sector.
class HfIdentityChecker {
 public:
  HfIdentityChecker(const OperatorContext& ctx, const ParticleHoleMap& r, const FockSector& sector)
      : r_(r), sector_(sector), image_(r.image_sector(sector)) {
    h_ = build_operator(ctx, OperatorKind::hamiltonian, sector_, &report_);
    h0_ = build_operator(ctx, OperatorKind::h0, image_);
    x_ = build_operator(ctx, OperatorKind::x, image_, &report_);
    q_ = build_operator_sum(ctx, {OperatorKind::q1, OperatorKind::q2, OperatorKind::q3, OperatorKind::q4}, image_,
                            &report_);
    e_hf_ = ctx.hf_energy();
  }

  const FockSector& sector() const { return sector_; }
  const FockSector& image() const { return image_; }
  const TruncationReport& truncation() const { return report_; }

  HfIdentityResult check(const std::vector<double>& psi) const {
    HfIdentityResult res;
    const auto xi = r_.apply_adjoint(sector_, image_, psi);
    res.energy = expectation(h_, psi);
    res.e_hf = e_hf_;
    res.h0 = expectation(h0_, xi);
    res.x = expectation(x_, xi);
    res.q = expectation(q_, xi);
    res.residual = std::abs(res.energy - res.e_hf - res.h0 - res.x - res.q);
    return res;
  }

 private:
  const ParticleHoleMap& r_;
  FockSector sector_, image_;
  SparseMatrix h_, h0_, x_, q_;
  double e_hf_ = 0.0;
  TruncationReport report_;
};

inline HfIdentityResult hf_identity_check(const OperatorContext& ctx, const ParticleHoleMap& r,
                                          const FockSector& sector, const std::vector<double>& psi) {
  return HfIdentityChecker(ctx, r, sector).check(psi);
}

struct QDiagnostics {
  double q1_min_eig = 0.0;
  double q1_tilde_min_eig = 0.0;
  double q1_minus_q1_tilde_min = 0.0;  // min over random unit vectors
  double q3_parity_max = 0.0;          // max |<psi, Q3 psi>| on 4k-supported vectors
  double vacuum_max = 0.0;             // max_i |<0, Q_i 0>|
  std::size_t dim = 0;
};

inline double min_eigenvalue(const SparseMatrix& m, std::uint64_t seed = 1) {
  if (m.rows() <= kDenseLimit) return dense_eigenvalues(m).front();
  return lanczos_ground_state(m, 1e-12, 600, seed).E0;
}

// `space` is a set of words in the particle-hole frame.
inline QDiagnostics q_operator_diagnostics(const OperatorContext& ctx, const FockSector& space, int samples = 20,
                                           std::uint64_t seed = 1) {
  QDiagnostics d;
  d.dim = space.dim();
  const auto q1 = build_operator(ctx, OperatorKind::q1, space);
  const auto q1t = build_operator(ctx, OperatorKind::q1_tilde, space);
  const auto q3 = build_operator(ctx, OperatorKind::q3, space);
  d.q1_min_eig = min_eigenvalue(q1, seed);
  d.q1_tilde_min_eig = min_eigenvalue(q1t, seed);
  std::mt19937_64 rng(seed);
  d.q1_minus_q1_tilde_min = std::numeric_limits<double>::infinity();
  const auto diff = q1 - q1t;
  std::vector<std::size_t> four_k;
  for (std::size_t i = 0; i < space.dim(); ++i)
    if (space.word(i).size() % 4 == 0) four_k.push_back(i);
  for (int s = 0; s < samples; ++s) {
    const auto v = random_unit_vector(space.dim(), rng);
    d.q1_minus_q1_tilde_min = std::min(d.q1_minus_q1_tilde_min, expectation(diff, v));
    if (!four_k.empty()) {
      const auto c = random_unit_vector(four_k.size(), rng);
      std::vector<double> psi(space.dim(), 0.0);
      for (std::size_t i = 0; i < four_k.size(); ++i) psi[four_k[i]] = c[i];
      d.q3_parity_max = std::max(d.q3_parity_max, std::abs(expectation(q3, psi)));
    }
  }
  if (auto vac = space.find(Word{})) {
    for (auto k : {OperatorKind::q1, OperatorKind::q2, OperatorKind::q3, OperatorKind::q4, OperatorKind::q1_tilde,
                   OperatorKind::q2_tilde, OperatorKind::q3_tilde, OperatorKind::q4_tilde}) {
      std::vector<double> e(space.dim(), 0.0);
      e[*vac] = 1.0;
      d.vacuum_max = std::max(d.vacuum_max, std::abs(expectation(build_operator(ctx, k, space), e)));
    }
  }
  return d;
}

// Unnormalised pair operator b_{p,s} = sum_{k in ball, k+p not in ball} a_{k+p,s} a_{k,s}.
inline std::vector<Monomial> pseudo_boson(const ModeSet& modes, const FermiBall& ball, const IntVec3& p) {
  std::vector<Monomial> out;
  for (const auto& k : ball.momenta) {
    const IntVec3 kp = k + p;
    if (ball.contains(kp)) continue;
    auto i = modes.index(ball.spin, kp);
    auto j = modes.index(ball.spin, k);
    if (!i || !j) continue;
    out.push_back({1.0, {{*i, false}, {*j, false}}});
  }
  return out;
}

struct CommutatorValue {
  double b_bdag = 0.0;  // <psi, [b_p, b*_q] psi>
  double b_b = 0.0;     // norm of [b_p, b_q] psi
};

inline CommutatorValue pseudo_boson_commutator(const ModeSet& modes, const FermiBall& ball_p, const IntVec3& p,
                                               const FermiBall& ball_q, const IntVec3& q, const FockVector& psi) {
  const auto bp = pseudo_boson(modes, ball_p, p);
  const auto bq = pseudo_boson(modes, ball_q, q);
  const auto bq_dag = adjoint(bq);
  CommutatorValue c;
  const auto x1 = apply_monomials(bp, apply_monomials(bq_dag, psi));
  const auto x2 = apply_monomials(bq_dag, apply_monomials(bp, psi));
  c.b_bdag = inner(psi, x1) - inner(psi, x2);
  auto y = apply_monomials(bp, apply_monomials(bq, psi));
  for (const auto& [w, v] : apply_monomials(bq, apply_monomials(bp, psi))) y[w] -= v;
  double s = 0.0;
  for (const auto& [w, v] : y) s += v * v;
  c.b_b = std::sqrt(s);
  return c;
}

// <psi, [b_p, b*_q] psi> from the normal-ordered contraction formula
//   delta_pq |S_p| - sum_{k in S_p, k' in S_q} (delta_kk' a*_{k'+q} a_{k+p} + delta_{k+p,k'+q} a*_k' a_k)
// with S_p = {k in ball : k + p outside ball}.
inline double pseudo_boson_commutator_formula(const ModeSet& modes, const FermiBall& ball_p, const IntVec3& p,
                                              const FermiBall& ball_q, const IntVec3& q, const FockVector& psi) {
  if (ball_p.spin != ball_q.spin) return 0.0;
  auto support = [&](const FermiBall& b, const IntVec3& s) {
    std::vector<IntVec3> out;
    for (const auto& k : b.momenta)
      if (!b.contains(k + s) && modes.index(b.spin, k + s) && modes.index(b.spin, k)) out.push_back(k);
    return out;
  };
  const auto sp = support(ball_p, p);
  const auto sq = support(ball_q, q);
  const Spin s = ball_p.spin;
  std::vector<Monomial> ops;
  for (const auto& k : sp)
    for (const auto& k2 : sq) {
      if (k == k2) ops.push_back({1.0, {{*modes.index(s, k2 + q), true}, {*modes.index(s, k + p), false}}});
      if (k + p == k2 + q) ops.push_back({1.0, {{*modes.index(s, k2), true}, {*modes.index(s, k), false}}});
    }
  const double c = p == q ? double(sp.size()) : 0.0;
  return c * inner(psi, psi) - inner(psi, apply_monomials(ops, psi));
}

// T_lambda = exp(lambda (B - B*)) on a space closed under B (particle-hole frame).
class CorrelationStructure {
 public:
  CorrelationStructure(const OperatorContext& ctx, FockSector space) : space_(std::move(space)) {
    b_ = build_operator(ctx, OperatorKind::b, space_, &report_);
    a_ = b_ - b_.transpose();
  }

  const FockSector& space() const { return space_; }
  const SparseMatrix& b() const { return b_; }
  const SparseMatrix& generator() const { return a_; }
  const TruncationReport& truncation() const { return report_; }

  ExpmResult apply(double lambda, const std::vector<double>& psi, bool force_series = false) const {
    if (lambda == 0.0) return {psi, 0, 0.0, false};
    const auto g = a_.scaled(lambda);
    return force_series ? expm_apply_series(g, psi) : expm_apply(g, psi);
  }

  std::vector<double> vacuum() const {
    auto i = space_.find(Word{});
    if (!i) throw ParameterError("CorrelationStructure: space does not contain the vacuum");
    std::vector<double> e(space_.dim(), 0.0);
    e[*i] = 1.0;
    return e;
  }

 private:
  FockSector space_;
  SparseMatrix b_, a_;
  TruncationReport report_;
};

struct TrialStateResult {
  double energy = 0.0;  // <R T Omega, H R T Omega>
  double e_hf = 0.0;
  double norm = 0.0;
  std::vector<double> state;       // R T Omega on the original sector
  std::vector<double> transformed; // T Omega on the particle-hole image
};

// `sector` must contain the filled-ball word; h is H on that sector.
inline TrialStateResult trial_state_energy(const OperatorContext& ctx, const ParticleHoleMap& r,
                                           const FockSector& sector, const SparseMatrix& h, double lambda = 1.0) {
  if (!sector.find(r.ffg_word())) throw ParameterError("trial_state_energy: sector lacks the filled-ball word");
  CorrelationStructure t(ctx, r.image_sector(sector));
  TrialStateResult res;
  res.transformed = t.apply(lambda, t.vacuum()).value;
  res.state = r.apply(t.space(), sector, res.transformed);
  res.norm = norm(res.state);
  res.energy = expectation(h, res.state);
  res.e_hf = ctx.hf_energy();
  return res;
}

struct TResidual {
  double t1 = 0.0, t2 = 0.0, q4r = 0.0;
  double total() const { return t1 + t2 + q4r; }
};

inline TResidual t_operator_residual(const OperatorContext& ctx, const FockSector& space,
                                     const std::vector<double>& xi) {
  TResidual r;
  r.t1 = expectation(build_operator(ctx, OperatorKind::t1, space), xi);
  r.t2 = expectation(build_operator(ctx, OperatorKind::t2, space), xi);
  r.q4r = expectation(build_operator(ctx, OperatorKind::q4_r, space), xi);
  return r;
}

struct SpinOrthogonality {
  double spin_norm = 0.0;        // ||S psi||
  double aligned_overlap = 0.0;  // |<psi, Q4^ psi>| with Q4^ psi in the enlarged space
  double commutator_norm = 0.0;  // max ||[B, S] v|| over random v
};

inline SpinOrthogonality spin_sector_orthogonality(const OperatorContext& ctx, const FockSector& space,
                                                   const std::vector<double>& psi, int samples = 5,
                                                   std::uint64_t seed = 1) {
  SpinOrthogonality out;
  const auto s = build_operator(ctx, OperatorKind::spin, space);
  out.spin_norm = norm(s.apply(psi));
  const FockSector big = reachable_space(ctx, OperatorKind::q4_aligned, space);
  const auto q = build_operator_between(ctx, OperatorKind::q4_aligned, space, big);
  const auto qpsi = q.apply(psi);
  double ov = 0.0;
  for (std::size_t i = 0; i < space.dim(); ++i)
    if (auto j = big.find(space.word(i))) ov += psi[i] * qpsi[*j];
  out.aligned_overlap = std::abs(ov);
  const auto b = build_operator(ctx, OperatorKind::b, space);
  std::mt19937_64 rng(seed);
  for (int k = 0; k < samples; ++k) {
    const auto v = random_unit_vector(space.dim(), rng);
    auto x = b.apply(s.apply(v));
    const auto y = s.apply(b.apply(v));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
    out.commutator_norm = std::max(out.commutator_norm, norm(x));
  }
  return out;
}

}  // namespace dilute
