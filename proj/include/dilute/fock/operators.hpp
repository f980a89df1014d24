// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dilute/errors.hpp"
#include "dilute/fermi_gas.hpp"
#include "dilute/fock/field_terms.hpp"
#include "dilute/fock/mode_set.hpp"
#include "dilute/fock/sector.hpp"
#include "dilute/fock/sparse.hpp"
#include "dilute/potential.hpp"
#include "dilute/scattering/fourier.hpp"

namespace dilute {

enum class OperatorKind {
  hamiltonian,
  kinetic,
  h0,
  x,
  q1,
  q2,
  q3,
  q4,
  q1_tilde,
  q2_tilde,
  q3_tilde,
  q4_tilde,
  q4_aligned,
  q4_r,
  t1,
  t2,
  b,
  number,
  spin,
};

inline const char* operator_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::hamiltonian: return "H";
    case OperatorKind::kinetic: return "kinetic";
    case OperatorKind::h0: return "H0";
    case OperatorKind::x: return "X";
    case OperatorKind::q1: return "Q1";
    case OperatorKind::q2: return "Q2";
    case OperatorKind::q3: return "Q3";
    case OperatorKind::q4: return "Q4";
    case OperatorKind::q1_tilde: return "Q1~";
    case OperatorKind::q2_tilde: return "Q2~";
    case OperatorKind::q3_tilde: return "Q3~";
    case OperatorKind::q4_tilde: return "Q4~";
    case OperatorKind::q4_aligned: return "Q4^";
    case OperatorKind::q4_r: return "Q4~r";
    case OperatorKind::t1: return "T1";
    case OperatorKind::t2: return "T2";
    case OperatorKind::b: return "B";
    case OperatorKind::number: return "N";
    case OperatorKind::spin: return "S";
  }
  return "?";
}

inline bool is_hermitian(OperatorKind k) { return k != OperatorKind::b; }

// Coefficient tables shared by every operator on one mode set.
class OperatorContext {
 public:
  OperatorContext(std::shared_ptr<const ModeSet> modes, const FermiBall& ball_up, const FermiBall& ball_down,
                  RadialPotential v)
      : modes_(std::move(modes)), v_(std::move(v)) {
    const ModeSet& m = *modes_;
    if (std::abs(ball_up.L - m.L()) > 1e-12 * m.L() || std::abs(ball_down.L - m.L()) > 1e-12 * m.L())
      throw ParameterError("OperatorContext: balls and modes use different box lengths");
    balls_[0] = ball_up;
    balls_[1] = ball_down;
    for (const auto* b : {&ball_up, &ball_down})
      for (const auto& n : b->momenta)
        if (!m.index(b->spin, n)) throw ParameterError("OperatorContext: Fermi ball not contained in the mode set");
    long comp = 0;
    for (const auto& md : m.modes()) comp = std::max({comp, long(std::abs(md.n.x)), long(std::abs(md.n.y)), long(std::abs(md.n.z))});
    half_width_ = int(2 * comp);
    const long vmax = 3L * (3 * comp) * (3 * comp);
    vhat_.resize(std::size_t(vmax + 1));
    for (long n2 = 0; n2 <= vmax; ++n2)
      vhat_[std::size_t(n2)] = v_.is_zero() ? 0.0 : fourier_transform_radial(v_, m.unit() * std::sqrt(double(n2)));
    u_.resize(m.size());
    v_mult_.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto& md = m.mode(i);
      const bool in = ball(md.spin).contains(md.n);
      u_[i] = in ? 0.0 : 1.0;
      v_mult_[i] = in ? 1.0 : 0.0;
    }
    ur_ = u_;
    vr_ = v_mult_;
    vhat_w_ = WeightTable(half_width_, [&](const IntVec3& p) { return vhat(p); });
    for (int s = 0; s < 2; ++s) {
      const auto& b = balls_[s];
      x_w_[s] = WeightTable(half_width_, [&](const IntVec3& p) {
        double t = 0.0;
        for (const auto& q : b.momenta) t += vhat(p - q);
        return t / m.volume();
      });
    }
    zero_w_ = WeightTable(half_width_, [](const IntVec3&) { return 0.0; });
    phi_w_ = t1_w_ = t2_w_ = zero_w_;
  }

  const ModeSet& modes() const { return *modes_; }
  const std::shared_ptr<const ModeSet>& mode_set() const { return modes_; }
  const FermiBall& ball(Spin s) const { return balls_[s == Spin::up ? 0 : 1]; }
  const RadialPotential& potential() const { return v_; }
  double mu(Spin s) const { return ball(s).mu(); }
  double vhat(const IntVec3& p) const { return vhat_.at(std::size_t(p.norm2())); }
  bool has_phi() const { return has_phi_; }

  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& v() const { return v_mult_; }
  const std::vector<double>& ur() const { return ur_; }
  const std::vector<double>& vr() const { return vr_; }

  // Correlation kernel phi with an overall scale (scale 0 switches it off).
  void set_phi(const PeriodizedPhi& phi, double scale = 1.0) {
    const ModeSet& m = *modes_;
    const auto& sol = phi.solution();
    if (std::abs(phi.box_length() - m.L()) > 1e-12 * m.L())
      throw ParameterError("OperatorContext: phi uses a different box length");
    phi_w_ = WeightTable(half_width_, [&](const IntVec3& p) { return scale * phi.coefficient(p); });
    t1_w_ = WeightTable(half_width_, [&](const IntVec3& p) {
      return scale * 2.0 * m.unit() * m.unit() * double(p.norm2()) * phi.coefficient(p);
    });
    // (V phi)^ by Simpson on the solution mesh.
    std::vector<double> vphi(std::size_t(3L * half_width_ * half_width_ + 1));
    const std::size_t M = sol.r.size() - 1;
    const double h = sol.spacing();
    for (std::size_t n2 = 0; n2 < vphi.size(); ++n2) {
      const double p = m.unit() * std::sqrt(double(n2));
      auto g = [&](std::size_t i) {
        const double r = sol.r[i];
        const double w = r * v_(r) * (1.0 - sol.f[i]);
        return p == 0.0 ? r * w : w * std::sin(p * r) / p;
      };
      const std::size_t even = M - (M % 2);
      double s = g(0) + g(even);
      for (std::size_t i = 1; i < even; ++i) s += (i % 2 ? 4.0 : 2.0) * g(i);
      s *= h / 3.0;
      if (even != M) s += 0.5 * h * (g(even) + g(M));
      vphi[n2] = 4.0 * std::numbers::pi * s;
    }
    t2_w_ = WeightTable(half_width_, [&](const IntVec3& p) { return scale * vphi[std::size_t(p.norm2())]; });
    has_phi_ = scale != 0.0;
  }

  // Smooth multipliers ur, vr in place of the sharp ball projections.
  void set_regularized(const RegularizedKernels& ker) {
    const ModeSet& m = *modes_;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double k = m.unit() * std::sqrt(double(m.mode(i).n.norm2()));
      ur_[i] = ker.u_hat(k);
      vr_[i] = ker.v_hat(k);
    }
  }

  const WeightTable& vhat_weight() const { return vhat_w_; }
  const WeightTable& x_weight(Spin s) const { return x_w_[s == Spin::up ? 0 : 1]; }
  const WeightTable& phi_weight() const { return phi_w_; }
  const WeightTable& t1_weight() const { return t1_w_; }
  const WeightTable& t2_weight() const { return t2_w_; }

  // Kinetic + direct + exchange energy of the filled balls.
  double hf_energy() const {
    const double L3 = modes_->volume();
    const double u2 = modes_->unit() * modes_->unit();
    double kin = 0.0, exch = 0.0;
    for (const auto& b : balls_) {
      for (const auto& k : b.momenta) kin += u2 * double(k.norm2());
      for (const auto& k : b.momenta)
        for (const auto& q : b.momenta) exch += vhat(k - q);
    }
    const double n = double(balls_[0].N() + balls_[1].N());
    return kin + 0.5 * vhat(IntVec3{}) * n * n / L3 - 0.5 * exch / L3;
  }

 private:
  std::shared_ptr<const ModeSet> modes_;
  RadialPotential v_;
  std::array<FermiBall, 2> balls_;
  int half_width_ = 0;
  std::vector<double> vhat_;
  std::vector<double> u_, v_mult_, ur_, vr_;
  WeightTable vhat_w_, zero_w_, phi_w_, t1_w_, t2_w_;
  std::array<WeightTable, 2> x_w_;
  bool has_phi_ = false;
};

struct OperatorTerms {
  std::vector<FieldTerm> terms;
  bool add_adjoint = false;
};

inline OperatorTerms operator_terms(const OperatorContext& ctx, OperatorKind kind) {
  OperatorTerms out;
  const auto* u = &ctx.u();
  const auto* v = &ctx.v();
  const auto* ur = &ctx.ur();
  const auto* vr = &ctx.vr();
  const auto* W = &ctx.vhat_weight();
  auto spins = [&](bool same, bool different, auto&& fn) {
    for (Spin s : {Spin::up, Spin::down})
      for (Spin t : {Spin::up, Spin::down})
        if ((s == t && same) || (s != t && different)) fn(s, t);
  };
  auto& T = out.terms;
  switch (kind) {
    case OperatorKind::hamiltonian:
      spins(true, true, [&](Spin s, Spin t) {
        T.push_back({0.5, {field_adag(s, 0), field_adag(t, 1), field_a(t, 1), field_a(s, 0)}, W});
      });
      break;
    case OperatorKind::x:
      for (Spin s : {Spin::up, Spin::down}) {
        T.push_back({-1.0, {field_adag(s, 0, u), field_a(s, 1, u)}, &ctx.x_weight(s)});
        T.push_back({1.0, {field_adag_vbar(s, 1, v), field_a_vbar(s, 0, v)}, &ctx.x_weight(s)});
      }
      break;
    case OperatorKind::q1:
    case OperatorKind::q1_tilde:
      spins(kind == OperatorKind::q1, true, [&](Spin s, Spin t) {
        T.push_back({0.5, {field_adag(s, 0, u), field_adag(t, 1, u), field_a(t, 1, u), field_a(s, 0, u)}, W});
      });
      break;
    case OperatorKind::q2:
    case OperatorKind::q2_tilde:
      spins(kind == OperatorKind::q2, true, [&](Spin s, Spin t) {
        T.push_back(
            {1.0, {field_adag(s, 0, u), field_adag_vbar(s, 0, v), field_a_vbar(t, 1, v), field_a(t, 1, u)}, W});
        T.push_back(
            {-1.0, {field_adag(s, 0, u), field_adag_vbar(t, 1, v), field_a_vbar(t, 1, v), field_a(s, 0, u)}, W});
        T.push_back({0.5,
                     {field_adag_vbar(t, 1, v), field_adag_vbar(s, 0, v), field_a_vbar(s, 0, v), field_a_vbar(t, 1, v)},
                     W});
      });
      break;
    case OperatorKind::q3:
    case OperatorKind::q3_tilde:
      out.add_adjoint = true;
      spins(kind == OperatorKind::q3, true, [&](Spin s, Spin t) {
        T.push_back({-1.0, {field_adag(s, 0, u), field_adag(t, 1, u), field_adag_vbar(s, 0, v), field_a(t, 1, u)}, W});
        T.push_back(
            {1.0, {field_adag(s, 0, u), field_adag_vbar(t, 1, v), field_adag_vbar(s, 0, v), field_a_vbar(t, 1, v)}, W});
      });
      break;
    case OperatorKind::q4:
    case OperatorKind::q4_tilde:
    case OperatorKind::q4_aligned:
      out.add_adjoint = true;
      spins(kind != OperatorKind::q4_tilde, kind != OperatorKind::q4_aligned, [&](Spin s, Spin t) {
        T.push_back(
            {0.5, {field_adag(s, 0, u), field_adag(t, 1, u), field_adag_vbar(t, 1, v), field_adag_vbar(s, 0, v)}, W});
      });
      break;
    case OperatorKind::q4_r:
      out.add_adjoint = true;
      T.push_back({1.0,
                   {field_adag(Spin::up, 0, ur), field_adag(Spin::down, 1, ur), field_adag_vbar(Spin::down, 1, vr),
                    field_adag_vbar(Spin::up, 0, vr)},
                   W});
      break;
    case OperatorKind::b:
    case OperatorKind::t1:
      out.add_adjoint = kind == OperatorKind::t1;
      T.push_back({kind == OperatorKind::b ? 1.0 : -1.0,
                   {field_a(Spin::up, 0, ur), field_a_vbar(Spin::up, 0, vr), field_a(Spin::down, 1, ur),
                    field_a_vbar(Spin::down, 1, vr)},
                   kind == OperatorKind::b ? &ctx.phi_weight() : &ctx.t1_weight()});
      break;
    case OperatorKind::t2:
      out.add_adjoint = true;
      T.push_back({-1.0,
                   {field_a_vbar(Spin::up, 0, vr), field_a(Spin::up, 0, u), field_a_vbar(Spin::down, 1, vr),
                    field_a(Spin::down, 1, u)},
                   &ctx.t2_weight()});
      break;
    default:
      throw ParameterError(std::string("operator_terms: ") + operator_name(kind) + " is diagonal");
  }
  // For "+ h.c." pairs build whichever half has fewer creators.
  if (out.add_adjoint) {
    for (auto& t : T) {
      const auto creators = std::count_if(t.factors.begin(), t.factors.end(), [](auto& f) { return f.creation; });
      if (2 * creators > long(t.factors.size())) t = adjoint(t);
    }
  }
  return out;
}

inline std::function<double(const Word&)> diagonal_function(const OperatorContext& ctx, OperatorKind kind) {
  const ModeSet& m = ctx.modes();
  switch (kind) {
    case OperatorKind::kinetic:
      return [&m](const Word& w) {
        double e = 0.0;
        for (auto i : w) e += m.dispersion(i);
        return e;
      };
    case OperatorKind::h0:
      return [&m, &ctx](const Word& w) {
        double e = 0.0;
        for (auto i : w) e += std::abs(m.dispersion(i) - ctx.mu(m.mode(i).spin));
        return e;
      };
    case OperatorKind::number:
      return [](const Word& w) { return double(w.size()); };
    case OperatorKind::spin:
      return [&m](const Word& w) {
        return double(count_spin(w, m, Spin::up)) - double(count_spin(w, m, Spin::down));
      };
    default:
      return nullptr;
  }
}

// Matrix of the operator restricted to `space` (and optionally mapped into a
// larger `codomain`).
inline SparseMatrix build_operator(const OperatorContext& ctx, OperatorKind kind, const FockSector& space,
                                   TruncationReport* report = nullptr) {
  if (auto d = diagonal_function(ctx, kind)) return diagonal_matrix(space, d);
  if (&space.modes() != &ctx.modes()) throw ParameterError("build_operator: sector built on another mode set");
  const auto ot = operator_terms(ctx, kind);
  SparseMatrix m = build_field_matrix(space, space, ot.terms, report);
  if (kind == OperatorKind::hamiltonian) m = m + diagonal_matrix(space, diagonal_function(ctx, OperatorKind::kinetic));
  if (ot.add_adjoint) m = m + m.transpose();
  return m;
}

inline SparseMatrix build_operator_sum(const OperatorContext& ctx, const std::vector<OperatorKind>& kinds,
                                       const FockSector& space, TruncationReport* report = nullptr) {
  SparseMatrix total(space.dim(), space.dim());
  for (auto k : kinds) total = total + build_operator(ctx, k, space, report);
  return total;
}

// Every word reachable from `space` by one application of the operator terms,
// together with `space` itself.
inline FockSector reachable_space(const OperatorContext& ctx, OperatorKind kind, const FockSector& space,
                                  bool include_adjoint = true) {
  auto ot = operator_terms(ctx, kind);
  std::vector<FieldTerm> terms = ot.terms;
  if (ot.add_adjoint && include_adjoint)
    for (const auto& t : ot.terms) terms.push_back(adjoint(t));
  std::vector<Word> words = space.basis();
  for (const auto& t : terms) {
    detail::TermWalker walker{ctx.modes(), t, 1.0, [&](const Word& w, double) { words.push_back(w); }, {}};
    for (const auto& w : space.basis()) walker.run(w);
  }
  return FockSector(space.mode_set(), std::move(words));
}

// Full operator (both halves) from `domain` into `codomain`.
inline SparseMatrix build_operator_between(const OperatorContext& ctx, OperatorKind kind, const FockSector& domain,
                                           const FockSector& codomain, TruncationReport* report = nullptr) {
  if (auto d = diagonal_function(ctx, kind)) {
    std::vector<Triplet> t;
    for (std::size_t j = 0; j < domain.dim(); ++j)
      if (auto i = codomain.find(domain.word(j))) t.push_back({std::uint32_t(*i), std::uint32_t(j), d(domain.word(j))});
    return SparseMatrix::from_triplets(codomain.dim(), domain.dim(), std::move(t));
  }
  auto ot = operator_terms(ctx, kind);
  std::vector<FieldTerm> terms = ot.terms;
  if (ot.add_adjoint)
    for (const auto& t : ot.terms) terms.push_back(adjoint(t));
  SparseMatrix m = build_field_matrix(domain, codomain, terms, report);
  if (kind == OperatorKind::hamiltonian) {
    auto k = build_operator_between(ctx, OperatorKind::kinetic, domain, codomain);
    m = m + k;
  }
  return m;
}

}  // namespace dilute
