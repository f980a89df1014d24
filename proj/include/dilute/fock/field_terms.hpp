// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dilute/errors.hpp"
#include "dilute/fock/mode_set.hpp"
#include "dilute/fock/sector.hpp"
#include "dilute/fock/sparse.hpp"
#include "dilute/parallel.hpp"

namespace dilute {

// Translation-invariant two-point weight W(x - y), stored as its Fourier
// coefficients on a cube of lattice vectors.
class WeightTable {
 public:
  WeightTable() = default;
  WeightTable(int half_width, const std::function<double(const IntVec3&)>& fn) : d_(half_width) {
    const int s = 2 * d_ + 1;
    values_.resize(std::size_t(s) * s * s);
    for (int i = -d_; i <= d_; ++i)
      for (int j = -d_; j <= d_; ++j)
        for (int k = -d_; k <= d_; ++k) values_[slot({i, j, k})] = fn({i, j, k});
  }

  int half_width() const { return d_; }
  double operator()(const IntVec3& p) const {
    if (std::abs(p.x) > d_ || std::abs(p.y) > d_ || std::abs(p.z) > d_)
      throw ParameterError("WeightTable: momentum outside the tabulated cube");
    return values_[slot(p)];
  }

 private:
  std::size_t slot(const IntVec3& p) const {
    const std::size_t s = std::size_t(2 * d_ + 1);
    return (std::size_t(p.x + d_) * s + std::size_t(p.y + d_)) * s + std::size_t(p.z + d_);
  }
  int d_ = 0;
  std::vector<double> values_;
};

// One smeared field L^-3/2 sum_k m(k) e^{i phase k.z} a_k (or a*_k) at site z.
struct FieldFactor {
  bool creation = false;
  Spin spin = Spin::up;
  int site = 0;
  int phase = 1;
  const std::vector<double>* multiplier = nullptr;  // per mode index; null means 1
};

inline FieldFactor field_a(Spin s, int site, const std::vector<double>* m = nullptr) { return {false, s, site, +1, m}; }
inline FieldFactor field_adag(Spin s, int site, const std::vector<double>* m = nullptr) { return {true, s, site, -1, m}; }
// a(vbar_z) and a*(vbar_z) carry the opposite phase.
inline FieldFactor field_a_vbar(Spin s, int site, const std::vector<double>* m) { return {false, s, site, -1, m}; }
inline FieldFactor field_adag_vbar(Spin s, int site, const std::vector<double>* m) { return {true, s, site, +1, m}; }

// c int dx dy W(x - y) f_0 f_1 ... f_{n-1}; sites are 0 (x) and 1 (y).
struct FieldTerm {
  double coefficient = 1.0;
  std::vector<FieldFactor> factors;
  const WeightTable* weight = nullptr;
};

inline FieldTerm adjoint(const FieldTerm& t) {
  FieldTerm h = t;
  h.factors.assign(t.factors.rbegin(), t.factors.rend());
  for (auto& f : h.factors) {
    f.creation = !f.creation;
    f.phase = -f.phase;
  }
  return h;
}

struct TruncationReport {
  long long truncated = 0;  // terms whose fixed momentum left the mode set
  long long leaked = 0;     // outputs outside the target basis
  TruncationReport& operator+=(const TruncationReport& o) {
    truncated += o.truncated;
    leaked += o.leaked;
    return *this;
  }
};

namespace detail {

struct TermWalker {
  const ModeSet& modes;
  const FieldTerm& term;
  double prefactor;
  std::function<void(const Word&, double)> emit;
  TruncationReport report;

  double mult(const FieldFactor& f, std::uint32_t i) const { return f.multiplier ? (*f.multiplier)[i] : 1.0; }

  void run(const Word& w) { step(int(term.factors.size()) - 1, w, 1.0, IntVec3{}, IntVec3{}); }

  void step(int pos, const Word& w, double amp, IntVec3 total, IntVec3 at_y) {
    const FieldFactor& f = term.factors[std::size_t(pos)];
    if (pos == 0) {
      const IntVec3 n = (total * f.phase) * -1;
      auto idx = modes.index(f.spin, n);
      if (!idx) {
        ++report.truncated;
        return;
      }
      const double m = mult(f, *idx);
      if (m == 0.0) return;
      Word out = w;
      const int s = f.creation ? create(out, *idx) : annihilate(out, *idx);
      if (s == 0) return;
      if (f.site == 1) at_y = at_y + n * f.phase;
      emit(out, prefactor * amp * m * s * (*term.weight)(at_y));
      return;
    }
    const std::uint32_t lo = std::uint32_t(modes.offset(f.spin));
    const std::uint32_t hi = lo + std::uint32_t(modes.count(f.spin));
    auto visit = [&](std::uint32_t i) {
      const double m = mult(f, i);
      if (m == 0.0) return;
      Word out = w;
      const int s = f.creation ? create(out, i) : annihilate(out, i);
      if (s == 0) return;
      const IntVec3 k = modes.mode(i).n * f.phase;
      step(pos - 1, out, amp * m * s, total + k, f.site == 1 ? at_y + k : at_y);
    };
    if (f.creation) {
      for (std::uint32_t i = lo; i < hi; ++i)
        if (!occupied(w, i)) visit(i);
    } else {
      const Word snapshot = w;
      for (std::uint32_t i : snapshot)
        if (i >= lo && i < hi) visit(i);
    }
  }
};

}  // namespace detail

// Matrix of sum_t term_t from `domain` to `codomain`, built column by column.
inline SparseMatrix build_field_matrix(const FockSector& domain, const FockSector& codomain,
                                       const std::vector<FieldTerm>& terms, TruncationReport* report = nullptr) {
  const ModeSet& modes = domain.modes();
  const double L3 = modes.volume();
  for (const auto& t : terms)
    if (!t.weight || t.factors.empty()) throw ParameterError("build_field_matrix: malformed term");
  const std::size_t chunks = chunk_count(domain.dim());
  std::vector<std::vector<Triplet>> parts(chunks);
  std::vector<TruncationReport> reports(chunks);
  parallel_chunks(domain.dim(), [&](std::size_t c, std::size_t b, std::size_t e) {
    for (const auto& t : terms) {
      const double pre = t.coefficient * L3 * std::pow(L3, -0.5 * double(t.factors.size()));
      std::uint32_t col = 0;
      detail::TermWalker walker{modes, t, pre, {}, {}};
      walker.emit = [&](const Word& out, double v) {
        auto row = codomain.find(out);
        if (!row) {
          ++reports[c].leaked;
          return;
        }
        parts[c].push_back({std::uint32_t(*row), col, v});
      };
      for (std::size_t j = b; j < e; ++j) {
        col = std::uint32_t(j);
        walker.run(domain.word(j));
      }
      reports[c] += walker.report;
    }
  });
  std::vector<Triplet> all;
  TruncationReport total;
  for (std::size_t c = 0; c < chunks; ++c) {
    all.insert(all.end(), parts[c].begin(), parts[c].end());
    total += reports[c];
  }
  if (report) *report += total;
  return SparseMatrix::from_triplets(codomain.dim(), domain.dim(), std::move(all));
}

inline SparseMatrix diagonal_matrix(const FockSector& sector, const std::function<double(const Word&)>& fn) {
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < sector.dim(); ++j) {
    const double v = fn(sector.word(j));
    if (v != 0.0) t.push_back({std::uint32_t(j), std::uint32_t(j), v});
  }
  return SparseMatrix::from_triplets(sector.dim(), sector.dim(), std::move(t));
}

// Explicit mode-space monomial amp * o_0 o_1 ... o_{n-1} (rightmost acts first).
struct ModeOp {
  std::uint32_t mode;
  bool creation;
};

struct Monomial {
  double amplitude = 1.0;
  std::vector<ModeOp> ops;
};

// Sparse Fock vector keyed by occupation word.
struct WordLess {
  bool operator()(const Word& a, const Word& b) const { return word_less(a, b); }
};
using FockVector = std::map<Word, double, WordLess>;

inline FockVector apply_monomials(const std::vector<Monomial>& op, const FockVector& psi) {
  FockVector out;
  for (const auto& [w, c] : psi)
    for (const auto& m : op) {
      Word x = w;
      int sign = 1;
      for (auto it = m.ops.rbegin(); it != m.ops.rend() && sign != 0; ++it)
        sign *= it->creation ? create(x, it->mode) : annihilate(x, it->mode);
      if (sign != 0) out[x] += m.amplitude * sign * c;
    }
  return out;
}

inline double inner(const FockVector& a, const FockVector& b) {
  double s = 0.0;
  for (const auto& [w, c] : a) {
    auto it = b.find(w);
    if (it != b.end()) s += c * it->second;
  }
  return s;
}

inline FockVector to_fock_vector(const FockSector& sector, const std::vector<double>& psi) {
  FockVector v;
  for (std::size_t i = 0; i < sector.dim(); ++i)
    if (psi[i] != 0.0) v[sector.word(i)] = psi[i];
  return v;
}

inline std::vector<Monomial> adjoint(const std::vector<Monomial>& op) {
  std::vector<Monomial> out;
  for (const auto& m : op) {
    Monomial h{m.amplitude, {}};
    for (auto it = m.ops.rbegin(); it != m.ops.rend(); ++it) h.ops.push_back({it->mode, !it->creation});
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace dilute
