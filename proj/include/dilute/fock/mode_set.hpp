// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "dilute/errors.hpp"
#include "dilute/fermi_gas.hpp"
#include "dilute/lattice_grid.hpp"

namespace dilute {

struct Mode {
  IntVec3 n;
  Spin spin = Spin::up;
};

// Single-particle modes: all up modes, then all down modes, each block in
// lattice order. The order fixes every fermionic sign.
class ModeSet {
 public:
  ModeSet(double L, std::vector<IntVec3> up, std::vector<IntVec3> down) : L_(L) {
    if (!(L > 0.0)) throw ParameterError("ModeSet: L must be positive");
    for (auto* block : {&up, &down}) {
      std::sort(block->begin(), block->end(), lattice_less);
      if (std::adjacent_find(block->begin(), block->end()) != block->end())
        throw ParameterError("ModeSet: duplicate momentum");
      for (const auto& n : *block)
        if (!std::binary_search(block->begin(), block->end(), -n, lattice_less))
          throw ParameterError("ModeSet: mode set must be closed under k -> -k");
    }
    up_ = std::move(up);
    down_ = std::move(down);
    for (const auto& n : up_) modes_.push_back({n, Spin::up});
    for (const auto& n : down_) modes_.push_back({n, Spin::down});
  }

  static ModeSet from_cutoff(double L, long max_norm2_up, long max_norm2_down) {
    return ModeSet(L, enumerate_momenta_norm2(L, max_norm2_up).points(),
                   enumerate_momenta_norm2(L, max_norm2_down).points());
  }

  double L() const { return L_; }
  double volume() const { return L_ * L_ * L_; }
  double unit() const { return kTwoPi / L_; }
  std::size_t size() const { return modes_.size(); }
  const Mode& mode(std::size_t i) const { return modes_[i]; }
  const std::vector<Mode>& modes() const { return modes_; }
  std::size_t count(Spin s) const { return s == Spin::up ? up_.size() : down_.size(); }
  std::size_t offset(Spin s) const { return s == Spin::up ? 0 : up_.size(); }
  const std::vector<IntVec3>& momenta(Spin s) const { return s == Spin::up ? up_ : down_; }
  double dispersion(std::size_t i) const { return unit() * unit() * double(modes_[i].n.norm2()); }

  std::optional<std::uint32_t> index(Spin s, const IntVec3& n) const {
    const auto& block = momenta(s);
    auto it = std::lower_bound(block.begin(), block.end(), n, lattice_less);
    if (it == block.end() || *it != n) return std::nullopt;
    return static_cast<std::uint32_t>(offset(s) + std::size_t(it - block.begin()));
  }

  long max_norm2() const {
    long m = 0;
    for (const auto& md : modes_) m = std::max(m, md.n.norm2());
    return m;
  }

 private:
  double L_;
  std::vector<IntVec3> up_, down_;
  std::vector<Mode> modes_;
};

// Occupation word: ascending list of occupied mode indices.
using Word = boost::container::small_vector<std::uint32_t, 14>;

// Order of the equivalent bitstrings read as unsigned integers.
inline bool word_less(const Word& a, const Word& b) {
  auto ia = a.rbegin(), ib = b.rbegin();
  for (; ia != a.rend() && ib != b.rend(); ++ia, ++ib)
    if (*ia != *ib) return *ia < *ib;
  return a.size() < b.size();
}

inline bool occupied(const Word& w, std::uint32_t i) { return std::binary_search(w.begin(), w.end(), i); }

// a_i |w> = sign |w'>; returns 0 when the result vanishes.
inline int annihilate(Word& w, std::uint32_t i) {
  auto it = std::lower_bound(w.begin(), w.end(), i);
  if (it == w.end() || *it != i) return 0;
  const int sign = ((it - w.begin()) % 2) ? -1 : 1;
  w.erase(it);
  return sign;
}

inline int create(Word& w, std::uint32_t i) {
  auto it = std::lower_bound(w.begin(), w.end(), i);
  if (it != w.end() && *it == i) return 0;
  const int sign = ((it - w.begin()) % 2) ? -1 : 1;
  w.insert(it, i);
  return sign;
}

// Symmetric difference with a sorted mask.
inline Word word_xor(const Word& w, const Word& mask) {
  Word out;
  std::set_symmetric_difference(w.begin(), w.end(), mask.begin(), mask.end(), std::back_inserter(out));
  return out;
}

inline std::size_t count_spin(const Word& w, const ModeSet& modes, Spin s) {
  const auto lo = std::uint32_t(modes.offset(s));
  const auto hi = std::uint32_t(modes.offset(s) + modes.count(s));
  return std::size_t(std::lower_bound(w.begin(), w.end(), hi) - std::lower_bound(w.begin(), w.end(), lo));
}

inline IntVec3 word_momentum(const Word& w, const ModeSet& modes) {
  IntVec3 p{};
  for (auto i : w) p = p + modes.mode(i).n;
  return p;
}

inline std::string word_string(const Word& w) {
  std::string s = "{";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s + "}";
}

}  // namespace dilute
