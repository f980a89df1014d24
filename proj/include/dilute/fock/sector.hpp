// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dilute/errors.hpp"
#include "dilute/fock/mode_set.hpp"

namespace dilute {

inline constexpr std::size_t kDefaultSectorCap = 500'000;

// Basis of occupation words sorted by bitstring value.
class FockSector {
 public:
  FockSector(std::shared_ptr<const ModeSet> modes, std::vector<Word> words, int n_up = -1, int n_down = -1,
             std::optional<IntVec3> momentum = std::nullopt)
      : modes_(std::move(modes)), basis_(std::move(words)), n_up_(n_up), n_down_(n_down), momentum_(momentum) {
    std::sort(basis_.begin(), basis_.end(), word_less);
    basis_.erase(std::unique(basis_.begin(), basis_.end()), basis_.end());
  }

  const ModeSet& modes() const { return *modes_; }
  const std::shared_ptr<const ModeSet>& mode_set() const { return modes_; }
  std::size_t dim() const { return basis_.size(); }
  const Word& word(std::size_t i) const { return basis_[i]; }
  const std::vector<Word>& basis() const { return basis_; }
  int n_up() const { return n_up_; }
  int n_down() const { return n_down_; }
  const std::optional<IntVec3>& momentum() const { return momentum_; }

  std::optional<std::size_t> find(const Word& w) const {
    auto it = std::lower_bound(basis_.begin(), basis_.end(), w, word_less);
    if (it == basis_.end() || *it != w) return std::nullopt;
    return std::size_t(it - basis_.begin());
  }

 private:
  std::shared_ptr<const ModeSet> modes_;
  std::vector<Word> basis_;
  int n_up_, n_down_;
  std::optional<IntVec3> momentum_;
};

namespace detail {

// All k-subsets of {offset, ..., offset + n - 1}, each with its total momentum.
inline void enumerate_subsets(const ModeSet& modes, Spin s, int k,
                              std::vector<std::pair<Word, IntVec3>>& out) {
  const std::uint32_t off = std::uint32_t(modes.offset(s));
  const int n = int(modes.count(s));
  if (k == 0) {
    out.push_back({Word{}, IntVec3{}});
    return;
  }
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    Word w;
    IntVec3 p{};
    for (int i : idx) {
      w.push_back(off + std::uint32_t(i));
      p = p + modes.mode(off + std::uint32_t(i)).n;
    }
    out.push_back({std::move(w), p});
    int j = k - 1;
    while (j >= 0 && idx[j] == n - k + j) --j;
    if (j < 0) break;
    ++idx[j];
    for (int i = j + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace detail

inline FockSector build_sector(std::shared_ptr<const ModeSet> modes, int n_up, int n_down,
                               std::optional<IntVec3> momentum = std::nullopt,
                               std::size_t cap = kDefaultSectorCap) {
  const ModeSet& m = *modes;
  if (n_up < 0 || n_down < 0) throw ParameterError("build_sector: particle numbers must be >= 0");
  if (std::size_t(n_up) > m.count(Spin::up) || std::size_t(n_down) > m.count(Spin::down))
    throw ParameterError("build_sector: more particles than modes");
  const double cu = detail::binomial(int(m.count(Spin::up)), n_up);
  const double cd = detail::binomial(int(m.count(Spin::down)), n_down);
  if (!momentum && cu * cd > double(cap))
    throw ResourceLimitError("build_sector: dimension " + std::to_string(cu * cd) + " exceeds cap " +
                             std::to_string(cap) + "; reduce the mode cutoff");
  if (cu > 50.0 * double(cap) || cd > 50.0 * double(cap))
    throw ResourceLimitError("build_sector: single-species enumeration too large; reduce the mode cutoff");
  std::vector<std::pair<Word, IntVec3>> ups, downs;
  detail::enumerate_subsets(m, Spin::up, n_up, ups);
  detail::enumerate_subsets(m, Spin::down, n_down, downs);
  std::map<IntVec3, std::vector<std::size_t>> by_momentum;
  if (momentum)
    for (std::size_t j = 0; j < downs.size(); ++j) by_momentum[downs[j].second].push_back(j);
  std::size_t dim = 0;
  for (const auto& u : ups) {
    if (momentum) {
      auto it = by_momentum.find(*momentum - u.second);
      if (it != by_momentum.end()) dim += it->second.size();
    } else {
      dim += downs.size();
    }
  }
  if (dim > cap)
    throw ResourceLimitError("build_sector: dimension " + std::to_string(dim) + " exceeds cap " +
                             std::to_string(cap) + "; reduce the mode cutoff");
  std::vector<Word> words;
  words.reserve(dim);
  auto join = [](const Word& a, const Word& b) {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
  };
  for (const auto& u : ups) {
    if (momentum) {
      auto it = by_momentum.find(*momentum - u.second);
      if (it == by_momentum.end()) continue;
      for (std::size_t j : it->second) words.push_back(join(u.first, downs[j].first));
    } else {
      for (const auto& d : downs) words.push_back(join(u.first, d.first));
    }
  }
  return FockSector(std::move(modes), std::move(words), n_up, n_down, momentum);
}

// Full Fock space over the modes (all particle numbers); small mode sets only.
inline FockSector build_fock_space(std::shared_ptr<const ModeSet> modes, std::size_t cap = kDefaultSectorCap) {
  const std::size_t m = modes->size();
  if (m > 20 || (std::size_t(1) << m) > cap) throw ResourceLimitError("build_fock_space: too many modes");
  std::vector<Word> words;
  for (std::size_t bits = 0; bits < (std::size_t(1) << m); ++bits) {
    Word w;
    for (std::size_t i = 0; i < m; ++i)
      if (bits >> i & 1) w.push_back(std::uint32_t(i));
    words.push_back(std::move(w));
  }
  return FockSector(std::move(modes), std::move(words));
}

}  // namespace dilute
