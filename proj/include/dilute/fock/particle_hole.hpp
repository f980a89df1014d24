// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "dilute/errors.hpp"
#include "dilute/fermi_gas.hpp"
#include "dilute/fock/mode_set.hpp"
#include "dilute/fock/sector.hpp"

namespace dilute {

// Particle-hole map R with R a*_k R* = a*_k off the balls and a_k on them,
// normalised by R|0> = +|balls filled>.
class ParticleHoleMap {
 public:
  ParticleHoleMap(const ModeSet& modes, const std::vector<IntVec3>& ball_up, const std::vector<IntVec3>& ball_down) {
    for (auto [s, ball] : {std::pair{Spin::up, &ball_up}, std::pair{Spin::down, &ball_down}})
      for (const auto& n : *ball) {
        auto i = modes.index(s, n);
        if (!i) throw ParameterError("ParticleHoleMap: Fermi ball momentum outside the mode set");
        mask_.push_back(*i);
      }
    std::sort(mask_.begin(), mask_.end());
    mask_.erase(std::unique(mask_.begin(), mask_.end()), mask_.end());
  }
  ParticleHoleMap(const ModeSet& modes, const FermiBall& up, const FermiBall& down)
      : ParticleHoleMap(modes, up.momenta, down.momenta) {}

  const Word& mask() const { return mask_; }
  const Word& ffg_word() const { return mask_; }
  bool in_ball(std::uint32_t i) const { return occupied(mask_, i); }

  // R|w> = sign(w) |w xor mask>.
  int sign(const Word& w) const {
    Word x = mask_;
    int s = 1;
    for (auto it = w.rbegin(); it != w.rend(); ++it) s *= in_ball(*it) ? annihilate(x, *it) : create(x, *it);
    return s;
  }

  Word image(const Word& w) const { return word_xor(w, mask_); }

  FockSector image_sector(const FockSector& s) const {
    std::vector<Word> words;
    words.reserve(s.dim());
    for (const auto& w : s.basis()) words.push_back(image(w));
    return FockSector(s.mode_set(), std::move(words));
  }

  // psi lives on `from`; the result on `to` (which must contain the image).
  std::vector<double> apply(const FockSector& from, const FockSector& to, const std::vector<double>& psi) const {
    return map(from, to, psi, false);
  }
  std::vector<double> apply_adjoint(const FockSector& from, const FockSector& to,
                                    const std::vector<double>& psi) const {
    return map(from, to, psi, true);
  }

 private:
  std::vector<double> map(const FockSector& from, const FockSector& to, const std::vector<double>& psi,
                          bool adjoint) const {
    if (psi.size() != from.dim()) throw ParameterError("ParticleHoleMap: vector does not match sector");
    std::vector<double> out(to.dim(), 0.0);
    for (std::size_t i = 0; i < from.dim(); ++i) {
      if (psi[i] == 0.0) continue;
      const Word& w = from.word(i);
      const Word x = image(w);
      auto j = to.find(x);
      if (!j) throw ParameterError("ParticleHoleMap: image word missing from target sector");
      out[*j] = psi[i] * (adjoint ? sign(x) : sign(w));
    }
    return out;
  }

  Word mask_;
};

}  // namespace dilute
