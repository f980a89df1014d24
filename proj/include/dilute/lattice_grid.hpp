// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dilute/errors.hpp"

namespace dilute {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct IntVec3 {
  int x = 0;
  int y = 0;
  int z = 0;

  constexpr long norm2() const {
    return long(x) * x + long(y) * y + long(z) * z;
  }
  constexpr IntVec3 operator+(const IntVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr IntVec3 operator-(const IntVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr IntVec3 operator-() const { return {-x, -y, -z}; }
  constexpr IntVec3 operator*(int s) const { return {s * x, s * y, s * z}; }
  constexpr auto operator<=>(const IntVec3&) const = default;
};

// Canonical order: squared norm first, then lexicographic.
inline bool lattice_less(const IntVec3& a, const IntVec3& b) {
  const long na = a.norm2(), nb = b.norm2();
  if (na != nb) return na < nb;
  return a < b;
}

inline constexpr std::size_t kDefaultPointLimit = 2'000'000;

class MomentumLattice {
 public:
  MomentumLattice() = default;
  MomentumLattice(double box_length, double kmax, std::vector<IntVec3> points)
      : box_length_(box_length), kmax_(kmax), points_(std::move(points)) {
    for (const auto& n : points_) max_norm2_ = std::max(max_norm2_, n.norm2());
  }

  double box_length() const { return box_length_; }
  double cutoff() const { return kmax_; }
  double unit() const { return kTwoPi / box_length_; }
  const std::vector<IntVec3>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  long max_norm2() const { return max_norm2_; }
  int max_component() const {
    return static_cast<int>(std::floor(std::sqrt(double(max_norm2_)) + 1e-9));
  }

  double norm2(std::size_t i) const { return unit() * unit() * double(points_[i].norm2()); }
  std::array<double, 3> momentum(std::size_t i) const {
    const double u = unit();
    return {u * points_[i].x, u * points_[i].y, u * points_[i].z};
  }

  std::optional<std::size_t> find(const IntVec3& n) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), n, lattice_less);
    if (it == points_.end() || *it != n) return std::nullopt;
    return static_cast<std::size_t>(it - points_.begin());
  }

 private:
  double box_length_ = 1.0;
  double kmax_ = 0.0;
  std::vector<IntVec3> points_;
  long max_norm2_ = 0;
};

// Largest integer m with (2pi/L)^2 m <= kmax^2, with a relative slack that
// absorbs rounding in kmax (e.g. kmax = sqrt(2)).
inline long max_norm2_for_cutoff(double box_length, double kmax) {
  const double u = kTwoPi / box_length;
  const double q = (kmax / u) * (kmax / u);
  return static_cast<long>(std::floor(q * (1.0 + 1e-12) + 1e-12));
}

inline MomentumLattice enumerate_momenta_norm2(double box_length, long max_norm2,
                                               std::size_t limit = kDefaultPointLimit) {
  if (!(box_length > 0.0)) throw ParameterError("enumerate_momenta: box length must be positive");
  if (max_norm2 < 0) throw ParameterError("enumerate_momenta: negative cutoff");
  const double estimate = 4.0 / 3.0 * std::numbers::pi * std::pow(std::sqrt(double(max_norm2)) + 1.0, 3);
  if (estimate > 4.0 * double(limit) + 100.0)
    throw ResourceLimitError("enumerate_momenta: about " + std::to_string(long(estimate)) +
                             " points exceed the limit " + std::to_string(limit));
  const int c = static_cast<int>(std::floor(std::sqrt(double(max_norm2)) + 1e-9));
  std::vector<IntVec3> pts;
  for (int x = -c; x <= c; ++x)
    for (int y = -c; y <= c; ++y)
      for (int z = -c; z <= c; ++z) {
        const IntVec3 n{x, y, z};
        if (n.norm2() <= max_norm2) pts.push_back(n);
      }
  if (pts.size() > limit)
    throw ResourceLimitError("enumerate_momenta: " + std::to_string(pts.size()) +
                             " points exceed the limit " + std::to_string(limit));
  std::sort(pts.begin(), pts.end(), lattice_less);
  const double kmax = kTwoPi / box_length * std::sqrt(double(max_norm2));
  return MomentumLattice(box_length, kmax, std::move(pts));
}

inline MomentumLattice enumerate_momenta(double box_length, double kmax,
                                         std::size_t limit = kDefaultPointLimit) {
  if (!(box_length > 0.0)) throw ParameterError("enumerate_momenta: box length must be positive");
  if (!(kmax >= 0.0)) throw ParameterError("enumerate_momenta: kmax must be nonnegative");
  auto lat = enumerate_momenta_norm2(box_length, max_norm2_for_cutoff(box_length, kmax), limit);
  return MomentumLattice(box_length, kmax, lat.points());
}

// r3(m): number of integer vectors with |n|^2 = m, for m = 0..max_norm2.
inline std::vector<long> shell_multiplicities(long max_norm2) {
  std::vector<long> r3(static_cast<std::size_t>(max_norm2 + 1), 0);
  const int c = static_cast<int>(std::floor(std::sqrt(double(max_norm2)) + 1e-9));
  for (int x = -c; x <= c; ++x)
    for (int y = -c; y <= c; ++y) {
      const long xy = long(x) * x + long(y) * y;
      if (xy > max_norm2) continue;
      for (int z = -c; z <= c; ++z) {
        const long m = xy + long(z) * z;
        if (m <= max_norm2) ++r3[static_cast<std::size_t>(m)];
      }
    }
  return r3;
}

// Cumulative point counts at each occupied squared radius (Fermi ball sizes).
inline std::vector<long> closed_shell_sizes(double box_length, long max_size) {
  if (!(box_length > 0.0)) throw ParameterError("closed_shell_sizes: box length must be positive");
  if (max_size < 1) throw ParameterError("closed_shell_sizes: max_size must be >= 1");
  long m = 16;
  for (;;) {
    const auto r3 = shell_multiplicities(m);
    std::vector<long> sizes;
    long total = 0;
    for (long j = 0; j <= m; ++j) {
      if (r3[j] == 0) continue;
      total += r3[j];
      if (total > max_size) return sizes;
      sizes.push_back(total);
    }
    m *= 2;
  }
}

// Smooth nonincreasing step: 1 on [0,1], 0 on [2,inf), C-infinity in between.
inline double chi(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double s = t - 1.0;
  const double a = std::exp(-1.0 / (1.0 - s));
  const double b = std::exp(-1.0 / s);
  return a / (a + b);
}

// sup |chi'| (attained at t = 3/2).
inline constexpr double kChiSlopeBound = 2.0;

}  // namespace dilute
