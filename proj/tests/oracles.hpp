// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations used by the tests. Nothing here calls
// into the library numerics.
#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline double square_well_length(double v0, double r0) {
  const double k = std::sqrt(v0 / 2.0);
  return r0 * (1.0 - std::tanh(k * r0) / (k * r0));
}

inline double square_well_vhat(double v0, double r0, double p) {
  if (p == 0.0) return 4.0 * kPi * v0 * r0 * r0 * r0 / 3.0;
  return 4.0 * kPi * v0 * (std::sin(p * r0) - p * r0 * std::cos(p * r0)) / (p * p * p);
}

// Zero-energy radial equation u'' = (V/2) u by fixed-step RK4; a = R0 - u/u'.
inline double rk4_scattering_length(const std::function<double(double)>& v, double r0, int steps = 20000) {
  const double h = r0 / steps;
  double u = 0.0, du = 1.0;
  auto f = [&](double r, double y, double dy) { return std::array<double, 2>{dy, 0.5 * v(r) * y}; };
  for (int i = 0; i < steps; ++i) {
    const double r = i * h;
    const auto k1 = f(r, u, du);
    const auto k2 = f(r + h / 2, u + h / 2 * k1[0], du + h / 2 * k1[1]);
    const auto k3 = f(r + h / 2, u + h / 2 * k2[0], du + h / 2 * k2[1]);
    const auto k4 = f(r + h, u + h * k3[0], du + h * k3[1]);
    u += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    du += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
  }
  return r0 - u / du;
}

// Composite Simpson on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

struct Vec {
  int x, y, z;
  long n2() const { return long(x) * x + long(y) * y + long(z) * z; }
  bool operator==(const Vec&) const = default;
};

inline std::vector<Vec> ball(long max_norm2) {
  std::vector<Vec> out;
  const int c = int(std::sqrt(double(max_norm2))) + 1;
  for (int x = -c; x <= c; ++x)
    for (int y = -c; y <= c; ++y)
      for (int z = -c; z <= c; ++z)
        if (Vec{x, y, z}.n2() <= max_norm2) out.push_back({x, y, z});
  return out;
}

// Fock space over at most 64 modes with bitmask states. Mode j is bit j.
struct BitMode {
  Vec n;
  int spin;
};

inline int parity_below(std::uint64_t s, int j) {
  return std::popcount(s & ((std::uint64_t(1) << j) - 1)) & 1;
}

// a_j on |s>: returns sign (0 if vanishes) and updates s.
inline int bit_annihilate(std::uint64_t& s, int j) {
  if (!(s >> j & 1)) return 0;
  const int sg = parity_below(s, j) ? -1 : 1;
  s &= ~(std::uint64_t(1) << j);
  return sg;
}

inline int bit_create(std::uint64_t& s, int j) {
  if (s >> j & 1) return 0;
  const int sg = parity_below(s, j) ? -1 : 1;
  s |= std::uint64_t(1) << j;
  return sg;
}

using BitVector = std::map<std::uint64_t, double>;

// H = sum |k|^2 n_k + (1/2L^3) sum_{s,t} sum_{k,q,p} Vhat(p) a*_{k+p,s} a*_{q-p,t} a_{q,t} a_{k,s},
// restricted to the given modes (terms leaving the mode set are dropped).
inline BitVector apply_hamiltonian(const std::vector<BitMode>& modes, double L,
                                   const std::function<double(double)>& vhat, const BitVector& psi) {
  const double u = 2.0 * kPi / L;
  const int m = int(modes.size());
  auto find = [&](Vec n, int s) {
    for (int j = 0; j < m; ++j)
      if (modes[j].spin == s && modes[j].n == n) return j;
    return -1;
  };
  BitVector out;
  for (const auto& [s0, c] : psi) {
    double kin = 0.0;
    for (int j = 0; j < m; ++j)
      if (s0 >> j & 1) kin += u * u * double(modes[j].n.n2());
    out[s0] += kin * c;
    for (int i1 = 0; i1 < m; ++i1) {
      for (int i2 = 0; i2 < m; ++i2) {
        std::uint64_t s = s0;
        int sg = bit_annihilate(s, i1);
        if (!sg) continue;
        const int sg2 = bit_annihilate(s, i2);
        if (!sg2) continue;
        // a_{i2} a_{i1} with i1 = (k, s), i2 = (q, t) after ordering a_{q,t} a_{k,s}.
        const Vec k = modes[i1].n, q = modes[i2].n;
        for (int o1 = 0; o1 < m; ++o1) {
          if (modes[o1].spin != modes[i1].spin) continue;
          const Vec kp = modes[o1].n;
          const Vec p{kp.x - k.x, kp.y - k.y, kp.z - k.z};
          const int o2 = find(Vec{q.x - p.x, q.y - p.y, q.z - p.z}, modes[i2].spin);
          if (o2 < 0) continue;
          std::uint64_t t = s;
          int sg3 = bit_create(t, o2);
          if (!sg3) continue;
          const int sg4 = bit_create(t, o1);
          if (!sg4) continue;
          const double w = vhat(u * std::sqrt(double(p.n2()))) / (2.0 * L * L * L);
          out[t] += w * sg * sg2 * sg3 * sg4 * c;
        }
      }
    }
  }
  return out;
}

inline double bit_inner(const BitVector& a, const BitVector& b) {
  double s = 0.0;
  for (const auto& [k, v] : a)
    if (auto it = b.find(k); it != b.end()) s += v * it->second;
  return s;
}

// Lowest eigenvalue of the relative-motion matrix 2|k|^2 + Vhat(k - k')/L^3 of
// one up and one down particle at zero total momentum.
inline double two_body_ground_energy(double L, long max_norm2, const std::function<double(double)>& vhat) {
  const auto pts = ball(max_norm2);
  const double u = 2.0 * kPi / L;
  const Eigen::Index n = Eigen::Index(pts.size());
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vec d{pts[i].x - pts[j].x, pts[i].y - pts[j].y, pts[i].z - pts[j].z};
      h(i, j) = vhat(u * std::sqrt(double(d.n2()))) / (L * L * L);
      if (i == j) h(i, j) += 2.0 * u * u * double(pts[i].n2());
    }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

// Jordan-Wigner dense annihilator a_j on m modes (basis index = bitmask).
inline Eigen::MatrixXd jw_annihilator(int m, int j) {
  const Eigen::Index d = Eigen::Index(1) << m;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (std::uint64_t s = 0; s < std::uint64_t(d); ++s) {
    std::uint64_t t = s;
    const int sg = bit_annihilate(t, j);
    if (sg) a(Eigen::Index(t), Eigen::Index(s)) = sg;
  }
  return a;
}

}  // namespace oracle
