// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dilute/errors.hpp"
#include "dilute/lattice_grid.hpp"
#include "dilute/quadrature.hpp"

namespace dilute {

struct SquareWell {
  double v0 = 0.0;
  double r0 = 1.0;
};

// V0 (1 - r^2/R0^2)^(order+1) for order >= 0 (C^order at R0);
// order < 0 selects the C-infinity bump V0 exp(1 - 1/(1 - r^2/R0^2)).
struct SmoothBump {
  double v0 = 0.0;
  double r0 = 1.0;
  int order = -1;
};

// Piecewise linear through (radii, values); constant below the first radius,
// zero beyond the last.
struct Tabulated {
  std::vector<double> radii;
  std::vector<double> values;
};

inline constexpr int kInfiniteOrder = -1;

class RadialPotential {
 public:
  using Profile = std::variant<SquareWell, SmoothBump, Tabulated>;

  static RadialPotential square_well(double v0, double r0) {
    check_strength(v0, r0);
    return RadialPotential(SquareWell{v0, r0});
  }
  static RadialPotential smooth_bump(double v0, double r0, int order = kInfiniteOrder) {
    check_strength(v0, r0);
    return RadialPotential(SmoothBump{v0, r0, order});
  }
  static RadialPotential zero(double r0 = 1.0) { return square_well(0.0, r0); }
  static RadialPotential tabulated(std::vector<double> radii, std::vector<double> values) {
    if (radii.size() < 2 || radii.size() != values.size())
      throw ParameterError("tabulated potential needs >= 2 matching (radius, value) pairs");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (!(radii[i] >= 0.0) || !std::isfinite(values[i]))
        throw ParameterError("tabulated potential: invalid entry");
      if (values[i] < 0.0) throw ParameterError("tabulated potential must be nonnegative");
      if (i > 0 && !(radii[i] > radii[i - 1]))
        throw ParameterError("tabulated potential radii must be strictly ascending");
    }
    return RadialPotential(Tabulated{std::move(radii), std::move(values)});
  }

  const Profile& profile() const { return profile_; }

  double support_radius() const {
    return std::visit(
        [](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Tabulated>) return p.radii.back();
          else return p.r0;
        },
        profile_);
  }

  bool is_zero() const {
    return std::visit(
        [](const auto& p) -> bool {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Tabulated>)
            return std::all_of(p.values.begin(), p.values.end(), [](double v) { return v == 0.0; });
          else return p.v0 == 0.0;
        },
        profile_);
  }

  double operator()(double r) const {
    return std::visit(
        [r](const auto& p) -> double {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, SquareWell>) {
            return r <= p.r0 ? p.v0 : 0.0;
          } else if constexpr (std::is_same_v<T, SmoothBump>) {
            if (r >= p.r0) return 0.0;
            const double w = 1.0 - (r / p.r0) * (r / p.r0);
            if (p.order < 0) return p.v0 * std::exp(1.0 - 1.0 / w);
            return p.v0 * std::pow(w, p.order + 1);
          } else {
            if (r > p.radii.back()) return 0.0;
            if (r <= p.radii.front()) return p.values.front();
            auto it = std::upper_bound(p.radii.begin(), p.radii.end(), r);
            const std::size_t j = static_cast<std::size_t>(it - p.radii.begin());
            const double t = (r - p.radii[j - 1]) / (p.radii[j] - p.radii[j - 1]);
            return (1.0 - t) * p.values[j - 1] + t * p.values[j];
          }
        },
        profile_);
  }

  // Integration breakpoints covering the support.
  std::vector<double> breakpoints() const {
    if (const auto* t = std::get_if<Tabulated>(&profile_)) {
      std::vector<double> b{0.0};
      for (double r : t->radii)
        if (r > 0.0) b.push_back(r);
      return b;
    }
    return {0.0, support_radius()};
  }

 private:
  explicit RadialPotential(Profile p) : profile_(std::move(p)) {}

  static void check_strength(double v0, double r0) {
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw ParameterError("support radius must be positive");
    if (!(v0 >= 0.0) || !std::isfinite(v0)) throw ParameterError("potential strength must be >= 0");
  }

  Profile profile_;
};

inline RadialPotential read_tabulated_potential(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open potential table " + path.string());
  std::vector<double> radii, values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double r = 0.0, v = 0.0;
    if (!(ls >> r)) continue;
    if (!(ls >> v))
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected two columns");
    radii.push_back(r);
    values.push_back(v);
  }
  return RadialPotential::tabulated(std::move(radii), std::move(values));
}

// Vhat(p) = (4pi/p) int r sin(pr) V(r) dr, p -> 0 limit 4pi int r^2 V.
inline double fourier_transform_radial(const RadialPotential& v, double p) {
  if (!(p >= 0.0)) throw ParameterError("fourier_transform_radial: p must be >= 0");
  if (v.is_zero()) return 0.0;
  constexpr double four_pi = 4.0 * std::numbers::pi;
  if (const auto* sw = std::get_if<SquareWell>(&v.profile())) {
    const double x = p * sw->r0;
    const double r3 = sw->r0 * sw->r0 * sw->r0;
    if (x < 0.1) {
      const double x2 = x * x;
      return four_pi * sw->v0 * r3 *
             (1.0 / 3.0 - x2 * (1.0 / 30.0 - x2 * (1.0 / 840.0 - x2 * (1.0 / 45360.0 - x2 / 3991680.0))));
    }
    return four_pi * sw->v0 * r3 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
  }
  const auto breaks = v.breakpoints();
  if (p == 0.0)
    return four_pi * integrate_pieces([&](double r) { return r * r * v(r); }, breaks);
  return four_pi *
         integrate_pieces([&](double r) { return r * v(r) * std::sin(p * r) / p; }, breaks);
}

// Coefficients Vhat(2pi n/L) on the torus, tabulated by |n|^2 up to pmax.
class PeriodizedPotential {
 public:
  PeriodizedPotential(RadialPotential v, double box_length, double pmax)
      : v_(std::move(v)), box_length_(box_length), pmax_(pmax) {
    if (!(box_length > 0.0)) throw ParameterError("periodize: box length must be positive");
    if (!(pmax >= 0.0)) throw ParameterError("periodize: pmax must be >= 0");
    if (!(box_length > 2.0 * v_.support_radius()))
      throw GeometryError("periodize: L must exceed twice the support radius");
    max_norm2_ = max_norm2_for_cutoff(box_length, pmax);
    table_.resize(static_cast<std::size_t>(max_norm2_ + 1));
    const double u = kTwoPi / box_length;
    for (long m = 0; m <= max_norm2_; ++m)
      table_[std::size_t(m)] = fourier_transform_radial(v_, u * std::sqrt(double(m)));
  }

  const RadialPotential& radial() const { return v_; }
  double box_length() const { return box_length_; }
  double volume() const { return box_length_ * box_length_ * box_length_; }
  double pmax() const { return pmax_; }
  long max_norm2() const { return max_norm2_; }
  double unit() const { return kTwoPi / box_length_; }
  const std::vector<double>& table() const { return table_; }

  // Beyond the table the coefficient is computed directly (no caching).
  double coefficient_norm2(long m) const {
    if (m <= max_norm2_) return table_[std::size_t(m)];
    return fourier_transform_radial(v_, unit() * std::sqrt(double(m)));
  }
  double coefficient(const IntVec3& n) const { return coefficient_norm2(n.norm2()); }

  // V(x) = L^-3 sum_{|p| <= pmax} cos(p.x) Vhat(p).
  double evaluate(const std::array<double, 3>& x) const {
    const double u = unit();
    const int c = static_cast<int>(std::floor(std::sqrt(double(max_norm2_)) + 1e-9));
    double total = 0.0;
    for (int i = -c; i <= c; ++i)
      for (int j = -c; j <= c; ++j)
        for (int k = -c; k <= c; ++k) {
          const long m = long(i) * i + long(j) * j + long(k) * k;
          if (m > max_norm2_) continue;
          total += std::cos(u * (i * x[0] + j * x[1] + k * x[2])) * table_[std::size_t(m)];
        }
    return total / volume();
  }

  // L^-3 sum |Vhat|^2 over the retained lattice.
  double parseval_sum() const {
    const auto r3 = shell_multiplicities(max_norm2_);
    double total = 0.0;
    for (long m = 0; m <= max_norm2_; ++m)
      total += double(r3[std::size_t(m)]) * table_[std::size_t(m)] * table_[std::size_t(m)];
    return total / volume();
  }

 private:
  RadialPotential v_;
  double box_length_;
  double pmax_;
  long max_norm2_ = 0;
  std::vector<double> table_;
};

inline PeriodizedPotential periodize(const RadialPotential& v, double box_length, double pmax) {
  return PeriodizedPotential(v, box_length, pmax);
}

// Fourier cutoff such that the lattice tail of sum |Vhat| is below
// tail_tol * Vhat(0), from a power-law fit of the |Vhat| envelope.
inline double suggest_pmax(const RadialPotential& v, double box_length, double tail_tol = 1e-8) {
  if (v.is_zero()) return 0.0;
  const double r0 = v.support_radius();
  const double v0 = fourier_transform_radial(v, 0.0);
  auto envelope = [&](double p) {
    double m = 0.0;
    for (int i = 0; i <= 256; ++i)
      m = std::max(m, std::abs(fourier_transform_radial(v, p * (1.0 + i / 256.0))));
    return m;
  };
  double p = 8.0 / r0;
  double prev = envelope(p);
  for (int step = 0; step < 8; ++step) {
    const double p2 = 2.0 * p;
    const double env = envelope(p2);
    if (env < 1e-13 * v0) return p2;
    const double s = -std::log(env / prev) / std::log(2.0);
    if (s > 3.5) {
      const double c = env * std::pow(p2, s);
      const double lattice_density = std::pow(box_length / kTwoPi, 3);
      const double target = tail_tol * v0 * (s - 3.0) / (lattice_density * 4.0 * std::numbers::pi * c);
      const double pmax = std::pow(target, 1.0 / (3.0 - s));
      if (pmax <= 2.0 * p2 || step == 7) return std::max(pmax, p2);
    }
    p = p2;
    prev = env;
  }
  throw AccuracyError("suggest_pmax: Fourier coefficients decay too slowly for the tail bound");
}

}  // namespace dilute
