// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "dilute/experiments.hpp"
#include "dilute/parallel.hpp"

namespace dilute {

struct CriterionResult {
  int id = 0;
  std::string name;
  double measured = 0.0;
  std::string bound;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;
};

struct CriterionSpec {
  int id;
  std::string name;
  double time_limit;  // seconds
  const char* defaults;
  std::function<CriterionResult(const Config&, const std::filesystem::path&)> run;
};

namespace detail {

inline double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }
inline double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

inline std::vector<double> column(const CsvTable& t, const std::string& name) {
  const auto& h = t.header();
  const auto it = std::find(h.begin(), h.end(), name);
  if (it == h.end()) throw ParameterError("column: no column '" + name + "'");
  const std::size_t j = std::size_t(it - h.begin());
  std::vector<double> out;
  for (const auto& r : t.rows()) out.push_back(std::get<double>(r[j]));
  return out;
}

// Exact fit E = c0 + c1/k + c2/k^2 through three points; returns c0.
inline double extrapolate_inverse_cutoff(const std::vector<double>& k, const std::vector<double>& e) {
  Eigen::Matrix3d a;
  Eigen::Vector3d b;
  const std::size_t n = k.size();
  for (int i = 0; i < 3; ++i) {
    const double x = 1.0 / k[n - 3 + std::size_t(i)];
    a(i, 0) = 1.0;
    a(i, 1) = x;
    a(i, 2) = x * x;
    b(i) = e[n - 3 + std::size_t(i)];
  }
  return a.colPivHouseholderQr().solve(b)(0);
}

struct IdentityCase {
  long up_cut, down_cut, n_up, n_down;
  bool zero_momentum;
};

}  // namespace detail

// ------------------------------------------------------------------ criteria

inline CriterionResult criterion_square_well(const Config& c, const std::filesystem::path& dir) {
  const auto v0s = c.get_list<double>("V0_list", {1.0, 10.0});
  const auto r0s = c.get_list<double>("R0_list", {1.0, 0.5});
  if (v0s.size() != r0s.size()) throw ConfigError("V0_list and R0_list differ in length");
  CsvTable t({"V0", "R0", "a", "closed_form", "relative_error"});
  double worst = 0.0;
  for (std::size_t i = 0; i < v0s.size(); ++i) {
    const double kappa = std::sqrt(v0s[i] / 2.0);
    const double exact = r0s[i] * (1.0 - std::tanh(kappa * r0s[i]) / (kappa * r0s[i]));
    const double a = scattering_length(RadialPotential::square_well(v0s[i], r0s[i])).value;
    const double rel = std::abs(a - exact) / exact;
    worst = std::max(worst, rel);
    t.add({v0s[i], r0s[i], a, exact, rel});
  }
  t.write(dir / "c01_square_well.csv");
  return {1, "square-well scattering length", worst, "< 1e-06", worst < 1e-6, ""};
}

inline CriterionResult criterion_neumann_energy(const Config& c, const std::filesystem::path& dir) {
  const auto r = run_scattering(c);
  r.neumann.write(dir / "c02_neumann.csv");
  const auto dev = detail::column(r.neumann, "scaled_deviation");
  const auto ratio = detail::column(r.neumann, "ER_R3_over_3a");
  const double spread = detail::max_of(dev) / detail::min_of(dev);
  const double last = std::abs(ratio.back() - 1.0);
  CriterionResult out{2, "Neumann energy E_R ~ 3a/R^3", last, "< 0.02 (spread < 10)", last < 0.02 && spread < 10.0,
                      "spread " + format_double(spread)};
  return out;
}

inline CriterionResult criterion_neumann_length(const Config& c, const std::filesystem::path& dir) {
  const auto r = run_scattering(c);
  r.neumann.write(dir / "c03_neumann.csv");
  const auto R = detail::column(r.neumann, "R");
  auto d = detail::column(r.neumann, "a_minus_aR");
  for (auto& x : d) x = std::abs(x);
  const double slope = fit_exponent(R, d);
  return {3, "finite-R scattering length slope", slope, "-1 +- 0.15", std::abs(slope + 1.0) <= 0.15, ""};
}

inline CriterionResult criterion_minimizer(const Config& c, const std::filesystem::path& dir) {
  const auto v = potential_from_config(c);
  const double L = c.get_double("L", 10.0);
  const long m2 = c.get_long("grid_norm2", 256);
  const auto grid = enumerate_momenta_norm2(L, m2);
  const PeriodizedPotential pv(v, L, 2.0 * kTwoPi / L * std::sqrt(double(m2)) * (1.0 + 1e-12));
  const LatticeConvolution conv(grid, pv);
  const auto sol = solve_scattering_fourier(pv, grid);
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += pv.coefficient(grid.points()[i]) * sol.phi[i];
  const double ident = std::abs(sol.e_value + 0.5 * s / pv.volume()) / std::abs(sol.e_value);

  std::mt19937_64 rng(std::uint64_t(c.get_long("seed", 7)));
  std::normal_distribution<double> g;
  double grad_err = 0.0;
  CsvTable t({"kind", "value"});
  t.add({std::string("e_min"), sol.e_value});
  t.add({std::string("identity_relative"), ident});
  const int dirs = int(c.get_long("directions", 4));
  for (int k = 0; k < dirs; ++k) {
    std::vector<double> phi(grid.size()), d(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      phi[i] = sol.phi[i] + 0.1 * g(rng) * std::abs(sol.phi[i]);
      d[i] = g(rng) * std::abs(sol.phi[i]);
    }
    const auto at = energy_functional_e(phi, pv, conv);
    double analytic = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) analytic += at.gradient[i] * d[i];
    const double h = 1e-3;
    auto shifted = [&](double t) {
      std::vector<double> x(phi);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += t * d[i];
      return energy_functional_e(x, pv, conv).value;
    };
    const double fd = (shifted(h) - shifted(-h)) / (2.0 * h);
    const double rel = std::abs(fd - analytic) / std::abs(analytic);
    grad_err = std::max(grad_err, rel);
    t.add({"gradient_direction_" + std::to_string(k), rel});
  }
  t.write(dir / "c04_minimizer.csv");
  const bool pass = ident < 1e-8 && grad_err < 1e-6;
  return {4, "minimizer identity and gradient", ident, "< 1e-08 (gradient < 1e-06)", pass,
          "gradient " + format_double(grad_err) + ", points " + std::to_string(grid.size())};
}

inline CriterionResult criterion_eight_pi_a(const Config& c, const std::filesystem::path& dir) {
  const auto v = potential_from_config(c);
  const auto Ls = c.get_list<double>("L_list", {20.0, 24.0, 32.0});
  const double pmax = c.get_double("pmax", 20.0);
  const auto mesh = std::size_t(c.get_long("mesh", 8000));
  const double a = scattering_length(v).value;
  CsvTable t({"L", "R", "effective_interaction", "eight_pi_a", "vhat0", "relative_error"});
  double worst = 0.0;
  bool below = true;
  for (double L : Ls) {
    const double R = L / 4.0;
    const PeriodizedPotential pv(v, L, pmax);
    const PeriodizedPhi phi(neumann_profile_matched(v, R, mesh), L, pmax);
    const double eff = effective_interaction(pv, phi);
    const double rel = std::abs(eff / (8.0 * std::numbers::pi * a) - 1.0);
    worst = std::max(worst, rel);
    below = below && eff < pv.coefficient_norm2(0);
    t.add({L, R, eff, 8.0 * std::numbers::pi * a, pv.coefficient_norm2(0), rel});
  }
  t.write(dir / "c05_eight_pi_a.csv");
  return {5, "8 pi a reconstruction", worst, "< 0.01 and below Vhat(0)", worst < 0.01 && below, ""};
}

inline CriterionResult criterion_free_gas(const Config& c, const std::filesystem::path& dir) {
  const double rho = c.get_double("rho", 1.0);
  const auto Ls = c.get_list<double>("L_list", {4.0, 8.0, 16.0, 32.0, 64.0});
  CsvTable t({"L", "N", "rho_target", "rho_actual", "kinetic_density", "limit", "relative_error"});
  std::vector<double> x, y;
  const double limit = kinetic_energy_density_limit(rho);
  for (double L : Ls) {
    const long n = nearest_closed_shell(L, rho * L * L * L);
    const auto ball = build_fermi_ball(L, n, Spin::up);
    const double e = kinetic_energy_density(ball);
    const double rel = std::abs(e - limit) / limit;
    t.add({L, (long long)n, rho, ball.density(), e, limit, rel});
    x.push_back(L);
    y.push_back(rel);
  }
  t.write(dir / "c06_free_gas.csv");
  const double slope = fit_exponent(x, y);
  return {6, "free Fermi gas kinetic density", slope, "-1 +- 0.3", std::abs(slope + 1.0) <= 0.3, ""};
}

inline CriterionResult criterion_hf_exchange(const Config& c, const std::filesystem::path& dir) {
  Config h = c;
  if (!h.has("hf.N_up")) h.set("hf.N_up", "2109");
  if (!h.has("hf.rho_list")) {
    std::string s;
    for (double r : log_spaced(1e-4, 1e-3, 5)) s += (s.empty() ? "" : ",") + format_double(r);
    h.set("hf.rho_list", s);
  }
  const auto t = run_hf_sweep(h);
  t.write(dir / "c07_hf_sweep.csv");
  const double slope = detail::column(t, "residual_exponent_fit").front();
  const double target = 7.0 / 3.0 - 0.1;
  return {7, "HF exchange residual exponent", slope, ">= 2.2333", slope >= target, ""};
}

inline CriterionResult criterion_hf_identity(const Config& c, const std::filesystem::path& dir) {
  const auto v = potential_from_config(c);
  const double L = c.get_double("L", 6.0);
  const int per = int(c.get_long("states_per_case", 6));
  std::mt19937_64 rng(std::uint64_t(c.get_long("seed", 11)));
  const std::vector<detail::IdentityCase> cases{
      {1, 1, 1, 1, true}, {1, 3, 7, 1, true}, {2, 2, 1, 1, false}, {1, 1, 7, 1, false}};
  CsvTable t({"case", "dim", "sample", "lhs", "rhs", "residual", "dense_residual"});
  double worst = 0.0;
  long count = 0;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& k = cases[ci];
    auto modes = std::make_shared<const ModeSet>(ModeSet::from_cutoff(L, k.up_cut, k.down_cut));
    const auto up = build_fermi_ball(L, k.n_up, Spin::up);
    const auto down = build_fermi_ball(L, k.n_down, Spin::down);
    OperatorContext ctx(modes, up, down, v);
    const ParticleHoleMap r(*modes, up, down);
    const auto sector = build_sector(modes, int(k.n_up), int(k.n_down),
                                     k.zero_momentum ? std::optional<IntVec3>(IntVec3{}) : std::nullopt);
    const HfIdentityChecker chk(ctx, r, sector);
    // Dense route: both sides as explicit matrices.
    const auto h = build_operator(ctx, OperatorKind::hamiltonian, sector).dense();
    const auto rhs_op = build_operator_sum(ctx, {OperatorKind::h0, OperatorKind::x, OperatorKind::q1,
                                                 OperatorKind::q2, OperatorKind::q3, OperatorKind::q4},
                                           chk.image())
                            .dense();
    Eigen::MatrixXd rmat = Eigen::MatrixXd::Zero(Eigen::Index(chk.image().dim()), Eigen::Index(sector.dim()));
    for (std::size_t j = 0; j < sector.dim(); ++j) {
      std::vector<double> e(sector.dim(), 0.0);
      e[j] = 1.0;
      const auto col = r.apply_adjoint(sector, chk.image(), e);
      for (std::size_t i = 0; i < col.size(); ++i) rmat(Eigen::Index(i), Eigen::Index(j)) = col[i];
    }
    for (int s = 0; s < per; ++s) {
      const auto psi = random_unit_vector(sector.dim(), rng);
      const auto res = chk.check(psi);
      const Eigen::Map<const Eigen::VectorXd> p(psi.data(), Eigen::Index(psi.size()));
      const Eigen::VectorXd xi = rmat * p;
      const double lhs = p.dot(h * p);
      const double rhs = ctx.hf_energy() + xi.dot(rhs_op * xi);
      const double dres = std::abs(lhs - rhs);
      worst = std::max({worst, res.residual, dres});
      ++count;
      t.add({(long long)ci, (long long)sector.dim(), (long long)s, lhs, rhs, res.residual, dres});
    }
  }
  t.write(dir / "c08_hf_identity.csv");
  const bool pass = worst < 1e-9 && count >= 20 && cases.size() >= 3;
  return {8, "particle-hole energy identity", worst, "< 1e-09", pass,
          std::to_string(count) + " states, " + std::to_string(cases.size()) + " configurations"};
}

inline CriterionResult criterion_q_operators(const Config& c, const std::filesystem::path& dir) {
  const auto v = potential_from_config(c);
  const double L = c.get_double("L", 6.0);
  auto modes = std::make_shared<const ModeSet>(ModeSet::from_cutoff(L, 2, 2));
  const auto up = build_fermi_ball(L, 1, Spin::up);
  const auto down = build_fermi_ball(L, 1, Spin::down);
  OperatorContext ctx(modes, up, down, v);
  const ParticleHoleMap r(*modes, up, down);
  const auto image = r.image_sector(build_sector(modes, 1, 1, std::nullopt));
  const auto q = q_operator_diagnostics(ctx, image, 20, std::uint64_t(c.get_long("seed", 3)));

  // Commutator table on a larger ball with random low-occupancy states.
  auto big = std::make_shared<const ModeSet>(ModeSet::from_cutoff(L, 2, 2));
  const auto bu = build_fermi_ball(L, 7, Spin::up);
  const auto bd = build_fermi_ball(L, 7, Spin::down);
  std::mt19937_64 rng(std::uint64_t(c.get_long("seed", 3)));
  EdOutput ed;
  fill_commutator_table(ed, *big, bu, bd, random_fock_vector(*big, 7, 7, 40, rng));
  ed.commutators.write(dir / "c09_commutators.csv");
  CsvTable t({"quantity", "value"});
  t.add({std::string("dim"), (long long)q.dim});
  t.add({std::string("q1_min_eig"), q.q1_min_eig});
  t.add({std::string("q1_tilde_min_eig"), q.q1_tilde_min_eig});
  t.add({std::string("q3_parity_max"), q.q3_parity_max});
  t.add({std::string("commutator_max_difference"), ed.max_commutator_difference});
  t.write(dir / "c09_q_operators.csv");
  const double m = std::min(q.q1_min_eig, q.q1_tilde_min_eig);
  const bool pass = m >= -1e-10 && q.dim <= 500 && q.q3_parity_max < 1e-12 && ed.max_commutator_difference < 1e-12;
  return {9, "Q-operator positivity, parity, commutators", m, ">= -1e-10 (parity < 1e-12, table exact)", pass,
          "parity " + format_double(q.q3_parity_max) + ", commutator " + format_double(ed.max_commutator_difference) +
              ", dim " + std::to_string(q.dim)};
}

inline Config ed_config(const Config& c, const char* cutoffs) {
  Config e = c;
  if (!e.has("potential.kind")) e.set("potential.kind", "bump");
  if (!e.has("ed.cutoff_list")) e.set("ed.cutoff_list", cutoffs);
  return e;
}

inline CriterionResult criterion_eigensolver(const Config& c, const std::filesystem::path& dir) {
  Config e = c;
  e.set("ed.identity_states", "0");
  e.set("ed.levels", "1");
  const auto out = run_ed(e, 1);
  out.spectrum.write(dir / "c10_spectrum.csv");
  out.trial.write(dir / "c10_trial_state.csv");
  double cross = 0.0;
  long dim = 0;
  for (const auto& row : out.spectrum.rows()) {
    cross = std::get<double>(row[6]);
    dim = long(std::get<long long>(row[1]));
  }
  const bool pass = cross < 1e-10 && out.chain_ok && !out.trial.rows().empty() && dim >= 400;
  return {10, "eigensolver oracle and variational chain", cross, "< 1e-10 (chain holds)", pass,
          "dim " + std::to_string(dim) + ", chain " + (out.chain_ok ? "holds" : "violated")};
}

inline CriterionResult criterion_two_body(const Config& c, const std::filesystem::path& dir) {
  const auto v = potential_from_config(c);
  const double L = c.get_double("L", 8.0);
  const auto cutoffs = c.get_list<long>("cutoff_list", {16, 25, 36, 49, 64});
  if (cutoffs.size() < 3) throw ConfigError("cutoff_list needs at least three entries");
  const auto up = build_fermi_ball(L, 1, Spin::up);
  const auto down = build_fermi_ball(L, 1, Spin::down);
  const double a = scattering_length(v).value;
  const double vh0 = fourier_transform_radial(v, 0.0);
  const double L3 = L * L * L;
  CsvTable t({"cutoff", "k_cut", "dim", "E0", "ratio_8pia", "ratio_vhat0"});
  std::vector<double> kc, e;
  for (long cut : cutoffs) {
    auto modes = std::make_shared<const ModeSet>(ModeSet::from_cutoff(L, cut, cut));
    OperatorContext ctx(modes, up, down, v);
    const auto sector = build_sector(modes, 1, 1, IntVec3{});
    const auto gs = lanczos_ground_state(build_operator(ctx, OperatorKind::hamiltonian, sector));
    kc.push_back(kTwoPi / L * std::sqrt(double(cut)));
    e.push_back(gs.E0);
    t.add({(long long)cut, kc.back(), (long long)sector.dim(), gs.E0, gs.E0 * L3 / (8.0 * std::numbers::pi * a),
           gs.E0 * L3 / vh0});
  }
  const double e_inf = detail::extrapolate_inverse_cutoff(kc, e);
  const double da = std::abs(e_inf * L3 / (8.0 * std::numbers::pi * a) - 1.0);
  const double dv = std::abs(e_inf * L3 / vh0 - 1.0);
  t.add({std::string("extrapolated"), std::nan(""), std::string(""), e_inf,
         e_inf * L3 / (8.0 * std::numbers::pi * a), e_inf * L3 / vh0});
  t.write(dir / "c11_two_body.csv");
  return {11, "two-particle energy governed by a", da, "< |E0 L^3/Vhat(0) - 1| = " + format_double(dv), da < dv,
          "Vhat deviation " + format_double(dv)};
}

inline CriterionResult criterion_kernel_norms(const Config& c, const std::filesystem::path& dir) {
  const auto k = run_kernels(c);
  k.kernels.write(dir / "c12_kernels.csv");
  k.fit.write(dir / "c12_kernel_fit.csv");
  const double beta = c.get_double("kernels.beta", 1.0 / 3.0);
  const double eps = c.get_double("kernels.epsilon", 1.0 / 3.0);
  const double du = std::abs(k.u_l2_exponent + 1.5 * beta);
  const double dw = std::abs(k.omega_l1_exponent + eps / 3.0);
  const double worst = std::max(du, dw);
  return {12, "regularised kernel norm exponents", worst, "<= 0.2 (u*v == 0)",
          worst <= 0.2 && k.uv_product_max == 0.0,
          "u_l2 " + format_double(k.u_l2_exponent) + ", omega_l1 " + format_double(k.omega_l1_exponent)};
}

inline CriterionResult criterion_cutoff(const Config& c, const std::filesystem::path& dir) {
  const auto cut = run_cutoff(c);
  cut.table.write(dir / "c13_cutoff.csv");
  cut.fit.write(dir / "c13_cutoff_fit.csv");
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(cut.exponents[i] - cut.targets[i]));
  return {13, "cutoff decomposition exponents", worst, "<= 0.25", worst <= 0.25,
          "exponents " + format_double(cut.exponents[0]) + " " + format_double(cut.exponents[1]) + " " +
              format_double(cut.exponents[2])};
}

inline const std::vector<CriterionSpec>& acceptance_criteria() {
  static const std::vector<CriterionSpec> specs{
      {1, "square-well scattering length", 1.0, "", criterion_square_well},
      {2, "Neumann energy", 10.0, "potential.kind = square_well\nscattering.fourier_norm2 = 16\n",
       criterion_neumann_energy},
      {3, "finite-R scattering length", 10.0, "potential.kind = square_well\nscattering.fourier_norm2 = 16\n",
       criterion_neumann_length},
      {4, "minimizer identity", 30.0, "potential.kind = square_well\n", criterion_minimizer},
      {5, "8 pi a reconstruction", 30.0, "potential.kind = bump\npotential.V0 = 0.5\n", criterion_eight_pi_a},
      {6, "free Fermi gas", 5.0, "", criterion_free_gas},
      {7, "HF exchange", 60.0, "potential.kind = square_well\n", criterion_hf_exchange},
      {8, "HF identity", 60.0, "potential.kind = square_well\npotential.V0 = 5\npotential.R0 = 1.5\n",
       criterion_hf_identity},
      {9, "Q operators", 60.0, "potential.kind = square_well\npotential.V0 = 5\npotential.R0 = 1.5\n",
       criterion_q_operators},
      {10, "eigensolver oracle", 120.0, "potential.kind = bump\ned.L = 8\ned.cutoff_list = 4,9,16,25\n",
       criterion_eigensolver},
      {11, "two-particle physics", 300.0, "potential.kind = bump\n", criterion_two_body},
      {12, "kernel norms", 60.0, "", criterion_kernel_norms},
      {13, "cutoff decomposition", 60.0, "potential.kind = square_well\n", criterion_cutoff},
  };
  return specs;
}

// Pinned configuration of one criterion; overrides use keys "cNN.key".
inline Config criterion_config(const CriterionSpec& spec, const Config& overrides) {
  Config c = Config::from_string(spec.defaults);
  const std::string prefix = (spec.id < 10 ? "c0" : "c") + std::to_string(spec.id) + ".";
  for (const auto& [k, v] : overrides.values())
    if (k.rfind(prefix, 0) == 0) c.set(k.substr(prefix.size()), v);
  return c;
}

inline std::string summary_line(const CriterionResult& r) {
  std::string s = "criterion " + std::to_string(r.id) + " " + (r.pass ? "PASS" : "FAIL") + " measured=" +
                  format_double(r.measured) + " bound " + r.bound + " [" + r.name + "]";
  if (!r.detail.empty()) s += " " + r.detail;
  return s;
}

namespace detail {

inline std::vector<CriterionResult> run_criteria(const Config& overrides, const std::filesystem::path& dir,
                                                 std::ostream* log) {
  std::filesystem::create_directories(dir);
  std::vector<CriterionResult> out;
  for (const auto& spec : acceptance_criteria()) {
    Config cfg;
    try {
      cfg = criterion_config(spec, overrides);
    } catch (const Error& e) {
      throw ConfigError("criterion " + std::to_string(spec.id) + ": " + e.what());
    }
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = spec.run(cfg, dir);
    } catch (const ConfigError& e) {
      throw ConfigError("criterion " + std::to_string(spec.id) + ": " + e.what());
    } catch (const Error& e) {
      r = {spec.id, spec.name, std::nan(""), "", false, std::string("error: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.time_limit = spec.time_limit;
    if (r.seconds > spec.time_limit) {
      r.pass = false;
      r.detail += " runtime limit exceeded";
    }
    if (log) *log << summary_line(r) << " time=" << std::fixed << std::setprecision(2) << r.seconds << "s/"
                  << spec.time_limit << "s" << std::defaultfloat << std::endl;
    out.push_back(r);
  }
  return out;
}

inline CsvTable summary_table(const std::vector<CriterionResult>& rs) {
  CsvTable t({"id", "measured", "bound", "pass"});
  for (const auto& r : rs) t.add({(long long)r.id, r.measured, r.bound, (long long)r.pass});
  return t;
}

inline std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace detail

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  bool all_pass() const {
    return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
  }
};

// Runs criteria 1-13 into `out`, repeats them into out/repeat with
// `repeat_threads` workers and compares the CSV bytes (criterion 14).
inline AcceptanceReport run_acceptance(const std::filesystem::path& out, const Config& overrides = Config{},
                                       int repeat_threads = 3, std::ostream* log = &std::cout) {
  AcceptanceReport rep;
  rep.results = detail::run_criteria(overrides, out, log);
  const int saved = thread_count_setting();
  set_thread_count(repeat_threads);
  const auto repeat_dir = out / "repeat";
  const auto t0 = std::chrono::steady_clock::now();
  if (log) *log << "repeating criteria 1-13 with " << repeat_threads << " threads" << std::endl;
  const auto again = detail::run_criteria(overrides, repeat_dir, nullptr);
  set_thread_count(saved);
  detail::summary_table(rep.results).write(out / "accept_summary.csv");
  long differing = 0, compared = 0;
  std::string names;
  for (const auto& entry : std::filesystem::directory_iterator(repeat_dir)) {
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    const auto other = out / entry.path().filename();
    if (!std::filesystem::exists(other) || detail::read_bytes(other) != detail::read_bytes(entry.path())) {
      ++differing;
      names += " " + entry.path().filename().string();
    }
  }
  CriterionResult r{14, "bitwise determinism across thread counts", double(differing), "== 0 differing CSVs",
                    differing == 0 && compared > 0, std::to_string(compared) + " files compared" + names};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.time_limit = std::numeric_limits<double>::infinity();
  if (log) *log << summary_line(r) << std::endl;
  rep.results.push_back(r);
  detail::summary_table(rep.results).write(out / "accept_summary.csv");
  std::ofstream times(out / "timings.txt");
  for (const auto& x : rep.results)
    times << x.id << " " << std::fixed << std::setprecision(3) << x.seconds << " " << x.time_limit << "\n";
  return rep;
}

}  // namespace dilute
