// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dilute/config.hpp"
#include "dilute/csv.hpp"
#include "dilute/fermi_gas.hpp"
#include "dilute/fit.hpp"
#include "dilute/fock_ed.hpp"
#include "dilute/scattering.hpp"

namespace dilute {

struct RunOptions {
  std::filesystem::path out = ".";
  std::uint64_t seed = 1;
};

inline std::vector<double> log_spaced(double lo, double hi, int n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw ConfigError("log_spaced: need n >= 2 and 0 < lo < hi");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / double(n - 1)));
  return out;
}

inline RadialPotential potential_from_config(const Config& c) {
  const std::string kind = c.get_string("potential.kind", "square_well");
  const double v0 = c.get_double("potential.V0", 1.0);
  const double r0 = c.get_double("potential.R0", 1.0);
  if (kind == "square_well") return RadialPotential::square_well(v0, r0);
  if (kind == "zero") return RadialPotential::zero(r0);
  if (kind == "bump") {
    const std::string order = c.get_string("potential.order", "inf");
    return RadialPotential::smooth_bump(v0, r0, order == "inf" ? kInfiniteOrder : int(c.get_long("potential.order", 0)));
  }
  if (kind == "tabulated") return read_tabulated_potential(c.require_string("potential.file"));
  throw ConfigError("config: potential.kind must be square_well, bump, zero or tabulated");
}

inline const std::set<std::string>& potential_keys() {
  static const std::set<std::string> k{"potential.kind", "potential.V0", "potential.R0", "potential.order",
                                       "potential.file"};
  return k;
}

// Keys of the calling subcommand's sections must be known; other sections
// may only be those of the remaining subcommands or acceptance overrides.
inline void require_keys(const Config& c, std::set<std::string> known) {
  known.insert(potential_keys().begin(), potential_keys().end());
  static const std::set<std::string> all_sections{"potential", "scattering", "hf", "kernels", "cutoff", "ed"};
  auto section = [](const std::string& k) { return k.substr(0, k.find('.')); };
  std::set<std::string> own;
  for (const auto& k : known) own.insert(section(k));
  for (const auto& [k, v] : c.values()) {
    const auto s = section(k);
    const bool override_key = s.size() == 3 && s[0] == 'c' && std::isdigit(static_cast<unsigned char>(s[1])) &&
                              std::isdigit(static_cast<unsigned char>(s[2]));
    if (own.count(s) ? !known.count(k) : !(all_sections.count(s) || override_key))
      throw ConfigError("config: unknown key '" + k + "'");
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << text;
}

// ---------------------------------------------------------------- scattering

struct ScatteringOutput {
  CsvTable neumann{{"R", "E_R", "a_R", "ER_R3_over_3a", "scaled_deviation", "a_minus_aR", "a_R_mesh"}};
  CsvTable born{{"order", "a_born", "a", "a_minus_born"}};
  CsvTable fourier{{"L", "grid_norm2", "points", "iterations", "residual_norm", "p0_residual", "e_value",
                    "identity_residual", "effective_interaction", "eight_pi_a", "vhat0"}};
  double a = 0.0;
};

inline ScatteringOutput run_scattering(const Config& c) {
  require_keys(c, {"scattering.R_list", "scattering.mesh", "scattering.fourier_L", "scattering.fourier_norm2"});
  const auto v = potential_from_config(c);
  const double r0 = v.support_radius();
  ScatteringOutput out;
  out.a = scattering_length(v).value;
  auto radii = c.get_list<double>("scattering.R_list", {10.0 * r0, 20.0 * r0, 40.0 * r0, 80.0 * r0});
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  const auto mesh = std::size_t(c.get_long("scattering.mesh", 4000));
  for (double R : radii) {
    const auto m = solve_neumann_matched(v, R);
    const double ratio = out.a > 0.0 ? m.energy * R * R * R / (3.0 * out.a) : 0.0;
    const double dev = std::abs(m.energy - 3.0 * out.a / (R * R * R)) * R * R * R * R;
    const double a_mesh = solve_neumann(v, R, mesh).a_R;
    out.neumann.add({R, m.energy, m.a_R, ratio, dev, out.a - m.a_R, a_mesh});
  }
  const auto born = born_series(v, 2);
  for (std::size_t i = 0; i < born.size(); ++i) out.born.add({(long long)(i + 1), born[i], out.a, out.a - born[i]});

  const double L = c.get_double("scattering.fourier_L", 10.0 * r0);
  const long m2 = c.get_long("scattering.fourier_norm2", 256);
  const auto grid = enumerate_momenta_norm2(L, m2);
  const double reach = 2.0 * kTwoPi / L * std::sqrt(double(m2));
  const PeriodizedPotential pv(v, L, reach * (1.0 + 1e-12));
  const auto sol = solve_scattering_fourier(pv, grid);
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += pv.coefficient(grid.points()[i]) * sol.phi[i];
  const double ident = std::abs(sol.e_value + 0.5 * s / pv.volume());
  out.fourier.add({L, (long long)m2, (long long)grid.size(), (long long)sol.iterations, sol.residual_norm,
                   sol.p0_residual, sol.e_value, sol.e_value != 0.0 ? ident / std::abs(sol.e_value) : ident,
                   effective_interaction(pv, sol), 8.0 * std::numbers::pi * out.a, pv.coefficient_norm2(0)});
  return out;
}

inline void cmd_scattering(const Config& c, const RunOptions& opt) {
  const auto r = run_scattering(c);
  r.neumann.write(opt.out / "neumann.csv");
  r.born.write(opt.out / "born.csv");
  r.fourier.write(opt.out / "fourier_residual.csv");
  write_gnuplot_script(opt.out / "neumann.gp", "neumann.csv", r.neumann, 0, {3, 4}, true);
}

// ------------------------------------------------------------------ hf sweep

inline long nearest_closed_shell(double L, double target) {
  const auto sizes = closed_shell_sizes(L, long(2.0 * target) + 64);
  long best = sizes.front();
  for (long s : sizes)
    if (std::abs(double(s) - target) < std::abs(double(best) - target)) best = s;
  return best;
}

inline CsvTable run_hf_sweep(const Config& c) {
  require_keys(c, {"hf.N_up", "hf.N_down", "hf.L_list", "hf.rho_list"});
  const auto v = potential_from_config(c);
  const long n_up = c.get_long("hf.N_up", 257);
  const long n_down = c.get_long("hf.N_down", n_up);
  std::vector<double> Ls;
  if (c.has("hf.L_list") == c.has("hf.rho_list")) throw ConfigError("config: give exactly one of hf.L_list, hf.rho_list");
  if (c.has("hf.L_list")) {
    Ls = c.get_list<double>("hf.L_list", {});
  } else {
    for (double rho : c.get_list<double>("hf.rho_list", {})) {
      if (!(rho > 0.0)) throw ConfigError("config: hf.rho_list entries must be positive");
      Ls.push_back(std::cbrt(double(n_up + n_down) / rho));
    }
  }
  std::sort(Ls.begin(), Ls.end(), std::greater<>());
  Ls.erase(std::unique(Ls.begin(), Ls.end()), Ls.end());
  const double vh0 = fourier_transform_radial(v, 0.0);
  const double a = scattering_length(v).value;
  CsvTable t({"rho_up", "rho_down", "L", "kinetic", "direct", "exchange", "hf_total", "formula_total", "residual",
              "residual_exponent_fit"});
  std::vector<std::vector<CsvCell>> rows;
  std::vector<double> rho, res;
  for (double L : Ls) {
    const auto up = build_fermi_ball(L, n_up, Spin::up);
    const auto down = build_fermi_ball(L, n_down, Spin::down);
    const double kf = std::max(up.k_F(), down.k_F());
    const PeriodizedPotential pv(v, L, 2.0 * kf + 2.0 * kTwoPi / L);
    const auto hf = hf_energy(up, down, pv);
    const double L3 = L * L * L;
    const double r = (hf.total - hf.kinetic - vh0 * double(n_up) * double(n_down) / L3) / L3;
    const auto f = eval_energy_formula(up.density(), down.density(), a);
    rows.push_back({up.density(), down.density(), L, hf.kinetic, hf.direct, hf.exchange, hf.total, f.value * L3, r});
    rho.push_back(up.density() + down.density());
    res.push_back(std::abs(r));
  }
  double slope = std::nan("");
  if (rows.size() >= 2 && std::all_of(res.begin(), res.end(), [](double x) { return x > 0.0; }))
    slope = fit_exponent(rho, res);
  for (auto& row : rows) {
    row.push_back(slope);
    t.add(row);
  }
  return t;
}

inline void cmd_hf_sweep(const Config& c, const RunOptions& opt) {
  const auto t = run_hf_sweep(c);
  t.write(opt.out / "hf_sweep.csv");
  write_gnuplot_script(opt.out / "hf_sweep.gp", "hf_sweep.csv", t, 0, {8}, true);
}

// ------------------------------------------------------------------- kernels

struct KernelOutput {
  CsvTable kernels{{"rho", "k_F", "u_l2", "u_l2_parseval", "v_l2", "omega_l1", "u_l1", "omega_at_zero", "dr", "points",
                    "uv_product_max"}};
  CsvTable fit{{"quantity", "exponent", "target"}};
  double uv_product_max = 0.0;
  double u_l2_exponent = 0.0;
  double omega_l1_exponent = 0.0;
};

// max |u^r v^r| over a fine momentum sample through the Fermi surface.
inline double uv_product_max(const RegularizedKernels& ker) {
  double m = 0.0;
  const double top = 4.0 * ker.k_F();
  for (int i = 0; i <= 200000; ++i) {
    const double k = top * double(i) / 200000.0;
    m = std::max(m, std::abs(ker.u_hat(k) * ker.v_hat(k)));
  }
  return m;
}

inline KernelOutput run_kernels(const Config& c) {
  const auto rhos = c.get_list<double>("kernels.rho_list", log_spaced(1e-4, 1e-3, 5));
  const double beta = c.get_double("kernels.beta", 1.0 / 3.0);
  const double eps = c.get_double("kernels.epsilon", 1.0 / 3.0);
  KernelOutput out;
  const auto rep = kernel_norm_diagnostics(rhos, beta, eps);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    const double uv = uv_product_max(build_regularized_kernels(rhos[i], beta, eps));
    out.uv_product_max = std::max(out.uv_product_max, uv);
    out.kernels.add({r.rho, r.k_F, r.u_l2, r.u_l2_parseval, r.v_l2, r.omega_l1, r.u_l1, r.omega_at_zero, r.dr,
                     (long long)r.points, uv});
  }
  out.u_l2_exponent = rep.u_l2_exponent;
  out.omega_l1_exponent = rep.omega_l1_exponent;
  out.fit.add({std::string("u_l2"), rep.u_l2_exponent, -1.5 * beta});
  out.fit.add({std::string("omega_l1"), rep.omega_l1_exponent, -eps / 3.0});
  out.fit.add({std::string("v_l2"), rep.v_l2_exponent, std::nan("")});
  out.fit.add({std::string("u_l1"), rep.u_l1_exponent, std::nan("")});
  return out;
}

struct CutoffOutput {
  CsvTable table{{"rho", "R", "l1_lower", "l1_middle", "l1_upper", "dr", "points"}};
  CsvTable fit{{"component", "exponent", "target"}};
  std::array<double, 3> exponents{};
  std::array<double, 3> targets{};
};

inline CutoffParams cutoff_params_from_config(const Config& c) {
  CutoffParams p;
  p.gamma = c.get_double("cutoff.gamma", p.gamma);
  p.eta = c.get_double("cutoff.eta", p.eta);
  p.delta = c.get_double("cutoff.delta", p.delta);
  p.beta = c.get_double("cutoff.beta", p.beta);
  if (!(p.gamma > 0.0 && p.gamma <= 1.0 / 3.0 + 1e-12))
    throw AdmissibilityError("config: cutoff.gamma must lie in (0, 1/3]");
  try {
    check_cutoff_params(p);
  } catch (const ParameterError& e) {
    throw AdmissibilityError(std::string("config: ") + e.what());
  }
  return p;
}

inline CutoffOutput run_cutoff(const Config& c) {
  const auto v = potential_from_config(c);
  const auto p = cutoff_params_from_config(c);
  const auto rhos = c.get_list<double>("cutoff.rho_list", log_spaced(1e-9, 1e-6, 7));
  const double h = c.get_double("cutoff.mesh_spacing", 0.005 * v.support_radius());
  CutoffOutput out;
  std::array<std::vector<double>, 3> norms;
  for (double rho : rhos) {
    const double R = std::pow(rho, -p.gamma);
    const auto sol = neumann_profile_matched(v, R, std::size_t(std::ceil(R / h)));
    const auto d = cutoff_decomposition(sol, v.support_radius(), rho, p);
    for (int i = 0; i < 3; ++i) norms[i].push_back(d.l1_norms[i]);
    out.table.add({rho, R, d.l1_norms[0], d.l1_norms[1], d.l1_norms[2], d.dr, (long long)d.points});
  }
  out.targets = {-2.0 * p.gamma, -2.0 * p.eta, -2.0 * p.eta / p.delta};
  const char* names[3] = {"lower", "middle", "upper"};
  for (int i = 0; i < 3; ++i) {
    out.exponents[i] = fit_exponent(rhos, norms[i]);
    out.fit.add({std::string(names[i]), out.exponents[i], out.targets[i]});
  }
  return out;
}

inline void cmd_kernels(const Config& c, const RunOptions& opt) {
  require_keys(c, {"kernels.rho_list", "kernels.beta", "kernels.epsilon", "cutoff.gamma", "cutoff.eta",
                   "cutoff.delta", "cutoff.beta", "cutoff.rho_list", "cutoff.mesh_spacing"});
  cutoff_params_from_config(c);
  const auto k = run_kernels(c);
  k.kernels.write(opt.out / "kernels.csv");
  k.fit.write(opt.out / "kernel_fit.csv");
  write_gnuplot_script(opt.out / "kernels.gp", "kernels.csv", k.kernels, 0, {2, 5}, true);
  const auto cut = run_cutoff(c);
  cut.table.write(opt.out / "cutoff.csv");
  cut.fit.write(opt.out / "cutoff_fit.csv");
}

// ------------------------------------------------------------------------ ed

struct EdOutput {
  CsvTable spectrum{{"cutoff", "dim", "level", "energy", "method", "residual", "cross_check"}};
  CsvTable trial{{"cutoff", "dim", "E0", "E_trial", "E_HF", "trial_norm", "eight_pi_a_over_L3", "vhat0_over_L3",
                  "chain_ok"}};
  CsvTable identity{{"cutoff", "sample", "energy", "e_hf", "h0", "x", "q", "residual"}};
  CsvTable commutators{{"p", "spin_p", "q", "spin_q", "brute", "formula", "difference", "bb_norm"}};
  std::string report;
  double max_identity_residual = 0.0;
  double max_commutator_difference = 0.0;
  bool chain_ok = true;
  std::optional<QDiagnostics> q;
};

inline const char* method_name(EigenMethod m) {
  switch (m) {
    case EigenMethod::dense: return "dense";
    case EigenMethod::iterative: return "lanczos";
    default: return "auto";
  }
}

inline std::string vec_string(const IntVec3& n) {
  return std::to_string(n.x) + " " + std::to_string(n.y) + " " + std::to_string(n.z);
}

inline IntVec3 config_vec3(const Config& c, const std::string& key) {
  const auto v = c.get_list<long>(key, {0, 0, 0});
  if (v.size() != 3) throw ConfigError("config: key '" + key + "' needs three integers");
  return IntVec3{int(v[0]), int(v[1]), int(v[2])};
}

// Deterministic random sparse Fock vector over words with the given spin counts.
inline FockVector random_fock_vector(const ModeSet& modes, int n_up, int n_down, int words, std::mt19937_64& rng) {
  FockVector psi;
  std::normal_distribution<double> g;
  for (int w = 0; w < words; ++w) {
    Word x;
    for (auto [s, n] : {std::pair{Spin::up, n_up}, std::pair{Spin::down, n_down}}) {
      std::vector<std::uint32_t> idx(modes.count(s));
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = std::uint32_t(modes.offset(s) + i);
      for (int k = 0; k < n; ++k) {
        std::uniform_int_distribution<std::size_t> pick(std::size_t(k), idx.size() - 1);
        std::swap(idx[std::size_t(k)], idx[pick(rng)]);
        x.push_back(idx[std::size_t(k)]);
      }
    }
    std::sort(x.begin(), x.end());
    psi[x] += g(rng);
  }
  double s = 0.0;
  for (const auto& [w, v] : psi) s += v * v;
  for (auto& [w, v] : psi) v /= std::sqrt(s);
  return psi;
}

inline std::vector<std::pair<IntVec3, Spin>> commutator_labels() {
  std::vector<std::pair<IntVec3, Spin>> out;
  for (const IntVec3& p : {IntVec3{1, 0, 0}, IntVec3{-1, 0, 0}, IntVec3{0, 1, 0}, IntVec3{1, 1, 0}})
    for (Spin s : {Spin::up, Spin::down}) out.push_back({p, s});
  return out;
}

inline void fill_commutator_table(EdOutput& out, const ModeSet& modes, const FermiBall& up, const FermiBall& down,
                                  const FockVector& psi) {
  for (const auto& [p, sp] : commutator_labels())
    for (const auto& [q, sq] : commutator_labels()) {
      const auto& bp = sp == Spin::up ? up : down;
      const auto& bq = sq == Spin::up ? up : down;
      const auto brute = pseudo_boson_commutator(modes, bp, p, bq, q, psi);
      const double formula = pseudo_boson_commutator_formula(modes, bp, p, bq, q, psi);
      const double diff = std::abs(brute.b_bdag - formula);
      out.max_commutator_difference = std::max({out.max_commutator_difference, diff, brute.b_b});
      out.commutators.add({vec_string(p), std::string(spin_name(sp)), vec_string(q), std::string(spin_name(sq)),
                           brute.b_bdag, formula, diff, brute.b_b});
    }
}

inline EdOutput run_ed(const Config& c, std::uint64_t seed) {
  require_keys(c, {"ed.L", "ed.N_up", "ed.N_down", "ed.cutoff_list", "ed.P", "ed.method", "ed.dim_cap",
                   "ed.phi_mesh", "ed.phi_R", "ed.phi_pmax", "ed.identity_states", "ed.identity_max_dim",
                   "ed.levels"});
  const auto v = potential_from_config(c);
  const double L = c.get_double("ed.L", 8.0);
  const long n_up = c.get_long("ed.N_up", 1);
  const long n_down = c.get_long("ed.N_down", 1);
  const auto cutoffs = c.get_list<long>("ed.cutoff_list", {4, 9, 16, 25});
  const IntVec3 P = config_vec3(c, "ed.P");
  const std::string method_s = c.get_string("ed.method", "auto");
  EigenMethod method = EigenMethod::automatic;
  if (method_s == "dense") method = EigenMethod::dense;
  else if (method_s == "lanczos") method = EigenMethod::iterative;
  else if (method_s != "auto") throw ConfigError("config: ed.method must be auto, dense or lanczos");
  const auto cap = std::size_t(c.get_long("ed.dim_cap", long(kDefaultSectorCap)));
  const int states = int(c.get_long("ed.identity_states", 5));
  const auto id_max = std::size_t(c.get_long("ed.identity_max_dim", 3000));
  const int levels = int(c.get_long("ed.levels", 4));

  const auto up = build_fermi_ball(L, n_up, Spin::up);
  const auto down = build_fermi_ball(L, n_down, Spin::down);
  const double a = scattering_length(v).value;
  const double L3 = L * L * L;
  const double vh0 = fourier_transform_radial(v, 0.0);
  std::optional<PeriodizedPhi> phi;
  if (!v.is_zero()) {
    const auto sol = neumann_profile_matched(v, c.get_double("ed.phi_R", L / 4.0),
                                             std::size_t(c.get_long("ed.phi_mesh", 4000)));
    phi.emplace(sol, L, c.get_double("ed.phi_pmax", 10.0));
  }

  EdOutput out;
  std::mt19937_64 rng(seed);
  std::ostringstream rep;
  rep << "sector N_up=" << n_up << " N_down=" << n_down << " P=(" << vec_string(P) << ") L=" << format_double(L)
      << "\n";
  for (std::size_t ci = 0; ci < cutoffs.size(); ++ci) {
    const long cut = cutoffs[ci];
    auto modes = std::make_shared<const ModeSet>(ModeSet::from_cutoff(L, cut, cut));
    OperatorContext ctx(modes, up, down, v);
    if (phi) ctx.set_phi(*phi);
    FockSector sector = [&] {
      try {
        return build_sector(modes, int(n_up), int(n_down), P, cap);
      } catch (const ResourceLimitError& e) {
        throw ResourceLimitError(std::string(e.what()) + " (cutoff " + std::to_string(cut) +
                                 "; try a smaller ed.cutoff_list entry)");
      }
    }();
    const auto h = build_operator(ctx, OperatorKind::hamiltonian, sector);
    const auto gs = ground_state(h, method, seed);
    out.spectrum.add({(long long)cut, (long long)sector.dim(), 0LL, gs.E0, std::string(method_name(gs.method)),
                      gs.residual, gs.cross_check});
    if (sector.dim() <= kDenseLimit && levels > 1) {
      const auto ev = dense_eigenvalues(h);
      for (int l = 1; l < levels && std::size_t(l) < ev.size(); ++l)
        out.spectrum.add({(long long)cut, (long long)sector.dim(), (long long)l, ev[std::size_t(l)],
                          std::string("dense"), std::nan(""), std::nan("")});
    }
    const ParticleHoleMap r(*modes, up, down);
    if (sector.find(r.ffg_word())) {
      const auto trial = trial_state_energy(ctx, r, sector, h);
      const bool ok = gs.E0 <= trial.energy + 1e-12 * std::max(1.0, std::abs(gs.E0)) &&
                      trial.energy <= trial.e_hf + 1e-12;
      out.chain_ok = out.chain_ok && ok;
      out.trial.add({(long long)cut, (long long)sector.dim(), gs.E0, trial.energy, trial.e_hf, trial.norm,
                     8.0 * std::numbers::pi * a / L3, vh0 / L3, (long long)ok});
    }
    if (sector.dim() <= id_max) {
      const HfIdentityChecker chk(ctx, r, sector);
      for (int s = 0; s < states; ++s) {
        const auto res = chk.check(random_unit_vector(sector.dim(), rng));
        out.max_identity_residual = std::max(out.max_identity_residual, res.residual);
        out.identity.add({(long long)cut, (long long)s, res.energy, res.e_hf, res.h0, res.x, res.q, res.residual});
      }
      if (ci == 0 && chk.image().dim() <= kDenseLimit) out.q = q_operator_diagnostics(ctx, chk.image(), 20, seed);
    }
    if (ci == 0) fill_commutator_table(out, *modes, up, down, to_fock_vector(sector, gs.ground_vector));
  }
  rep << "identity max residual " << format_double(out.max_identity_residual) << " over "
      << out.identity.rows().size() << " states\n";
  if (out.q) {
    rep << "Q1_min_eig " << format_double(out.q->q1_min_eig) << "\n"
        << "Q1_tilde_min_eig " << format_double(out.q->q1_tilde_min_eig) << "\n"
        << "Q1_minus_Q1_tilde_min " << format_double(out.q->q1_minus_q1_tilde_min) << "\n"
        << "Q3_parity_max " << format_double(out.q->q3_parity_max) << "\n"
        << "vacuum_max " << format_double(out.q->vacuum_max) << "\n";
  }
  rep << "commutator max difference " << format_double(out.max_commutator_difference) << "\n"
      << "variational chain " << (out.chain_ok ? "holds" : "violated") << "\n";
  out.report = rep.str();
  return out;
}

inline void cmd_ed(const Config& c, const RunOptions& opt) {
  const auto r = run_ed(c, opt.seed);
  r.spectrum.write(opt.out / "spectrum.csv");
  r.trial.write(opt.out / "trial_state.csv");
  r.identity.write(opt.out / "identity.csv");
  r.commutators.write(opt.out / "commutators.csv");
  write_text(opt.out / "identity_report.txt", r.report);
  write_gnuplot_script(opt.out / "trial_state.gp", "trial_state.csv", r.trial, 0, {2, 3, 4}, false);
}

}  // namespace dilute
