// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "dilute/acceptance.hpp"

namespace {

constexpr const char* kColumns = R"(Output files (CSV with a header row, shortest round-trip floats):
  scattering  neumann.csv          R, E_R, a_R, ER_R3_over_3a, scaled_deviation (|E_R - 3a/R^3| R^4),
                                   a_minus_aR, a_R_mesh (finite-difference route)
              born.csv             order, a_born, a, a_minus_born
              fourier_residual.csv L, grid_norm2, points, iterations, residual_norm, p0_residual, e_value,
                                   identity_residual, effective_interaction, eight_pi_a, vhat0
  hf-sweep    hf_sweep.csv         rho_up, rho_down, L, kinetic, direct, exchange, hf_total, formula_total,
                                   residual ((hf_total - kinetic - Vhat(0) N_up N_down / L^3) / L^3),
                                   residual_exponent_fit
  kernels     kernels.csv          rho, k_F, u_l2, u_l2_parseval, v_l2, omega_l1, u_l1, omega_at_zero, dr,
                                   points, uv_product_max
              kernel_fit.csv       quantity, exponent, target
              cutoff.csv           rho, R, l1_lower, l1_middle, l1_upper, dr, points
              cutoff_fit.csv       component, exponent, target
  ed          spectrum.csv         cutoff, dim, level, energy, method, residual, cross_check
              trial_state.csv      cutoff, dim, E0, E_trial, E_HF, trial_norm, eight_pi_a_over_L3,
                                   vhat0_over_L3, chain_ok
              identity.csv         cutoff, sample, energy, e_hf, h0, x, q, residual
              commutators.csv      p, spin_p, q, spin_q, brute, formula, difference, bb_norm
              identity_report.txt  summary of the identity, Q-operator and commutator checks
  accept      accept_summary.csv   id, measured, bound, pass (plus per-criterion cNN_*.csv files)

Exit codes: 0 success, 1 criterion failure or solver error, 2 usage or configuration error.)";

int run(int argc, char** argv) {
  CLI::App app{"Dilute Fermi gas numerics: scattering, Hartree-Fock, kernels and exact diagonalisation"};
  app.footer(kColumns);
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";
  int threads = int(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = 1;
  app.add_option("--config", config_path, "configuration file (key = value)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for random test vectors")->capture_default_str();
  auto* scat = app.add_subcommand("scattering", "Neumann sweep, Born series and Fourier scattering residual");
  auto* hf = app.add_subcommand("hf-sweep", "Hartree-Fock energy over a density sweep");
  auto* ed = app.add_subcommand("ed", "exact diagonalisation, identity checks and trial state");
  auto* ker = app.add_subcommand("kernels", "regularised kernel norms and cutoff decomposition");
  auto* acc = app.add_subcommand("accept", "run the acceptance suite with pinned configurations");
  for (auto* s : {scat, hf, ed, ker, acc}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  dilute::set_thread_count(threads);
  dilute::Config cfg;
  try {
    if (!config_path.empty()) {
      cfg = dilute::Config::load(config_path);
    } else if (!acc->parsed()) {
      std::cerr << "error: --config is required for this subcommand\n";
      return 2;
    }
    std::filesystem::create_directories(out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const dilute::RunOptions opt{out_dir, seed};
  try {
    if (scat->parsed()) dilute::cmd_scattering(cfg, opt);
    if (hf->parsed()) dilute::cmd_hf_sweep(cfg, opt);
    if (ed->parsed()) dilute::cmd_ed(cfg, opt);
    if (ker->parsed()) dilute::cmd_kernels(cfg, opt);
    if (acc->parsed()) {
      const auto rep = dilute::run_acceptance(out_dir, cfg, threads == 1 ? 3 : 1);
      return rep.all_pass() ? 0 : 1;
    }
  } catch (const dilute::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dilute::AdmissibilityError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
