// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "dilute/errors.hpp"
#include "dilute/fock/sparse.hpp"

namespace dilute {

enum class EigenMethod { dense, iterative, automatic };

inline constexpr std::size_t kDenseLimit = 2000;

struct SpectralResult {
  double E0 = 0.0;
  std::vector<double> ground_vector;
  double residual = 0.0;
  EigenMethod method = EigenMethod::dense;
  int iterations = 0;
  double cross_check = 0.0;  // |E0(dense) - E0(iterative)| when both ran
};

namespace detail {

inline double residual_norm(const SparseMatrix& h, const std::vector<double>& v, double e) {
  auto hv = h.apply(v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += (hv[i] - e * v[i]) * (hv[i] - e * v[i]);
  return std::sqrt(s);
}

// Sign convention: largest-magnitude component positive.
inline void fix_sign(std::vector<double>& v) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[k]) * (1.0 + 1e-12)) k = i;
  if (!v.empty() && v[k] < 0.0)
    for (auto& x : v) x = -x;
}

}  // namespace detail

inline SpectralResult dense_ground_state(const SparseMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw ParameterError("dense_ground_state: empty or non-square matrix");
  if (h.rows() > 4 * kDenseLimit) throw ResourceLimitError("dense_ground_state: dimension too large");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
  if (es.info() != Eigen::Success) throw ConvergenceError("dense_ground_state: eigensolver failed");
  SpectralResult r;
  r.E0 = es.eigenvalues()(0);
  r.ground_vector.resize(h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i) r.ground_vector[i] = es.eigenvectors()(Eigen::Index(i), 0);
  detail::fix_sign(r.ground_vector);
  r.residual = detail::residual_norm(h, r.ground_vector, r.E0);
  r.method = EigenMethod::dense;
  return r;
}

inline std::vector<double> dense_eigenvalues(const SparseMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense_eigenvalues: eigensolver failed");
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

// Lanczos with full reorthogonalisation from a seeded random start vector.
inline SpectralResult lanczos_ground_state(const SparseMatrix& h, double tol = 1e-12, int max_iter = 600,
                                           std::uint64_t seed = 1) {
  const std::size_t n = h.rows();
  if (n == 0 || h.cols() != n) throw ParameterError("lanczos_ground_state: empty or non-square matrix");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> q(n);
  for (auto& x : q) x = dist(rng);
  const double q0 = norm(q);
  for (auto& x : q) x /= q0;
  std::vector<std::vector<double>> basis{q};
  std::vector<double> alpha, beta;
  const int kmax = int(std::min<std::size_t>(std::size_t(max_iter), n));
  double e = 0.0, est = 0.0;
  Eigen::VectorXd s;
  for (int k = 0; k < kmax; ++k) {
    auto w = h.apply(basis.back());
    alpha.push_back(dot(w, basis.back()));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        const double c = dot(w, b);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * b[i];
      }
    const double bnext = norm(w);
    const int m = int(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[std::size_t(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[std::size_t(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    e = es.eigenvalues()(0);
    s = es.eigenvectors().col(0);
    est = std::abs(bnext * s(m - 1));
    if (est < tol * std::max(1.0, std::abs(e)) || bnext < 1e-14 || m == int(n)) break;
    beta.push_back(bnext);
    for (auto& x : w) x /= bnext;
    basis.push_back(std::move(w));
  }
  SpectralResult r;
  r.ground_vector.assign(n, 0.0);
  for (Eigen::Index j = 0; j < s.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) r.ground_vector[i] += s(j) * basis[std::size_t(j)][i];
  const double vn = norm(r.ground_vector);
  for (auto& x : r.ground_vector) x /= vn;
  detail::fix_sign(r.ground_vector);
  r.E0 = e;
  r.residual = detail::residual_norm(h, r.ground_vector, e);
  r.iterations = int(s.size());
  r.method = EigenMethod::iterative;
  if (r.residual > 1e-8 * std::max(1.0, std::abs(e)))
    throw ConvergenceError("lanczos_ground_state: residual " + std::to_string(r.residual) + " after " +
                           std::to_string(r.iterations) + " iterations");
  return r;
}

// Iterative ground state, cross-checked against the dense solver when the
// dimension permits.
inline SpectralResult ground_state(const SparseMatrix& h, EigenMethod method = EigenMethod::automatic,
                                   std::uint64_t seed = 1) {
  if (method == EigenMethod::dense) return dense_ground_state(h);
  if (method == EigenMethod::automatic && h.rows() <= 64) return dense_ground_state(h);
  SpectralResult r = lanczos_ground_state(h, 1e-12, 600, seed);
  if (h.rows() <= kDenseLimit) {
    const auto d = dense_ground_state(h);
    r.cross_check = std::abs(d.E0 - r.E0);
  }
  return r;
}

// exp(A) v for a real matrix A (antisymmetric in practice).
struct ExpmResult {
  std::vector<double> value;
  int terms = 0;
  double tail_bound = 0.0;
  bool dense = false;
};

inline ExpmResult expm_apply_series(const SparseMatrix& a, const std::vector<double>& v, double tol = 1e-14,
                                    int max_terms = 400) {
  const double anorm = a.norm_inf();
  const int steps = std::max(1, int(std::ceil(anorm / 2.0)));
  const double sn = anorm / steps;
  ExpmResult r;
  r.value = v;
  for (int s = 0; s < steps; ++s) {
    std::vector<double> term = r.value, sum = r.value;
    double fact_bound = 1.0;  // sn^n / n!
    int n = 0;
    for (;;) {
      ++n;
      if (n > max_terms) throw ConvergenceError("expm_apply_series: no convergence within the term limit");
      term = a.apply(term);
      for (auto& x : term) x /= (double(n) * steps);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
      fact_bound *= sn / n;
      const double tail = fact_bound * sn / (n + 1) * std::exp(sn) * norm(r.value);
      if (tail < tol) {
        r.tail_bound += tail;
        break;
      }
    }
    r.terms += n;
    r.value = std::move(sum);
  }
  return r;
}

inline ExpmResult expm_apply_dense(const SparseMatrix& a, const std::vector<double>& v) {
  const Eigen::MatrixXd e = a.dense().exp();
  Eigen::Map<const Eigen::VectorXd> x(v.data(), Eigen::Index(v.size()));
  Eigen::VectorXd y = e * x;
  ExpmResult r;
  r.value.assign(y.data(), y.data() + y.size());
  r.dense = true;
  return r;
}

inline ExpmResult expm_apply(const SparseMatrix& a, const std::vector<double>& v) {
  if (a.rows() <= kDenseLimit) return expm_apply_dense(a, v);
  return expm_apply_series(a, v);
}

}  // namespace dilute
