// Copyright 2026 The dilute Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dilute/errors.hpp"
#include "dilute/parallel.hpp"

namespace dilute {

struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  double value;
};

// Real CSR matrix.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  // Duplicates are summed in input order after a stable (row, col) sort.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> t) {
    std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m(rows, cols);
    std::size_t i = 0;
    while (i < t.size()) {
      std::size_t j = i;
      double s = 0.0;
      for (; j < t.size() && t[j].row == t[i].row && t[j].col == t[i].col; ++j) s += t[j].value;
      if (s != 0.0) {
        m.col_.push_back(t[i].col);
        m.val_.push_back(s);
        ++m.row_ptr_[t[i].row + 1];
      }
      i = j;
    }
    for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return val_.size(); }

  std::vector<double> apply(const std::vector<double>& x) const {
    if (x.size() != cols_) throw ParameterError("SparseMatrix::apply: dimension mismatch");
    std::vector<double> y(rows_, 0.0);
    parallel_chunks(rows_, [&](std::size_t, std::size_t b, std::size_t e) {
      for (std::size_t r = b; r < e; ++r) {
        double s = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += val_[k] * x[col_[k]];
        y[r] = s;
      }
    });
    return y;
  }

  SparseMatrix transpose() const {
    std::vector<Triplet> t;
    t.reserve(nonzeros());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        t.push_back({col_[k], std::uint32_t(r), val_[k]});
    return from_triplets(cols_, rows_, std::move(t));
  }

  SparseMatrix scaled(double s) const {
    SparseMatrix m = *this;
    for (auto& v : m.val_) v *= s;
    return m;
  }

  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ParameterError("SparseMatrix: shape mismatch");
    auto t = a.triplets();
    auto tb = b.triplets();
    t.insert(t.end(), tb.begin(), tb.end());
    return from_triplets(a.rows_, a.cols_, std::move(t));
  }
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return a + b.scaled(-1.0); }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> t;
    t.reserve(nonzeros());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.push_back({std::uint32_t(r), col_[k], val_[k]});
    return t;
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(Eigen::Index(rows_), Eigen::Index(cols_));
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d(Eigen::Index(r), Eigen::Index(col_[k])) += val_[k];
    return d;
  }

  // Max absolute row sum.
  double norm_inf() const {
    double n = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      double s = 0.0;
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += std::abs(val_[k]);
      n = std::max(n, s);
    }
    return n;
  }

  double max_asymmetry() const {
    const SparseMatrix d = *this - transpose();
    double m = 0.0;
    for (double v : d.val_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_;
  std::vector<double> val_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline double expectation(const SparseMatrix& m, const std::vector<double>& psi) { return dot(psi, m.apply(psi)); }

}  // namespace dilute
