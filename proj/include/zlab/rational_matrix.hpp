// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "zlab/numeric.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace zlab {

// Small dense matrix of exact rationals; just enough linear algebra for the
// Fourier-side certificates (products, Gram matrices, rank, and certified
// eigenvalue brackets via Sylvester's criterion).
class RationalMatrix {
 public:
  RationalMatrix() : rows_(0), cols_(0) {}
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), v_(rows * cols) {}

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return v_[i * cols_ + j]; }

  friend bool operator==(const RationalMatrix& x, const RationalMatrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.v_ == y.v_;
  }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("RationalMatrix: shape mismatch");
    RationalMatrix z(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        const Rational& f = x.at(i, k);
        if (f == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) z.at(i, j) += f * y.at(k, j);
      }
    return z;
  }

  friend RationalMatrix operator-(const RationalMatrix& x, const RationalMatrix& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
      throw std::invalid_argument("RationalMatrix: shape mismatch");
    RationalMatrix z(x.rows_, x.cols_);
    for (std::size_t i = 0; i < x.v_.size(); ++i) z.v_[i] = x.v_[i] - y.v_[i];
    return z;
  }

  bool is_zero() const {
    for (const Rational& r : v_)
      if (r != 0) return false;
    return true;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Rational> v_;
};

inline Rational hs_inner(const RationalMatrix& x, const RationalMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("hs_inner: shape mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) s += x.at(i, j) * y.at(i, j);
  return s;
}

inline Rational hs_norm_sq(const RationalMatrix& x) { return hs_inner(x, x); }

inline Rational trace(const RationalMatrix& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("trace: matrix must be square");
  Rational s = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) s += x.at(i, i);
  return s;
}

inline std::size_t rank(RationalMatrix m) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
    std::size_t pivot = r;
    while (pivot < m.rows() && m.at(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != r)
      for (std::size_t j = col; j < m.cols(); ++j) std::swap(m.at(pivot, j), m.at(r, j));
    const Rational inv = Rational(1) / m.at(r, col);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      const Rational f = m.at(i, col) * inv;
      if (f == 0) continue;
      for (std::size_t j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
    }
    ++r;
  }
  return r;
}

// Sylvester's criterion for a symmetric matrix: positive definite iff
// elimination without pivoting yields only positive pivots (a zero or
// negative pivot exposes a non-positive leading minor).
inline bool is_positive_definite(RationalMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("is_positive_definite: must be square");
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (m.at(k, k) <= 0) return false;
    const Rational inv = Rational(1) / m.at(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Rational f = m.at(i, k) * inv;
      if (f == 0) continue;
      for (std::size_t j = k; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
    }
  }
  return true;
}

// Certified test lambda_max(gram) < c for symmetric positive semidefinite
// gram: equivalent to c I - gram being positive definite.
inline bool lambda_max_below(const RationalMatrix& gram, const Rational& c) {
  const std::size_t n = gram.rows();
  RationalMatrix shifted(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      shifted.at(i, j) = (i == j ? Rational(c - gram.at(i, j)) : Rational(-gram.at(i, j)));
  return is_positive_definite(shifted);
}

// Exact bisection bracket [lo, hi] with lambda_max(gram) in it; gram must be
// symmetric PSD (a Gram matrix), so trace is an upper bound.
inline std::pair<Rational, Rational> lambda_max_bracket(const RationalMatrix& gram,
                                                        unsigned iterations = 50) {
  Rational lo = 0;
  Rational hi = trace(gram) + 1;
  for (unsigned i = 0; i < iterations; ++i) {
    const Rational mid = (lo + hi) / 2;
    if (lambda_max_below(gram, mid))
      hi = mid;
    else
      lo = mid;
  }
  return {lo, hi};
}

}  // namespace zlab
