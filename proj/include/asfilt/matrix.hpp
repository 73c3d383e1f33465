#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "asfilt/error.hpp"
#include "asfilt/ring.hpp"

namespace asfilt {

/// Dense square matrix over a RingModel, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(RingModel ring, std::size_t n) : ring_(ring), n_(n), data_(n * n, ring.zero()) {}

  static Matrix identity(RingModel ring, std::size_t n) {
    Matrix m(ring, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ring.one();
    return m;
  }

  static Matrix from_rows(RingModel ring, const std::vector<std::vector<TruncElement>>& rows) {
    Matrix m(ring, rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) fail(errc::invalid_argument, "matrix is not square");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  const RingModel& ring() const { return ring_; }
  std::size_t size() const { return n_; }

  TruncElement& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const TruncElement& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix r(a.ring_, a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k)
        for (std::size_t j = 0; j < a.n_; ++j) r(i, j) += a(i, k) * b(k, j);
    return r;
  }

  Matrix scaled(const TruncElement& c) const {
    Matrix r = *this;
    for (auto& x : r.data_) x = c * x;
    return r;
  }

  /// Delete row i and column j.
  Matrix minor(std::size_t row, std::size_t col) const {
    Matrix r(ring_, n_ - 1);
    for (std::size_t i = 0, ri = 0; i < n_; ++i) {
      if (i == row) continue;
      for (std::size_t j = 0, rj = 0; j < n_; ++j) {
        if (j == col) continue;
        r(ri, rj++) = (*this)(i, j);
      }
      ++ri;
    }
    return r;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  RingModel ring_;
  std::size_t n_ = 0;
  std::vector<TruncElement> data_;
};

/// Laplace expansion along the first row; division-free.
inline TruncElement determinant(const Matrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return m.ring().one();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  TruncElement acc = m.ring().zero();
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    TruncElement term = m(0, j) * determinant(m.minor(0, j));
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

/// Classical adjoint: U * adj(U) = adj(U) * U = det(U) * I.
inline Matrix adjugate(const Matrix& m) {
  const std::size_t n = m.size();
  Matrix v(m.ring(), n);
  if (n == 1) {
    v(0, 0) = m.ring().one();
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      TruncElement c = determinant(m.minor(i, j));
      v(j, i) = ((i + j) % 2 == 0) ? c : -c;
    }
  return v;
}

/// Valuations of the Smith normal form diagonal, ascending, by
/// valuation-pivot elimination. The only quotients taken are exact ones,
/// entry / pivot with v(entry) >= v(pivot): a uniformizer shift followed by a
/// unit inverse. That quotient is known modulo u^(M - v(pivot)), and it always
/// multiplies an entry of valuation >= v(pivot), so every update is exact
/// modulo u^M.
inline std::vector<Rational> elementary_divisor_valuations(const Matrix& u) {
  const std::size_t n = u.size();
  if (!determinant(u).valuation().is_exact())
    fail(errc::not_generically_etale, "det(U) vanishes at the model's precision");
  Matrix a = u;
  std::vector<Rational> out;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pi = k, pj = k;
    unsigned best = a.ring().precision() + 1;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j) {
        unsigned o = a(i, j).order();
        if (o < best) {
          best = o;
          pi = i;
          pj = j;
        }
      }
    if (best >= a.ring().precision())
      fail(errc::precision_insufficient, "remaining block vanishes at precision");
    for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pi, j));
    for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k), a(i, pj));

    const TruncElement pivot = a(k, k);
    const TruncElement unit_inv = pivot.shift_down(best).unit_inverse();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      TruncElement q = a(i, k).shift_down(best) * unit_inv;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= q * a(k, j);
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (a(k, j).is_zero()) continue;
      TruncElement q = a(k, j).shift_down(best) * unit_inv;
      for (std::size_t i = k; i < n; ++i) a(i, j) -= q * a(i, k);
    }
    out.push_back(Rational(best, a.ring().ramification()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace asfilt
