#pragma once

// Exact integer linear algebra over arbitrary-precision integers: column
// Hermite form, Smith form, linear Diophantine systems and lattice cosets.

#include "hnnlab/bigint.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hnnlab {

class BigMatrix {
 public:
  BigMatrix() = default;
  BigMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, BigInt(0)) {}

  /// Row-major construction, e.g. BigMatrix{{2, 1}, {0, 2}}.
  BigMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      for (auto x : r) data_.emplace_back(x);
    }
  }

  static BigMatrix identity(std::size_t n) {
    BigMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static BigMatrix from_rows(const std::vector<BigVector>& rows, std::size_t cols) {
    BigMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static BigMatrix from_columns(const std::vector<BigVector>& columns, std::size_t rows) {
    BigMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw std::invalid_argument("ragged matrix columns");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  BigVector column(std::size_t j) const {
    BigVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  BigVector row(std::size_t i) const {
    return BigVector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  BigMatrix transpose() const {
    BigMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const BigInt& x) { return x == 0; });
  }

  // Elementary operations used by the normal form algorithms.
  void swap_columns(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  /// column[dst] -= k * column[src]
  void sub_column(std::size_t dst, std::size_t src, const BigInt& k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) -= k * (*this)(i, src);
  }
  /// row[dst] -= k * row[src]
  void sub_row(std::size_t dst, std::size_t src, const BigInt& k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) -= k * (*this)(src, j);
  }
  void negate_column(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }

  friend bool operator==(const BigMatrix&, const BigMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

inline BigMatrix operator*(const BigMatrix& a, const BigMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
  BigMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const BigInt& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline BigVector operator*(const BigMatrix& a, const BigVector& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
  BigVector y = zero_vector(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (x[j] != 0) y[i] += a(i, j) * x[j];
  return y;
}

inline std::string to_string(const BigMatrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) out += ",";
    out += to_string(m.row(i));
  }
  return out + "]";
}

struct HnfResult {
  BigMatrix h;  // a * u == h
  BigMatrix u;  // unimodular, cols x cols
  /// (row, column) of each pivot, in increasing order of both.
  std::vector<std::pair<std::size_t, std::size_t>> pivots;

  std::size_t rank() const { return pivots.size(); }
};

/// Column Hermite normal form. Pivots are positive, entries right of a pivot
/// are zero and entries left of a pivot lie in [0, pivot).
inline HnfResult hnf(const BigMatrix& a) {
  HnfResult r{a, BigMatrix::identity(a.cols()), {}};
  BigMatrix& h = r.h;
  BigMatrix& u = r.u;
  std::size_t pc = 0;
  for (std::size_t i = 0; i < h.rows() && pc < h.cols(); ++i) {
    // Euclid across the columns pc.. in row i until one nonzero remains.
    for (;;) {
      std::size_t best = h.cols();
      for (std::size_t j = pc; j < h.cols(); ++j)
        if (h(i, j) != 0 && (best == h.cols() || abs(h(i, j)) < abs(h(i, best)))) best = j;
      if (best == h.cols()) break;
      h.swap_columns(pc, best);
      u.swap_columns(pc, best);
      bool clean = true;
      for (std::size_t j = pc + 1; j < h.cols(); ++j) {
        if (h(i, j) == 0) continue;
        BigInt q = h(i, j) / h(i, pc);
        h.sub_column(j, pc, q);
        u.sub_column(j, pc, q);
        if (h(i, j) != 0) clean = false;
      }
      if (clean) break;
    }
    if (h(i, pc) == 0) continue;
    if (h(i, pc) < 0) {
      h.negate_column(pc);
      u.negate_column(pc);
    }
    for (std::size_t j = 0; j < pc; ++j) {
      BigInt q = floor_div(h(i, j), h(i, pc));
      h.sub_column(j, pc, q);
      u.sub_column(j, pc, q);
    }
    r.pivots.emplace_back(i, pc);
    ++pc;
  }
  return r;
}

struct SnfResult {
  BigMatrix u;  // unimodular, rows x rows
  BigMatrix d;  // u * a * v == d
  BigMatrix v;  // unimodular, cols x cols

  /// Number of nonzero diagonal entries.
  std::size_t rank() const {
    std::size_t r = 0;
    while (r < std::min(d.rows(), d.cols()) && d(r, r) != 0) ++r;
    return r;
  }
};

inline SnfResult smith(const BigMatrix& a) {
  SnfResult r{BigMatrix::identity(a.rows()), a, BigMatrix::identity(a.cols())};
  BigMatrix& d = r.d;
  const std::size_t m = d.rows(), n = d.cols();
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    for (;;) {
      std::size_t bi = m, bj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (d(i, j) != 0 && (bi == m || abs(d(i, j)) < abs(d(bi, bj)))) {
            bi = i;
            bj = j;
          }
      if (bi == m) return r;  // remaining block is zero
      d.swap_rows(t, bi);
      r.u.swap_rows(t, bi);
      d.swap_columns(t, bj);
      r.v.swap_columns(t, bj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        BigInt q = d(i, t) / d(t, t);
        d.sub_row(i, t, q);
        r.u.sub_row(i, t, q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        BigInt q = d(t, j) / d(t, t);
        d.sub_column(j, t, q);
        r.v.sub_column(j, t, q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce d(t,t) | every entry of the trailing block.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            d.sub_row(t, i, BigInt(-1));
            r.u.sub_row(t, i, BigInt(-1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      r.u.negate_row(t);
    }
  }
  return r;
}

/// An integer solution of a * x == b, or nullopt when none exists.
inline std::optional<BigVector> solve(const BigMatrix& a, const BigVector& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve: right-hand side has wrong dimension");
  const SnfResult s = smith(a);
  const BigVector c = s.u * b;
  const std::size_t r = s.rank();
  BigVector y = zero_vector(a.cols());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < r) {
      if (c[i] % s.d(i, i) != 0) return std::nullopt;
      y[i] = c[i] / s.d(i, i);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return s.v * y;
}

inline std::size_t rank(const BigMatrix& a) { return hnf(a).rank(); }

/// The column lattice of a matrix together with its Hermite form, for
/// repeated membership tests and transversal computations.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(BigMatrix basis) : basis_(std::move(basis)), hnf_(hnf(basis_)) {}

  const BigMatrix& basis() const { return basis_; }
  const HnfResult& hermite() const { return hnf_; }
  std::size_t ambient_dim() const { return basis_.rows(); }
  std::size_t rank() const { return hnf_.rank(); }

  struct Split {
    BigVector coefficients;  // x with v == basis * x + residue
    BigVector residue;       // canonical coset representative
  };

  /// Writes v = basis * x + r with r the canonical representative of v
  /// modulo the lattice.
  Split split(const BigVector& v) const {
    if (v.size() != basis_.rows()) throw std::invalid_argument("lattice split: dimension mismatch");
    Split s{zero_vector(basis_.cols()), v};
    BigVector q = zero_vector(basis_.cols());
    bool moved = false;
    for (auto [row, col] : hnf_.pivots) {
      const BigInt& p = hnf_.h(row, col);
      BigInt k = floor_div(s.residue[row], p);
      if (k == 0) continue;
      for (std::size_t i = row; i < s.residue.size(); ++i) s.residue[i] -= k * hnf_.h(i, col);
      q[col] = std::move(k);
      moved = true;
    }
    if (moved) s.coefficients = hnf_.u * q;
    return s;
  }

  BigVector canonical(const BigVector& v) const { return split(v).residue; }

  /// Coefficients x with basis * x == v, if v lies in the lattice.
  std::optional<BigVector> preimage(const BigVector& v) const {
    Split s = split(v);
    if (!is_zero(s.residue)) return std::nullopt;
    return std::move(s.coefficients);
  }

  bool contains(const BigVector& v) const { return is_zero(split(v).residue); }

 private:
  BigMatrix basis_;
  HnfResult hnf_;
};

/// Canonical representative of v modulo the column lattice of m.
inline BigVector coset_canonical(const BigMatrix& m, const BigVector& v) {
  if (v.size() != m.rows()) throw std::invalid_argument("coset_canonical: dimension mismatch");
  return Lattice(m).canonical(v);
}

/// Index of the column lattice of m in Z^rows; nullopt means infinite index.
/// Requires full column rank.
inline std::optional<BigInt> lattice_index(const BigMatrix& m) {
  const HnfResult r = hnf(m);
  if (r.rank() != m.cols()) throw std::invalid_argument("lattice_index: matrix is not of full column rank");
  if (r.rank() < m.rows()) return std::nullopt;
  BigInt index = 1;
  for (auto [row, col] : r.pivots) index *= r.h(row, col);
  return index;
}

/// n^i * v by repeated multiplication.
inline BigVector mat_pow_apply(const BigMatrix& n, BigVector v, std::size_t i) {
  if (n.rows() != n.cols()) throw std::invalid_argument("mat_pow_apply: matrix is not square");
  if (v.size() != n.cols()) throw std::invalid_argument("mat_pow_apply: dimension mismatch");
  for (std::size_t k = 0; k < i; ++k) v = n * v;
  return v;
}

}  // namespace hnnlab
