#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "potent/field.hpp"
#include "potent/poly.hpp"

namespace potent {

// Dense matrix over F_{p^m}, row-major. Treat values as immutable once shared:
// the mutating set() exists for local assembly only, every public operation
// returns a fresh matrix.
class Matrix {
 public:
  Matrix(Field field, uint32_t rows, uint32_t cols)
      : field_(std::move(field)),
        rows_(rows),
        cols_(cols),
        entries_(static_cast<size_t>(rows) * cols, FieldElement::zero(field_)) {}

  Matrix(Field field, uint32_t rows, uint32_t cols, std::vector<FieldElement> entries)
      : field_(std::move(field)), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != static_cast<size_t>(rows) * cols)
      throw DimensionMismatch("entry count does not match matrix shape");
    for (const auto& e : entries_) require_same_field(field_, e.field());
  }

  static Matrix zero(const Field& f, uint32_t n) { return Matrix(f, n, n); }

  static Matrix identity(const Field& f, uint32_t n) {
    Matrix I(f, n, n);
    for (uint32_t i = 0; i < n; ++i) I.set(i, i, FieldElement::one(f));
    return I;
  }

  // c * I
  static Matrix scalar(const Field& f, uint32_t n, const FieldElement& c) {
    Matrix S(f, n, n);
    for (uint32_t i = 0; i < n; ++i) S.set(i, i, c);
    return S;
  }

  // Convenience for tests and examples over any field: integer entries are
  // embedded via t -> t*1.
  static Matrix from_ints(const Field& f, const std::vector<std::vector<int64_t>>& rows) {
    uint32_t r = static_cast<uint32_t>(rows.size());
    uint32_t c = r ? static_cast<uint32_t>(rows[0].size()) : 0;
    Matrix m(f, r, c);
    for (uint32_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw DimensionMismatch("ragged row in matrix literal");
      for (uint32_t j = 0; j < c; ++j) m.set(i, j, int_embed(f, rows[i][j]));
    }
    return m;
  }

  const Field& field() const { return field_; }
  uint32_t rows() const { return rows_; }
  uint32_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const std::vector<FieldElement>& entries() const { return entries_; }

  const FieldElement& at(uint32_t i, uint32_t j) const {
    return entries_[static_cast<size_t>(i) * cols_ + j];
  }

  void set(uint32_t i, uint32_t j, const FieldElement& v) {
    require_same_field(field_, v.field());
    entries_[static_cast<size_t>(i) * cols_ + j] = v;
  }

  bool operator==(const Matrix& o) const {
    require_same_field(field_, o.field_);
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o);
    Matrix r = *this;
    for (size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = entries_[i] + o.entries_[i];
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    check_same_shape(o);
    Matrix r = *this;
    for (size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = entries_[i] - o.entries_[i];
    return r;
  }

  Matrix operator-() const {
    Matrix r = *this;
    for (auto& e : r.entries_) e = -e;
    return r;
  }

  Matrix operator*(const Matrix& o) const {
    require_same_field(field_, o.field_);
    if (cols_ != o.rows_)
      throw DimensionMismatch("matrix product shape mismatch: " + shape_str() + " * " +
                              o.shape_str());
    Matrix r(field_, rows_, o.cols_);
    for (uint32_t i = 0; i < rows_; ++i)
      for (uint32_t k = 0; k < cols_; ++k) {
        const FieldElement& aik = at(i, k);
        if (aik.is_zero()) continue;
        for (uint32_t j = 0; j < o.cols_; ++j)
          r.set(i, j, r.at(i, j) + aik * o.at(k, j));
      }
    return r;
  }

  Matrix scalar_mul(const FieldElement& c) const {
    Matrix r = *this;
    for (auto& e : r.entries_) e = e * c;
    return r;
  }

  Matrix pow(uint64_t e) const {
    require_square("pow");
    Matrix acc = identity(field_, rows_);
    Matrix base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  bool is_zero() const {
    for (const auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }

  FieldElement trace() const {
    require_square("trace");
    FieldElement t = FieldElement::zero(field_);
    for (uint32_t i = 0; i < rows_; ++i) t = t + at(i, i);
    return t;
  }

  Matrix submatrix(uint32_t i0, uint32_t j0, uint32_t h, uint32_t w) const {
    if (i0 + h > rows_ || j0 + w > cols_)
      throw DimensionMismatch("submatrix out of range");
    Matrix r(field_, h, w);
    for (uint32_t i = 0; i < h; ++i)
      for (uint32_t j = 0; j < w; ++j) r.set(i, j, at(i0 + i, j0 + j));
    return r;
  }

  // Gauss-Jordan with exact pivoting.
  Matrix inverse() const {
    require_square("inverse");
    uint32_t n = rows_;
    Matrix a = *this;
    Matrix inv = identity(field_, n);
    for (uint32_t col = 0; col < n; ++col) {
      uint32_t piv = col;
      while (piv < n && a.at(piv, col).is_zero()) ++piv;
      if (piv == n) throw SingularMatrix("matrix is singular");
      if (piv != col) {
        a.swap_rows(piv, col);
        inv.swap_rows(piv, col);
      }
      FieldElement d = a.at(col, col).inverse();
      a.scale_row(col, d);
      inv.scale_row(col, d);
      for (uint32_t r = 0; r < n; ++r) {
        if (r == col || a.at(r, col).is_zero()) continue;
        FieldElement f = a.at(r, col);
        a.add_scaled_row(r, col, -f);
        inv.add_scaled_row(r, col, -f);
      }
    }
    return inv;
  }

  // P * A * P^{-1}
  Matrix conjugate_by(const Matrix& p) const {
    require_square("conjugate_by");
    return p * *this * p.inverse();
  }

  uint32_t rank() const {
    Matrix a = *this;
    uint32_t r = 0;
    for (uint32_t col = 0; col < cols_ && r < rows_; ++col) {
      uint32_t piv = r;
      while (piv < rows_ && a.at(piv, col).is_zero()) ++piv;
      if (piv == rows_) continue;
      if (piv != r) a.swap_rows(piv, r);
      FieldElement d = a.at(r, col).inverse();
      a.scale_row(r, d);
      for (uint32_t i = r + 1; i < rows_; ++i) {
        if (a.at(i, col).is_zero()) continue;
        a.add_scaled_row(i, r, -a.at(i, col));
      }
      ++r;
    }
    return r;
  }

  std::string shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  void check_same_shape(const Matrix& o) const {
    require_same_field(field_, o.field_);
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionMismatch("shape mismatch: " + shape_str() + " vs " + o.shape_str());
  }

  void require_square(const char* op) const {
    if (!is_square())
      throw DimensionMismatch(std::string(op) + " requires a square matrix, got " + shape_str());
  }

  void swap_rows(uint32_t i, uint32_t j) {
    for (uint32_t c = 0; c < cols_; ++c) {
      FieldElement t = at(i, c);
      set(i, c, at(j, c));
      set(j, c, t);
    }
  }

  void scale_row(uint32_t i, const FieldElement& f) {
    for (uint32_t c = 0; c < cols_; ++c) set(i, c, at(i, c) * f);
  }

  // row i += f * row j
  void add_scaled_row(uint32_t i, uint32_t j, const FieldElement& f) {
    for (uint32_t c = 0; c < cols_; ++c) set(i, c, at(i, c) + f * at(j, c));
  }

  Field field_;
  uint32_t rows_;
  uint32_t cols_;
  std::vector<FieldElement> entries_;
};

inline std::vector<FieldElement> mat_vec(const Matrix& a, const std::vector<FieldElement>& v) {
  if (v.size() != a.cols()) throw DimensionMismatch("mat_vec shape mismatch");
  std::vector<FieldElement> r(a.rows(), FieldElement::zero(a.field()));
  for (uint32_t i = 0; i < a.rows(); ++i)
    for (uint32_t j = 0; j < a.cols(); ++j) r[i] = r[i] + a.at(i, j) * v[j];
  return r;
}

// [[A, B], [C, D]] with consistent block shapes.
inline Matrix assemble_blocks(const Matrix& a, const Matrix& b, const Matrix& c,
                              const Matrix& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() ||
      b.cols() != d.cols())
    throw DimensionMismatch("inconsistent block shapes");
  Matrix r(a.field(), a.rows() + c.rows(), a.cols() + b.cols());
  for (uint32_t i = 0; i < a.rows(); ++i) {
    for (uint32_t j = 0; j < a.cols(); ++j) r.set(i, j, a.at(i, j));
    for (uint32_t j = 0; j < b.cols(); ++j) r.set(i, a.cols() + j, b.at(i, j));
  }
  for (uint32_t i = 0; i < c.rows(); ++i) {
    for (uint32_t j = 0; j < c.cols(); ++j) r.set(a.rows() + i, j, c.at(i, j));
    for (uint32_t j = 0; j < d.cols(); ++j) r.set(a.rows() + i, a.cols() + j, d.at(i, j));
  }
  return r;
}

namespace detail {

// Recursive determinant of a small matrix with Polynomial entries, expanding
// along the first column. Only used for n <= 4.
inline Polynomial poly_det(const std::vector<std::vector<Polynomial>>& m) {
  size_t n = m.size();
  const Field& f = m[0][0].field();
  if (n == 1) return m[0][0];
  Polynomial det = Polynomial::zero(f);
  for (size_t i = 0; i < n; ++i) {
    if (m[i][0].is_zero()) continue;
    std::vector<std::vector<Polynomial>> minor;
    minor.reserve(n - 1);
    for (size_t r = 0; r < n; ++r) {
      if (r == i) continue;
      std::vector<Polynomial> row;
      row.reserve(n - 1);
      for (size_t c = 1; c < n; ++c) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    Polynomial term = m[i][0] * poly_det(minor);
    det = (i % 2 == 0) ? det + term : det - term;
  }
  return det;
}

}  // namespace detail

// Characteristic polynomial det(XI - A), always monic of degree n. Small
// matrices go through direct cofactor expansion; larger ones are reduced to
// upper Hessenberg form by an exact similarity (divisions by pivots are fine
// over a field) and finished with the Hessenberg determinant recurrence.
inline Polynomial char_poly(const Matrix& a) {
  if (!a.is_square()) throw DimensionMismatch("char_poly requires a square matrix");
  uint32_t n = a.rows();
  const Field& f = a.field();
  if (n == 0) return Polynomial::constant(FieldElement::one(f));

  if (n <= 4) {
    std::vector<std::vector<Polynomial>> m(n, std::vector<Polynomial>(n, Polynomial::zero(f)));
    Polynomial x = Polynomial::x_power(f, 1);
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < n; ++j) {
        Polynomial e = Polynomial::constant(-a.at(i, j));
        m[i][j] = (i == j) ? x + e : e;
      }
    return detail::poly_det(m);
  }

  // Hessenberg reduction on a working copy.
  Matrix h = a;
  for (uint32_t col = 0; col + 2 < n; ++col) {
    uint32_t piv = col + 1;
    while (piv < n && h.at(piv, col).is_zero()) ++piv;
    if (piv == n) continue;
    if (piv != col + 1) {
      // Symmetric swap keeps similarity.
      for (uint32_t j = 0; j < n; ++j) {
        FieldElement t = h.at(col + 1, j);
        h.set(col + 1, j, h.at(piv, j));
        h.set(piv, j, t);
      }
      for (uint32_t i = 0; i < n; ++i) {
        FieldElement t = h.at(i, col + 1);
        h.set(i, col + 1, h.at(i, piv));
        h.set(i, piv, t);
      }
    }
    FieldElement inv = h.at(col + 1, col).inverse();
    for (uint32_t row = col + 2; row < n; ++row) {
      if (h.at(row, col).is_zero()) continue;
      FieldElement factor = h.at(row, col) * inv;
      // row op: row -= factor * row_{col+1}; matching column op keeps similarity.
      for (uint32_t j = 0; j < n; ++j)
        h.set(row, j, h.at(row, j) - factor * h.at(col + 1, j));
      for (uint32_t i = 0; i < n; ++i)
        h.set(i, col + 1, h.at(i, col + 1) + factor * h.at(i, row));
    }
  }

  // p_k = (X - h[k][k]) p_{k-1} - sum_i h[i][k] (prod subdiagonals) p_{i-1},
  // the usual expansion of det(XI - H) along the last column.
  std::vector<Polynomial> p;
  p.push_back(Polynomial::constant(FieldElement::one(f)));
  Polynomial x = Polynomial::x_power(f, 1);
  for (uint32_t k = 0; k < n; ++k) {
    Polynomial pk = (x - Polynomial::constant(h.at(k, k))) * p[k];
    FieldElement prod = FieldElement::one(f);
    for (uint32_t i = k; i-- > 0;) {
      prod = prod * h.at(i + 1, i);
      if (prod.is_zero()) break;
      if (!h.at(i, k).is_zero())
        pk = pk - p[i] * (h.at(i, k) * prod);
    }
    p.push_back(pk);
  }
  return p[n];
}

// Minimal polynomial via the first linear dependence among I, A, A^2, ...
// viewed as vectors of length n^2. Monic by construction.
inline Polynomial min_poly(const Matrix& a) {
  if (!a.is_square()) throw DimensionMismatch("min_poly requires a square matrix");
  const Field& f = a.field();
  uint32_t n = a.rows();
  if (n == 0) return Polynomial::constant(FieldElement::one(f));

  struct EchelonRow {
    std::vector<FieldElement> vec;    // reduced, pivot normalized to 1
    std::vector<FieldElement> combo;  // expression in terms of the original powers
    uint32_t pivot;
  };
  std::vector<EchelonRow> rows;

  Matrix power = Matrix::identity(f, n);
  for (uint32_t k = 0;; ++k) {
    std::vector<FieldElement> v = power.entries();
    std::vector<FieldElement> combo(k + 1, FieldElement::zero(f));
    combo[k] = FieldElement::one(f);
    for (const auto& row : rows) {
      const FieldElement& c = v[row.pivot];
      if (c.is_zero()) continue;
      FieldElement factor = c;
      for (size_t i = 0; i < v.size(); ++i) v[i] = v[i] - factor * row.vec[i];
      for (size_t i = 0; i < row.combo.size(); ++i)
        combo[i] = combo[i] - factor * row.combo[i];
    }
    uint32_t piv = 0;
    bool zero = true;
    for (size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_zero()) {
        piv = static_cast<uint32_t>(i);
        zero = false;
        break;
      }
    }
    if (zero) {
      // combo gives the monic annihilator of least degree.
      return Polynomial(f, std::move(combo));
    }
    FieldElement inv = v[piv].inverse();
    for (auto& e : v) e = e * inv;
    for (auto& e : combo) e = e * inv;
    rows.push_back({std::move(v), std::move(combo), piv});
    if (k == n) throw InternalError("min_poly found no dependence by degree n");
    power = power * a;
  }
}

inline bool is_nilpotent(const Matrix& a) {
  if (!a.is_square()) throw DimensionMismatch("is_nilpotent requires a square matrix");
  return a.pow(a.rows()).is_zero();
}

// Least k >= 1 with A^k = 0, if any.
inline std::optional<uint32_t> nilpotency_index(const Matrix& a) {
  if (!a.is_square()) throw DimensionMismatch("nilpotency_index requires a square matrix");
  Matrix power = a;
  for (uint32_t k = 1; k <= a.rows(); ++k) {
    if (power.is_zero()) return k;
    power = power * a;
  }
  return std::nullopt;
}

// E^p = E for p the field characteristic.
inline bool is_p_potent(const Matrix& a) {
  if (!a.is_square()) throw DimensionMismatch("is_p_potent requires a square matrix");
  return a.pow(a.field()->characteristic()) == a;
}

inline bool is_nonderogatory(const Matrix& a) {
  return min_poly(a).degree() == static_cast<int>(a.rows());
}

inline bool eigenvalue_member(const Matrix& a, const FieldElement& lambda) {
  return char_poly(a).eval(lambda).is_zero();
}

// Visits every rows x cols matrix over the field exactly once, in
// lexicographic row-major entry order (entry (0,0) most significant, elements
// ordered by their coefficient index). The visitor returns true to stop early.
// Throws SearchSpaceTooLarge when q^{rows*cols} exceeds the guard.
inline void for_each_matrix(const Field& f, uint32_t rows, uint32_t cols,
                            uint64_t guard,
                            const std::function<bool(const Matrix&)>& visit) {
  uint64_t q = f->order();
  uint64_t total = 1;
  for (uint32_t i = 0; i < rows * cols; ++i) {
    if (total > guard / q)
      throw SearchSpaceTooLarge("matrix enumeration needs more than " +
                                std::to_string(guard) + " candidates");
    total *= q;
  }

  std::vector<uint64_t> digits(static_cast<size_t>(rows) * cols, 0);
  Matrix m(f, rows, cols);
  for (uint64_t count = 0;; ++count) {
    if (visit(m)) return;
    if (count + 1 == total) return;
    // Odometer step: last entry is least significant.
    size_t pos = digits.size();
    while (pos-- > 0) {
      if (++digits[pos] < q) {
        m.set(static_cast<uint32_t>(pos / cols), static_cast<uint32_t>(pos % cols),
              FieldElement::from_lex_index(f, digits[pos]));
        break;
      }
      digits[pos] = 0;
      m.set(static_cast<uint32_t>(pos / cols), static_cast<uint32_t>(pos % cols),
            FieldElement::zero(f));
    }
  }
}

}  // namespace potent
