#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "potent/matrix.hpp"

namespace potent {

// Companion matrix of X^n + c_{n-1}X^{n-1} + ... + c_0, stored by its
// coefficient list (c_0, ..., c_{n-1}). The realization has ones on the
// subdiagonal and (-c_0, ..., -c_{n-1}) as its last column.
class CompanionSpec {
 public:
  CompanionSpec(Field field, std::vector<FieldElement> coeffs)
      : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw PreconditionViolated("companion needs degree >= 1");
    for (const auto& c : coeffs_) require_same_field(field_, c.field());
  }

  static CompanionSpec from_ints(const Field& f, const std::vector<int64_t>& coeffs) {
    std::vector<FieldElement> c;
    c.reserve(coeffs.size());
    for (int64_t v : coeffs) c.push_back(int_embed(f, v));
    return CompanionSpec(f, std::move(c));
  }

  const Field& field() const { return field_; }
  uint32_t size() const { return static_cast<uint32_t>(coeffs_.size()); }
  const std::vector<FieldElement>& coeffs() const { return coeffs_; }

  Matrix realize() const {
    uint32_t n = size();
    Matrix m(field_, n, n);
    for (uint32_t i = 0; i + 1 < n; ++i) m.set(i + 1, i, FieldElement::one(field_));
    for (uint32_t i = 0; i < n; ++i) m.set(i, n - 1, -coeffs_[i]);
    return m;
  }

  FieldElement trace() const { return -coeffs_.back(); }

  // X^n + c_{n-1}X^{n-1} + ... + c_0
  Polynomial char_polynomial() const {
    std::vector<FieldElement> c = coeffs_;
    c.push_back(FieldElement::one(field_));
    return Polynomial(field_, std::move(c));
  }

  bool operator==(const CompanionSpec& o) const {
    require_same_field(field_, o.field_);
    return coeffs_ == o.coeffs_;
  }
  bool operator!=(const CompanionSpec& o) const { return !(*this == o); }

 private:
  Field field_;
  std::vector<FieldElement> coeffs_;
};

// Reads a companion coefficient list back off a matrix, if it has the exact
// companion shape.
inline std::optional<CompanionSpec> companion_from_matrix(const Matrix& m) {
  if (!m.is_square() || m.rows() == 0) return std::nullopt;
  uint32_t n = m.rows();
  const Field& f = m.field();
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j + 1 < n; ++j) {
      const FieldElement& e = m.at(i, j);
      if (i == j + 1) {
        if (e != FieldElement::one(f)) return std::nullopt;
      } else if (!e.is_zero()) {
        return std::nullopt;
      }
    }
  std::vector<FieldElement> coeffs;
  coeffs.reserve(n);
  for (uint32_t i = 0; i < n; ++i) coeffs.push_back(-m.at(i, n - 1));
  return CompanionSpec(f, std::move(coeffs));
}

// Invertible change of basis, with its inverse precomputed and checked.
struct SimilarityWitness {
  SimilarityWitness(Matrix p_, Matrix p_inv_, std::string note_ = "")
      : p(std::move(p_)), p_inv(std::move(p_inv_)), note(std::move(note_)) {
    if (!(p * p_inv == Matrix::identity(p.field(), p.rows())))
      throw InternalError("similarity witness fails P * P_inv = I");
  }

  static SimilarityWitness from_p(Matrix p, std::string note = "") {
    Matrix inv = p.inverse();
    return SimilarityWitness(std::move(p), std::move(inv), std::move(note));
  }

  static SimilarityWitness identity(const Field& f, uint32_t n, std::string note = "") {
    return SimilarityWitness(Matrix::identity(f, n), Matrix::identity(f, n),
                             std::move(note));
  }

  // Composition: (this then next), i.e. P = this.p * next.p.
  SimilarityWitness then(const SimilarityWitness& next, std::string note_ = "") const {
    return SimilarityWitness(p * next.p, next.p_inv * p_inv, std::move(note_));
  }

  Matrix p;
  Matrix p_inv;
  std::string note;
};

namespace detail {

// Krylov basis (v, Av, ..., A^{n-1}v) as a matrix, or nullopt if singular.
inline std::optional<Matrix> krylov_basis(const Matrix& a,
                                          const std::vector<FieldElement>& v) {
  uint32_t n = a.rows();
  Matrix p(a.field(), n, n);
  std::vector<FieldElement> cur = v;
  for (uint32_t j = 0; j < n; ++j) {
    for (uint32_t i = 0; i < n; ++i) p.set(i, j, cur[i]);
    if (j + 1 < n) cur = mat_vec(a, cur);
  }
  if (p.rank() != n) return std::nullopt;
  return p;
}

}  // namespace detail

// Companion form of a nonderogatory matrix: finds a cyclic vector v (trying
// e_1..e_n, then all 0/1 vectors in lexicographic order, then the full
// coordinate space), and conjugates by the Krylov basis P = [v Av ... A^{n-1}v].
// Postcondition: witness.p_inv * A * witness.p == result.realize().
inline std::pair<CompanionSpec, SimilarityWitness> companion_form(const Matrix& a) {
  if (!a.is_square() || a.rows() == 0)
    throw DimensionMismatch("companion_form requires a nonempty square matrix");
  if (!is_nonderogatory(a))
    throw NotNonderogatory("matrix has minimal polynomial of degree < n");
  uint32_t n = a.rows();
  const Field& f = a.field();

  std::optional<Matrix> p;
  std::string note;
  for (uint32_t i = 0; i < n && !p; ++i) {
    std::vector<FieldElement> v(n, FieldElement::zero(f));
    v[i] = FieldElement::one(f);
    p = detail::krylov_basis(a, v);
    if (p) note = "cyclic vector e" + std::to_string(i + 1);
  }
  if (!p) {
    // 0/1 vectors, first coordinate most significant; unit vectors recur here
    // but they were already rejected cheaply.
    for (uint64_t mask = 1; mask < (uint64_t(1) << n) && !p; ++mask) {
      std::vector<FieldElement> v(n, FieldElement::zero(f));
      for (uint32_t i = 0; i < n; ++i)
        if ((mask >> (n - 1 - i)) & 1) v[i] = FieldElement::one(f);
      p = detail::krylov_basis(a, v);
      if (p) note = "cyclic 0/1 vector";
    }
  }
  if (!p) {
    uint64_t q = f->order();
    uint64_t total = 1;
    for (uint32_t i = 0; i < n; ++i) total *= q;
    for (uint64_t idx = 1; idx < total && !p; ++idx) {
      uint64_t rest = idx;
      std::vector<FieldElement> v(n, FieldElement::zero(f));
      for (uint32_t i = n; i-- > 0;) {
        v[i] = FieldElement::from_lex_index(f, rest % q);
        rest /= q;
      }
      p = detail::krylov_basis(a, v);
      if (p) note = "cyclic vector by enumeration";
    }
  }
  if (!p) throw InternalError("no cyclic vector found for a nonderogatory matrix");

  SimilarityWitness w = SimilarityWitness::from_p(*p, note);
  Matrix d = w.p_inv * a * w.p;
  auto spec = companion_from_matrix(d);
  if (!spec) throw InternalError("Krylov conjugate is not in companion shape");
  return {*spec, std::move(w)};
}

// Similarity C ~ diag(a_1,...,a_k,0,...,0) + C' through the basis
//   f_1 = e_1,  f_{i+1} = (C - a_i I) f_i (i <= k),  f_{i+1} = C f_i (i > k).
// The witness is always unit upper triangular. Returns (C', witness).
inline std::pair<CompanionSpec, SimilarityWitness> shifted_companion(
    const CompanionSpec& c, const std::vector<int64_t>& shifts) {
  uint32_t n = c.size();
  uint32_t k = static_cast<uint32_t>(shifts.size());
  if (k > n) throw PreconditionViolated("more shifts than the matrix dimension");
  const Field& f = c.field();
  Matrix cm = c.realize();

  Matrix p(f, n, n);
  std::vector<FieldElement> cur(n, FieldElement::zero(f));
  cur[0] = FieldElement::one(f);
  for (uint32_t j = 0; j < n; ++j) {
    for (uint32_t i = 0; i < n; ++i) p.set(i, j, cur[i]);
    if (j + 1 == n) break;
    std::vector<FieldElement> next = mat_vec(cm, cur);
    if (j < k) {
      FieldElement aj = int_embed(f, shifts[j]);
      for (uint32_t i = 0; i < n; ++i) next[i] = next[i] - aj * cur[i];
    }
    cur = std::move(next);
  }

  // The basis triangle is structural; check it rather than assume it.
  for (uint32_t i = 0; i < n; ++i) {
    if (p.at(i, i) != FieldElement::one(f))
      throw InternalError("shifted basis is not unit upper triangular");
    for (uint32_t j = 0; j < i; ++j)
      if (!p.at(i, j).is_zero())
        throw InternalError("shifted basis is not upper triangular");
  }

  SimilarityWitness w = SimilarityWitness::from_p(p, "shifted companion basis");
  Matrix d = w.p_inv * cm * w.p;
  for (uint32_t i = 0; i < k; ++i) d.set(i, i, d.at(i, i) - int_embed(f, shifts[i]));
  auto spec = companion_from_matrix(d);
  if (!spec)
    throw InternalError("shifted conjugate minus diagonal is not in companion shape");
  return {*spec, std::move(w)};
}

// Result of the alternating-basis similarity: D = P^{-1} C P has the block form
//   [ M  N ]   M: (n-k)x(n-k), diagonal (a,0,a,0,...,a), ones on the subdiagonal
//   [ Z  Q ]   N: only its last column (d_1..d_{n-k}) is nonzero
//              Z: single entry at position (1, n-k), equal to block_sign
//              Q: a*I_k - companion(d_{n-k+1},...,d_n)
// dvec collects (d_1, ..., d_n). block_sign is +1 for the natural basis and -1
// after the last-row sign normalization (which negates the k trailing basis
// vectors, also negating d_1..d_{n-k} as read from D).
struct AlternatingBasis {
  Matrix d;
  SimilarityWitness witness;
  std::vector<FieldElement> dvec;
  int block_sign;
};

inline AlternatingBasis alternating_basis(const CompanionSpec& c, uint32_t k, int64_t a,
                                          std::optional<int> last_row_sign = std::nullopt) {
  uint32_t n = c.size();
  if (n < 3) throw PreconditionViolated("alternating basis needs n >= 3");
  if (k < 1 || k > n - 1 || (n - k) % 2 == 0)
    throw PreconditionViolated("alternating basis needs 1 <= k <= n-1 with n-k odd");
  const Field& f = c.field();
  FieldElement ae = int_embed(f, a);
  Matrix cm = c.realize();

  // f_1 = e_1; up through index n-k+1 multiply by C, subtracting a*f on the even
  // steps; afterwards use a*f - C*f, which flips the leading sign each step.
  std::vector<std::vector<FieldElement>> basis;
  std::vector<FieldElement> e1(n, FieldElement::zero(f));
  e1[0] = FieldElement::one(f);
  basis.push_back(e1);
  for (uint32_t i = 2; i <= n; ++i) {
    const auto& prev = basis.back();
    std::vector<FieldElement> cf = mat_vec(cm, prev);
    std::vector<FieldElement> next(n, FieldElement::zero(f));
    if (i <= n - k + 1) {
      for (uint32_t r = 0; r < n; ++r)
        next[r] = (i % 2 == 0) ? cf[r] - ae * prev[r] : cf[r];
    } else {
      for (uint32_t r = 0; r < n; ++r) next[r] = ae * prev[r] - cf[r];
    }
    basis.push_back(std::move(next));
  }

  // Natural trailing signs alternate -1, +1, ... after index n-k+1; the last
  // one is -1 exactly when k is even. Honor a requested last-row sign by
  // negating the k trailing vectors (Q is conjugated by -I and is unchanged).
  int natural_last = (k % 2 == 0) ? -1 : 1;
  int block_sign = 1;
  if (last_row_sign && *last_row_sign != natural_last) {
    for (uint32_t i = n - k; i < n; ++i)
      for (auto& x : basis[i]) x = -x;
    block_sign = -1;
  }

  Matrix p(f, n, n);
  for (uint32_t j = 0; j < n; ++j)
    for (uint32_t i = 0; i < n; ++i) p.set(i, j, basis[j][i]);

  // Structural invariant: upper triangular, diagonal +1 through index n-k+1,
  // then alternating, all times block_sign on the trailing k entries.
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < i; ++j)
      if (!p.at(i, j).is_zero()) throw InternalError("alternating basis not triangular");
  FieldElement one = FieldElement::one(f);
  for (uint32_t i = 0; i < n; ++i) {
    int expect = 1;
    if (i + 1 > n - k + 1) expect = ((i + 1 - (n - k + 1)) % 2 == 1) ? -1 : 1;
    if (i + 1 > n - k) expect *= block_sign;
    FieldElement want = expect == 1 ? one : -one;
    if (p.at(i, i) != want) throw InternalError("alternating basis diagonal sign unexpected");
  }

  SimilarityWitness w = SimilarityWitness::from_p(p, "alternating basis");
  Matrix d = w.p_inv * cm * w.p;

  // Verify the block template and read off d_1..d_n.
  FieldElement zero = FieldElement::zero(f);
  std::vector<FieldElement> dvec(n, zero);
  uint32_t top = n - k;
  for (uint32_t i = 0; i < top; ++i) {
    for (uint32_t j = 0; j < top; ++j) {
      FieldElement want = zero;
      if (i == j) want = (i % 2 == 0) ? ae : zero;
      if (i == j + 1) want = one;
      if (d.at(i, j) != want) throw InternalError("alternating template: M block mismatch");
    }
    for (uint32_t j = top; j + 1 < n; ++j)
      if (!d.at(i, j).is_zero()) throw InternalError("alternating template: N block mismatch");
    dvec[i] = d.at(i, n - 1);
  }
  for (uint32_t i = top; i < n; ++i)
    for (uint32_t j = 0; j < top; ++j) {
      bool corner = (i == top && j == top - 1);
      FieldElement want = corner ? (block_sign == 1 ? one : -one) : zero;
      if (d.at(i, j) != want) throw InternalError("alternating template: Z block mismatch");
    }
  Matrix q = d.submatrix(top, top, k, k);
  Matrix cd = Matrix::scalar(f, k, ae) - q;
  auto cd_spec = companion_from_matrix(cd);
  if (!cd_spec) throw InternalError("alternating template: Q block is not a - companion");
  for (uint32_t i = 0; i < k; ++i) dvec[top + i] = cd_spec->coeffs()[i];

  return AlternatingBasis{std::move(d), std::move(w), std::move(dvec), block_sign};
}

// Companion matrix of (-1)^n chi(-X): the companion form of -C.
inline CompanionSpec negate_companion(const CompanionSpec& c) {
  uint32_t n = c.size();
  const Field& f = c.field();
  std::vector<FieldElement> out;
  out.reserve(n);
  for (uint32_t i = 0; i < n; ++i) {
    FieldElement v = c.coeffs()[i];
    out.push_back(((n - i) % 2 == 1) ? -v : v);
  }
  return CompanionSpec(f, std::move(out));
}

}  // namespace potent
