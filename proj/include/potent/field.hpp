#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "potent/error.hpp"

// Exact arithmetic in F_{p^m} for odd prime p. Elements are dense coefficient
// vectors modulo a monic irreducible modulus; nothing is table-driven, so q is
// bounded only by the search guards of the callers.

namespace potent {

class FieldSpec;
using Field = std::shared_ptr<const FieldSpec>;

namespace detail {

inline uint32_t reduce_mod(int64_t v, uint32_t p) {
  int64_t r = v % static_cast<int64_t>(p);
  if (r < 0) r += p;
  return static_cast<uint32_t>(r);
}

inline bool is_prime(uint32_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Polynomials over F_p as coefficient vectors (low to high), used only for
// modulus validation and element inversion. Kept separate from the public
// Polynomial type, which works over arbitrary field elements.
using PVec = std::vector<uint32_t>;

inline void pv_trim(PVec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int pv_deg(const PVec& a) { return static_cast<int>(a.size()) - 1; }

inline PVec pv_mul(const PVec& a, const PVec& b, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  PVec c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = static_cast<uint32_t>(
          (c[i + j] + static_cast<uint64_t>(a[i]) * b[j]) % p);
  pv_trim(c);
  return c;
}

inline PVec pv_mod(PVec a, const PVec& f, uint32_t p) {
  pv_trim(a);
  int df = pv_deg(f);
  // f is monic here, so no pivot inversion is needed.
  while (pv_deg(a) >= df) {
    uint32_t lead = a.back();
    int shift = pv_deg(a) - df;
    for (int i = 0; i <= df; ++i) {
      uint64_t sub = static_cast<uint64_t>(lead) * f[i] % p;
      a[i + shift] = static_cast<uint32_t>((a[i + shift] + p - sub) % p);
    }
    pv_trim(a);
  }
  return a;
}

inline PVec pv_powmod_x(uint64_t e, const PVec& f, uint32_t p) {
  // X^e mod f by square and multiply.
  PVec base = pv_mod(PVec{0, 1}, f, p);
  PVec acc{1};
  while (e > 0) {
    if (e & 1) acc = pv_mod(pv_mul(acc, base, p), f, p);
    base = pv_mod(pv_mul(base, base, p), f, p);
    e >>= 1;
  }
  return acc;
}

inline PVec pv_gcd(PVec a, PVec b, uint32_t p) {
  pv_trim(a);
  pv_trim(b);
  while (!b.empty()) {
    // Make b monic so pv_mod applies.
    uint32_t inv = 1;
    {
      // Fermat inverse of b's leading coefficient.
      uint64_t base = b.back(), acc = 1;
      for (uint32_t e = p - 2; e > 0; e >>= 1) {
        if (e & 1) acc = acc * base % p;
        base = base * base % p;
      }
      inv = static_cast<uint32_t>(acc);
    }
    PVec bm = b;
    for (auto& c : bm) c = static_cast<uint32_t>(static_cast<uint64_t>(c) * inv % p);
    PVec r = pv_mod(a, bm, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace detail

// Immutable description of F_{p^m}. Share via potent::Field.
class FieldSpec : public std::enable_shared_from_this<FieldSpec> {
 public:
  // F_p itself.
  static Field prime(uint32_t p) { return Field(new FieldSpec(p, {})); }

  // F_{p^m} with a given monic irreducible modulus, coefficients low to high,
  // length m + 1. Construction validates irreducibility.
  static Field extension(uint32_t p, std::vector<uint32_t> modulus) {
    return Field(new FieldSpec(p, std::move(modulus)));
  }

  uint32_t characteristic() const { return p_; }
  uint32_t degree() const { return m_; }
  uint64_t order() const { return q_; }
  // Empty for m == 1.
  const std::vector<uint32_t>& modulus() const { return modulus_; }

  bool same_as(const FieldSpec& other) const {
    return p_ == other.p_ && m_ == other.m_ && modulus_ == other.modulus_;
  }

  std::string header() const {
    std::string s = "p=" + std::to_string(p_) + " m=" + std::to_string(m_);
    if (m_ > 1) {
      s += " modulus=[";
      for (uint32_t i = 0; i < modulus_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(modulus_[i]);
      }
      s += "]";
    }
    return s;
  }

 private:
  FieldSpec(uint32_t p, std::vector<uint32_t> modulus)
      : p_(p), modulus_(std::move(modulus)) {
    if (!detail::is_prime(p) || p == 2)
      throw PreconditionViolated("field characteristic must be an odd prime, got " +
                                 std::to_string(p));
    if (modulus_.empty()) {
      m_ = 1;
    } else {
      if (modulus_.size() < 3)
        throw PreconditionViolated("extension modulus must have degree >= 2");
      m_ = static_cast<uint32_t>(modulus_.size()) - 1;
      for (uint32_t c : modulus_)
        if (c >= p_)
          throw PreconditionViolated("modulus coefficients must lie in [0, p)");
      if (modulus_.back() != 1)
        throw PreconditionViolated("modulus must be monic");
      if (!irreducible())
        throw PreconditionViolated("modulus is reducible over F_" + std::to_string(p));
    }
    q_ = 1;
    for (uint32_t i = 0; i < m_; ++i) q_ *= p_;
  }

  bool irreducible() const {
    using namespace detail;
    // Standard criterion: X^{p^m} = X mod f, and gcd(X^{p^{m/r}} - X, f) = 1
    // for every prime r | m. Covers all m; for m <= 3 it degenerates to the
    // no-roots test.
    uint64_t pm = 1;
    for (uint32_t i = 0; i < m_; ++i) pm *= p_;
    PVec frob = pv_powmod_x(pm, modulus_, p_);
    PVec x = pv_mod(PVec{0, 1}, modulus_, p_);
    if (frob != x) return false;
    for (uint32_t r = 2; r <= m_; ++r) {
      if (m_ % r != 0 || !is_prime(r)) continue;
      uint64_t e = 1;
      for (uint32_t i = 0; i < m_ / r; ++i) e *= p_;
      PVec g = pv_powmod_x(e, modulus_, p_);
      // g - X
      if (g.size() < 2) g.resize(2, 0);
      g[1] = (g[1] + p_ - 1) % p_;
      pv_trim(g);
      PVec d = pv_gcd(g, modulus_, p_);
      if (pv_deg(d) > 0) return false;
    }
    return true;
  }

  uint32_t p_;
  uint32_t m_ = 1;
  uint64_t q_ = 0;
  std::vector<uint32_t> modulus_;
};

inline void require_same_field(const Field& a, const Field& b) {
  if (a == b) return;
  if (!a || !b || !a->same_as(*b))
    throw FieldMismatch("operands belong to different fields");
}

// Value-type element of F_{p^m}: m coefficients, each reduced into [0, p).
class FieldElement {
 public:
  FieldElement() = default;

  FieldElement(Field field, std::vector<uint32_t> coeffs)
      : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != field_->degree())
      throw PreconditionViolated("element has wrong number of coefficients");
    for (uint32_t c : coeffs_)
      if (c >= field_->characteristic())
        throw PreconditionViolated("element coefficient out of range");
  }

  const Field& field() const { return field_; }
  const std::vector<uint32_t>& coeffs() const { return coeffs_; }

  bool is_zero() const {
    for (uint32_t c : coeffs_)
      if (c) return false;
    return true;
  }

  bool operator==(const FieldElement& o) const {
    require_same_field(field_, o.field_);
    return coeffs_ == o.coeffs_;
  }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  FieldElement operator+(const FieldElement& o) const {
    require_same_field(field_, o.field_);
    std::vector<uint32_t> r(coeffs_.size());
    uint32_t p = field_->characteristic();
    for (size_t i = 0; i < r.size(); ++i) r[i] = (coeffs_[i] + o.coeffs_[i]) % p;
    return unchecked(field_, std::move(r));
  }

  FieldElement operator-(const FieldElement& o) const {
    require_same_field(field_, o.field_);
    std::vector<uint32_t> r(coeffs_.size());
    uint32_t p = field_->characteristic();
    for (size_t i = 0; i < r.size(); ++i) r[i] = (coeffs_[i] + p - o.coeffs_[i]) % p;
    return unchecked(field_, std::move(r));
  }

  FieldElement operator-() const {
    std::vector<uint32_t> r(coeffs_.size());
    uint32_t p = field_->characteristic();
    for (size_t i = 0; i < r.size(); ++i) r[i] = (p - coeffs_[i]) % p;
    return unchecked(field_, std::move(r));
  }

  FieldElement operator*(const FieldElement& o) const {
    require_same_field(field_, o.field_);
    uint32_t p = field_->characteristic();
    if (field_->degree() == 1) {
      return unchecked(field_, {static_cast<uint32_t>(
                                   static_cast<uint64_t>(coeffs_[0]) * o.coeffs_[0] % p)});
    }
    detail::PVec prod = detail::pv_mul(coeffs_, o.coeffs_, p);
    prod = detail::pv_mod(std::move(prod), field_->modulus(), p);
    prod.resize(field_->degree(), 0);
    return unchecked(field_, std::move(prod));
  }

  FieldElement operator/(const FieldElement& o) const { return *this * o.inverse(); }

  FieldElement inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero");
    uint32_t p = field_->characteristic();
    if (field_->degree() == 1) {
      // Fermat: x^{p-2}.
      uint64_t base = coeffs_[0], acc = 1;
      for (uint32_t e = p - 2; e > 0; e >>= 1) {
        if (e & 1) acc = acc * base % p;
        base = base * base % p;
      }
      return unchecked(field_, {static_cast<uint32_t>(acc)});
    }
    // Extended Euclid in F_p[X] against the modulus.
    using namespace detail;
    PVec r0 = field_->modulus(), r1 = coeffs_;
    pv_trim(r1);
    PVec s0{}, s1{1};  // s tracks the coefficient of this element
    while (!r1.empty()) {
      // Divide r0 by r1: make r1 monic, record quotient implicitly via repeated
      // leading-term elimination.
      uint64_t lead = r1.back(), acc = 1;
      for (uint32_t e = p - 2; e > 0; e >>= 1) {
        if (e & 1) acc = acc * lead % p;
        lead = lead * lead % p;
      }
      uint32_t inv_lead = static_cast<uint32_t>(acc);
      PVec q(std::max<size_t>(r0.size(), 1), 0);
      PVec rem = r0;
      pv_trim(rem);
      while (pv_deg(rem) >= pv_deg(r1)) {
        int shift = pv_deg(rem) - pv_deg(r1);
        uint32_t c = static_cast<uint32_t>(
            static_cast<uint64_t>(rem.back()) * inv_lead % p);
        q[shift] = (q[shift] + c) % p;
        for (size_t i = 0; i < r1.size(); ++i) {
          uint64_t sub = static_cast<uint64_t>(c) * r1[i] % p;
          rem[i + shift] = static_cast<uint32_t>((rem[i + shift] + p - sub) % p);
        }
        pv_trim(rem);
      }
      pv_trim(q);
      // (r0, r1) <- (r1, rem); (s0, s1) <- (s1, s0 - q*s1)
      PVec qs = pv_mul(q, s1, p);
      PVec s2 = s0;
      if (s2.size() < qs.size()) s2.resize(qs.size(), 0);
      for (size_t i = 0; i < qs.size(); ++i) s2[i] = (s2[i] + p - qs[i]) % p;
      pv_trim(s2);
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    // r0 = gcd (a nonzero constant since the modulus is irreducible); s0 is the
    // cofactor of this element.
    if (pv_deg(r0) != 0) throw InternalError("gcd with irreducible modulus not constant");
    uint64_t g = r0[0], acc = 1;
    for (uint32_t e = p - 2; e > 0; e >>= 1) {
      if (e & 1) acc = acc * g % p;
      g = g * g % p;
    }
    for (auto& c : s0) c = static_cast<uint32_t>(static_cast<uint64_t>(c) * acc % p);
    s0.resize(field_->degree(), 0);
    return unchecked(field_, std::move(s0));
  }

  FieldElement pow(uint64_t e) const {
    FieldElement acc = one(field_);
    FieldElement base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  // Position of this element in the lexicographic enumeration of the field:
  // sum coeffs[i] * p^i. Used for deterministic orderings, not for arithmetic.
  uint64_t lex_index() const {
    uint64_t idx = 0, w = 1;
    for (uint32_t c : coeffs_) {
      idx += c * w;
      w *= field_->characteristic();
    }
    return idx;
  }

  static FieldElement zero(const Field& f) {
    return unchecked(f, std::vector<uint32_t>(f->degree(), 0));
  }

  static FieldElement one(const Field& f) {
    std::vector<uint32_t> c(f->degree(), 0);
    c[0] = 1;
    return unchecked(f, std::move(c));
  }

  // t * 1 for any integer t (reduced mod p into the prime subfield).
  static FieldElement from_int(const Field& f, int64_t t) {
    std::vector<uint32_t> c(f->degree(), 0);
    c[0] = detail::reduce_mod(t, f->characteristic());
    return unchecked(f, std::move(c));
  }

  // Inverse of lex_index.
  static FieldElement from_lex_index(const Field& f, uint64_t idx) {
    std::vector<uint32_t> c(f->degree(), 0);
    uint32_t p = f->characteristic();
    for (uint32_t i = 0; i < f->degree(); ++i) {
      c[i] = static_cast<uint32_t>(idx % p);
      idx /= p;
    }
    if (idx != 0) throw PreconditionViolated("element index out of range");
    return unchecked(f, std::move(c));
  }

 private:
  static FieldElement unchecked(const Field& f, std::vector<uint32_t> c) {
    FieldElement e;
    e.field_ = f;
    e.coeffs_ = std::move(c);
    return e;
  }

  Field field_;
  std::vector<uint32_t> coeffs_;
};

inline FieldElement int_embed(const Field& f, int64_t t) {
  return FieldElement::from_int(f, t);
}

// t such that x == t*1, if x lies in the prime subfield.
inline std::optional<uint32_t> prime_subfield_index(const FieldElement& x) {
  const auto& c = x.coeffs();
  for (size_t i = 1; i < c.size(); ++i)
    if (c[i]) return std::nullopt;
  return c[0];
}

// Canonical text form: "4" for m = 1, "[a0,a1,...]" low-to-high for m > 1.
inline std::string to_string(const FieldElement& x) {
  if (x.field()->degree() == 1) return std::to_string(x.coeffs()[0]);
  std::string s = "[";
  for (size_t i = 0; i < x.coeffs().size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x.coeffs()[i]);
  }
  return s + "]";
}

// Strict parse of the canonical form above; rejects unreduced or padded input
// (so "3" under p = 3 and "[1, 0]" with a space are both errors).
inline FieldElement parse_element(const Field& f, const std::string& tok) {
  uint32_t p = f->characteristic();
  auto parse_digit = [&](const std::string& s) -> uint32_t {
    if (s.empty()) throw Error("empty coefficient");
    for (char ch : s)
      if (ch < '0' || ch > '9') throw Error("bad coefficient '" + s + "'");
    if (s.size() > 1 && s[0] == '0') throw Error("non-canonical coefficient '" + s + "'");
    uint64_t v = 0;
    for (char ch : s) {
      v = v * 10 + static_cast<uint32_t>(ch - '0');
      if (v >= p) throw Error("coefficient '" + s + "' not reduced mod " + std::to_string(p));
    }
    return static_cast<uint32_t>(v);
  };
  if (f->degree() == 1) {
    if (!tok.empty() && tok.front() == '[')
      throw Error("bracketed element in a prime field");
    return FieldElement(f, {parse_digit(tok)});
  }
  if (tok.size() < 2 || tok.front() != '[' || tok.back() != ']')
    throw Error("element '" + tok + "' must be bracketed for m > 1");
  std::vector<uint32_t> coeffs;
  std::string cur;
  for (size_t i = 1; i + 1 < tok.size(); ++i) {
    if (tok[i] == ',') {
      coeffs.push_back(parse_digit(cur));
      cur.clear();
    } else {
      cur += tok[i];
    }
  }
  coeffs.push_back(parse_digit(cur));
  if (coeffs.size() != f->degree())
    throw Error("element '" + tok + "' has wrong coefficient count");
  return FieldElement(f, std::move(coeffs));
}

}  // namespace potent
