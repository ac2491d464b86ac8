#pragma once

#include <string>
#include <utility>
#include <vector>

#include "potent/field.hpp"

namespace potent {

// Dense univariate polynomial over F_{p^m}, coefficients low to high with no
// trailing zeros (the zero polynomial has no coefficients and degree -1).
class Polynomial {
 public:
  explicit Polynomial(Field field) : field_(std::move(field)) {}

  Polynomial(Field field, std::vector<FieldElement> coeffs)
      : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    for (const auto& c : coeffs_) require_same_field(field_, c.field());
    trim();
  }

  static Polynomial zero(const Field& f) { return Polynomial(f); }

  static Polynomial constant(const FieldElement& c) {
    return Polynomial(c.field(), {c});
  }

  // X^k
  static Polynomial x_power(const Field& f, uint32_t k) {
    std::vector<FieldElement> c(k + 1, FieldElement::zero(f));
    c[k] = FieldElement::one(f);
    return Polynomial(f, std::move(c));
  }

  const Field& field() const { return field_; }
  const std::vector<FieldElement>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  FieldElement coeff(uint32_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : FieldElement::zero(field_);
  }

  FieldElement leading() const {
    if (is_zero()) throw PreconditionViolated("zero polynomial has no leading coefficient");
    return coeffs_.back();
  }

  bool is_monic() const {
    return !is_zero() && coeffs_.back() == FieldElement::one(field_);
  }

  bool operator==(const Polynomial& o) const {
    require_same_field(field_, o.field_);
    return coeffs_ == o.coeffs_;
  }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  Polynomial operator+(const Polynomial& o) const {
    require_same_field(field_, o.field_);
    std::vector<FieldElement> r(std::max(coeffs_.size(), o.coeffs_.size()),
                                FieldElement::zero(field_));
    for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
    return Polynomial(field_, std::move(r));
  }

  Polynomial operator-(const Polynomial& o) const {
    require_same_field(field_, o.field_);
    std::vector<FieldElement> r(std::max(coeffs_.size(), o.coeffs_.size()),
                                FieldElement::zero(field_));
    for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
    return Polynomial(field_, std::move(r));
  }

  Polynomial operator*(const Polynomial& o) const {
    require_same_field(field_, o.field_);
    if (is_zero() || o.is_zero()) return zero(field_);
    std::vector<FieldElement> r(coeffs_.size() + o.coeffs_.size() - 1,
                                FieldElement::zero(field_));
    for (size_t i = 0; i < coeffs_.size(); ++i)
      for (size_t j = 0; j < o.coeffs_.size(); ++j)
        r[i + j] = r[i + j] + coeffs_[i] * o.coeffs_[j];
    return Polynomial(field_, std::move(r));
  }

  Polynomial operator*(const FieldElement& c) const {
    std::vector<FieldElement> r = coeffs_;
    for (auto& x : r) x = x * c;
    return Polynomial(field_, std::move(r));
  }

  // Quotient and remainder; divisor must be nonzero.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    require_same_field(field_, d.field_);
    if (d.is_zero()) throw DivisionByZero("polynomial division by zero");
    Polynomial rem = *this;
    std::vector<FieldElement> q(
        degree() >= d.degree() ? degree() - d.degree() + 1 : 0,
        FieldElement::zero(field_));
    FieldElement lead_inv = d.leading().inverse();
    while (!rem.is_zero() && rem.degree() >= d.degree()) {
      int shift = rem.degree() - d.degree();
      FieldElement c = rem.leading() * lead_inv;
      q[shift] = q[shift] + c;
      std::vector<FieldElement> sub(shift, FieldElement::zero(field_));
      for (const auto& dc : d.coeffs_) sub.push_back(dc * c);
      rem = rem - Polynomial(field_, std::move(sub));
    }
    return {Polynomial(field_, std::move(q)), rem};
  }

  bool divides(const Polynomial& other) const {
    return other.divmod(*this).second.is_zero();
  }

  FieldElement eval(const FieldElement& x) const {
    require_same_field(field_, x.field());
    FieldElement acc = FieldElement::zero(field_);
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (size_t i = coeffs_.size(); i-- > 0;) {
      if (coeffs_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      std::string c = to_string(coeffs_[i]);
      if (i == 0) {
        s += c;
      } else {
        if (c != "1") s += c + "*";
        s += (i == 1) ? "X" : "X^" + std::to_string(i);
      }
    }
    return s;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  Field field_;
  std::vector<FieldElement> coeffs_;
};

}  // namespace potent
