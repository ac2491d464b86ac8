#include <gtest/gtest.h>

#include "potent/potent.hpp"

using namespace potent;

TEST(FieldSpec, PrimeFieldBasics) {
  Field f = FieldSpec::prime(5);
  EXPECT_EQ(f->characteristic(), 5u);
  EXPECT_EQ(f->degree(), 1u);
  EXPECT_EQ(f->order(), 5u);
  EXPECT_EQ(f->header(), "p=5 m=1");
}

TEST(FieldSpec, RejectsBadCharacteristic) {
  EXPECT_THROW(FieldSpec::prime(2), PreconditionViolated);  // odd only
  EXPECT_THROW(FieldSpec::prime(1), PreconditionViolated);
  EXPECT_THROW(FieldSpec::prime(9), PreconditionViolated);
  EXPECT_THROW(FieldSpec::prime(15), PreconditionViolated);
}

TEST(FieldSpec, ExtensionConstruction) {
  // x^2 + 1 is irreducible over F_3 (no root among 0, 1, 2).
  Field f = FieldSpec::extension(3, {1, 0, 1});
  EXPECT_EQ(f->characteristic(), 3u);
  EXPECT_EQ(f->degree(), 2u);
  EXPECT_EQ(f->order(), 9u);
  EXPECT_EQ(f->header(), "p=3 m=2 modulus=[1,0,1]");

  // x^3 + 2x + 1 has no root over F_3, hence is irreducible at degree 3.
  Field f27 = FieldSpec::extension(3, {1, 2, 0, 1});
  EXPECT_EQ(f27->order(), 27u);
}

TEST(FieldSpec, RejectsReducibleModulus) {
  // x^2 + 2 = (x - 1)(x + 1) over F_3.
  EXPECT_THROW(FieldSpec::extension(3, {2, 0, 1}), PreconditionViolated);
  // x^2 + 1 = (x - 2)(x - 3) over F_5.
  EXPECT_THROW(FieldSpec::extension(5, {1, 0, 1}), PreconditionViolated);
  // x^4 + 2x^2 + 1 = (x^2 + 1)^2 over F_3: square of an irreducible, so the
  // root-free check alone would pass; the power test must catch it.
  EXPECT_THROW(FieldSpec::extension(3, {1, 0, 2, 0, 1}), PreconditionViolated);
}

TEST(FieldSpec, RejectsMalformedModulus) {
  EXPECT_THROW(FieldSpec::extension(3, {1, 0, 2}), PreconditionViolated);  // not monic
  EXPECT_THROW(FieldSpec::extension(3, {4, 0, 1}), PreconditionViolated);  // not reduced
  EXPECT_THROW(FieldSpec::extension(3, {1, 1}), PreconditionViolated);     // degree 1
}

TEST(FieldElement, PrimeArithmetic) {
  Field f = FieldSpec::prime(5);
  FieldElement a = int_embed(f, 2);
  FieldElement b = int_embed(f, 4);
  EXPECT_EQ(a + b, int_embed(f, 1));
  EXPECT_EQ(a - b, int_embed(f, 3));
  EXPECT_EQ(a * b, int_embed(f, 3));
  EXPECT_EQ(int_embed(f, 3) / b, a);  // 3 * 4^{-1} = 3 * 4 = 12 = 2
  EXPECT_EQ(-a, int_embed(f, 3));
  EXPECT_EQ(int_embed(f, -1), int_embed(f, 4));
}

TEST(FieldElement, InverseFermatAllNonzero) {
  Field f = FieldSpec::prime(7);
  for (int64_t x = 1; x < 7; ++x) {
    FieldElement e = int_embed(f, x);
    EXPECT_EQ(e * e.inverse(), FieldElement::one(f));
  }
  EXPECT_THROW(FieldElement::zero(f).inverse(), DivisionByZero);
}

TEST(FieldElement, ExtensionArithmetic) {
  Field f = FieldSpec::extension(3, {1, 0, 1});  // x^2 = -1
  FieldElement x = FieldElement(f, {0, 1});
  FieldElement xp1 = FieldElement(f, {1, 1});
  // (x + 1)^2 = x^2 + 2x + 1 = 2x.
  EXPECT_EQ(xp1 * xp1, FieldElement(f, {0, 2}));
  // x * (-x) = -x^2 = 1.
  EXPECT_EQ(x.inverse(), -x);
  for (uint64_t i = 1; i < 9; ++i) {
    FieldElement e = FieldElement::from_lex_index(f, i);
    EXPECT_EQ(e * e.inverse(), FieldElement::one(f));
    // Multiplicative group has order 8.
    EXPECT_EQ(e.pow(8), FieldElement::one(f));
  }
}

TEST(FieldElement, PowMatchesRepeatedMultiplication) {
  Field f = FieldSpec::prime(5);
  FieldElement a = int_embed(f, 3);
  FieldElement acc = FieldElement::one(f);
  for (uint32_t i = 0; i < 12; ++i) {
    EXPECT_EQ(a.pow(i), acc);
    acc = acc * a;
  }
}

TEST(FieldElement, LexIndexRoundTrip) {
  Field f = FieldSpec::extension(3, {1, 0, 1});
  for (uint64_t i = 0; i < 9; ++i) {
    FieldElement e = FieldElement::from_lex_index(f, i);
    EXPECT_EQ(e.lex_index(), i);
  }
  Field g = FieldSpec::prime(7);
  for (uint64_t i = 0; i < 7; ++i)
    EXPECT_EQ(FieldElement::from_lex_index(g, i).lex_index(), i);
}

TEST(FieldElement, PrimeSubfieldMembership) {
  Field f = FieldSpec::extension(3, {1, 0, 1});
  EXPECT_EQ(prime_subfield_index(FieldElement(f, {2, 0})), 2u);
  EXPECT_EQ(prime_subfield_index(FieldElement::zero(f)), 0u);
  EXPECT_FALSE(prime_subfield_index(FieldElement(f, {1, 1})).has_value());
  Field g = FieldSpec::prime(5);
  EXPECT_EQ(prime_subfield_index(int_embed(g, 4)), 4u);
}

TEST(FieldElement, MixedFieldsRejected) {
  Field f = FieldSpec::prime(3);
  Field g = FieldSpec::prime(5);
  EXPECT_THROW(int_embed(f, 1) + int_embed(g, 1), FieldMismatch);
}

TEST(FieldElement, StructurallyEqualFieldsInterop) {
  // Two independently built handles to the same field must interoperate.
  Field f1 = FieldSpec::extension(3, {1, 0, 1});
  Field f2 = FieldSpec::extension(3, {1, 0, 1});
  EXPECT_TRUE(f1->same_as(*f2));
  EXPECT_EQ(FieldElement(f1, {1, 2}) + FieldElement(f2, {2, 1}), FieldElement(f1, {0, 0}));
}

TEST(ElementText, CanonicalRendering) {
  Field f = FieldSpec::prime(5);
  EXPECT_EQ(to_string(int_embed(f, 4)), "4");
  Field g = FieldSpec::extension(3, {1, 0, 1});
  EXPECT_EQ(to_string(FieldElement(g, {1, 2})), "[1,2]");
  EXPECT_EQ(to_string(FieldElement::zero(g)), "[0,0]");
}

TEST(ElementText, StrictParsing) {
  Field f = FieldSpec::prime(5);
  EXPECT_EQ(parse_element(f, "4"), int_embed(f, 4));
  EXPECT_THROW(parse_element(f, "5"), Error);    // not reduced
  EXPECT_THROW(parse_element(f, "04"), Error);   // leading zero
  EXPECT_THROW(parse_element(f, "-1"), Error);   // no signs
  EXPECT_THROW(parse_element(f, ""), Error);
  EXPECT_THROW(parse_element(f, "[1]"), Error);  // bracket form in a prime field

  Field g = FieldSpec::extension(3, {1, 0, 1});
  EXPECT_EQ(parse_element(g, "[1,2]"), FieldElement(g, {1, 2}));
  EXPECT_THROW(parse_element(g, "[1, 2]"), Error);   // space
  EXPECT_THROW(parse_element(g, "[1,2,0]"), Error);  // wrong length
  EXPECT_THROW(parse_element(g, "[1,3]"), Error);    // not reduced
  EXPECT_THROW(parse_element(g, "2"), Error);        // bare digit in extension
}

TEST(ElementText, ParseRoundTripAllElements) {
  Field g = FieldSpec::extension(3, {1, 0, 1});
  for (uint64_t i = 0; i < 9; ++i) {
    FieldElement e = FieldElement::from_lex_index(g, i);
    EXPECT_EQ(parse_element(g, to_string(e)), e);
  }
}
