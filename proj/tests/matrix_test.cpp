#include <gtest/gtest.h>

#include <random>

#include "potent/potent.hpp"

using namespace potent;

namespace {

Matrix random_matrix(const Field& f, uint32_t n, std::mt19937& rng) {
  std::uniform_int_distribution<uint64_t> pick(0, f->order() - 1);
  Matrix m(f, n, n);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j)
      m.set(i, j, FieldElement::from_lex_index(f, pick(rng)));
  return m;
}

Matrix random_invertible(const Field& f, uint32_t n, std::mt19937& rng) {
  for (;;) {
    Matrix m = random_matrix(f, n, rng);
    if (m.rank() == n) return m;
  }
}

}  // namespace

TEST(Polynomial, DivmodKnownCase) {
  Field f = FieldSpec::prime(3);
  // x^3 + 2x + 1 = x * (x^2 + 1) + (x + 1)
  Polynomial num(f, {int_embed(f, 1), int_embed(f, 2), int_embed(f, 0), int_embed(f, 1)});
  Polynomial den(f, {int_embed(f, 1), int_embed(f, 0), int_embed(f, 1)});
  auto [q, r] = num.divmod(den);
  EXPECT_EQ(q, Polynomial(f, {int_embed(f, 0), int_embed(f, 1)}));
  EXPECT_EQ(r, Polynomial(f, {int_embed(f, 1), int_embed(f, 1)}));
  EXPECT_EQ(q * den + r, num);
  EXPECT_FALSE(den.divides(num));
  EXPECT_TRUE(den.divides(den * q));
}

TEST(Polynomial, EvalHorner) {
  Field f = FieldSpec::prime(5);
  // 2x^2 + 3x + 1 at x = 4: 32 + 12 + 1 = 45 = 0 mod 5.
  Polynomial p(f, {int_embed(f, 1), int_embed(f, 3), int_embed(f, 2)});
  EXPECT_TRUE(p.eval(int_embed(f, 4)).is_zero());
  EXPECT_EQ(p.eval(int_embed(f, 1)), int_embed(f, 1));
}

TEST(Polynomial, DegreeAndNormalization) {
  Field f = FieldSpec::prime(3);
  EXPECT_EQ(Polynomial::zero(f).degree(), -1);
  Polynomial p(f, {int_embed(f, 1), int_embed(f, 0), int_embed(f, 0)});
  EXPECT_EQ(p.degree(), 0);  // trailing zeros stripped
  EXPECT_TRUE(Polynomial::x_power(f, 3).is_monic());
}

TEST(Matrix, ArithmeticBasics) {
  Field f = FieldSpec::prime(5);
  Matrix a = Matrix::from_ints(f, {{1, 2}, {3, 4}});
  Matrix b = Matrix::from_ints(f, {{0, 1}, {1, 0}});
  EXPECT_EQ(a + b, Matrix::from_ints(f, {{1, 3}, {4, 4}}));
  EXPECT_EQ(a - a, Matrix(f, 2, 2));
  EXPECT_EQ(a * b, Matrix::from_ints(f, {{2, 1}, {4, 3}}));
  EXPECT_EQ(a * Matrix::identity(f, 2), a);
  EXPECT_EQ(a.scalar_mul(int_embed(f, 2)), Matrix::from_ints(f, {{2, 4}, {6, 8}}));
  EXPECT_EQ((-a) + a, Matrix(f, 2, 2));
  EXPECT_EQ(a.trace(), int_embed(f, 0));
}

TEST(Matrix, ShapeChecks) {
  Field f = FieldSpec::prime(3);
  Matrix a(f, 2, 3);
  Matrix b(f, 2, 2);
  EXPECT_THROW(a + b, DimensionMismatch);
  EXPECT_THROW(b * a * b, DimensionMismatch);
  EXPECT_FALSE(a.is_square());
}

TEST(Matrix, InverseRoundTrip) {
  Field f = FieldSpec::prime(5);
  std::mt19937 rng(41);
  for (int i = 0; i < 20; ++i) {
    Matrix m = random_invertible(f, 4, rng);
    EXPECT_EQ(m * m.inverse(), Matrix::identity(f, 4));
  }
  Matrix sing = Matrix::from_ints(f, {{1, 2}, {2, 4}});
  EXPECT_THROW(sing.inverse(), SingularMatrix);
}

TEST(Matrix, RankExamples) {
  Field f = FieldSpec::prime(3);
  EXPECT_EQ(Matrix::identity(f, 3).rank(), 3u);
  EXPECT_EQ(Matrix(f, 3, 3).rank(), 0u);
  EXPECT_EQ(Matrix::from_ints(f, {{1, 2}, {2, 4}}).rank(), 1u);
}

TEST(Matrix, PowBinary) {
  Field f = FieldSpec::prime(3);
  Matrix c = CompanionSpec::from_ints(f, {1, 0, 2}).realize();
  Matrix acc = Matrix::identity(f, 3);
  for (uint32_t e = 0; e < 9; ++e) {
    EXPECT_EQ(c.pow(e), acc);
    acc = acc * c;
  }
}

TEST(Matrix, ConjugateBy) {
  Field f = FieldSpec::prime(5);
  std::mt19937 rng(7);
  Matrix a = random_matrix(f, 3, rng);
  Matrix p = random_invertible(f, 3, rng);
  Matrix conj = a.conjugate_by(p);
  EXPECT_EQ(conj, p * a * p.inverse());
  EXPECT_EQ(conj.trace(), a.trace());
}

TEST(Matrix, BlockAssembly) {
  Field f = FieldSpec::prime(3);
  Matrix a = Matrix::identity(f, 2);
  Matrix b(f, 2, 1);
  Matrix c(f, 1, 2);
  Matrix d = Matrix::from_ints(f, {{2}});
  Matrix whole = assemble_blocks(a, b, c, d);
  EXPECT_EQ(whole.rows(), 3u);
  EXPECT_EQ(whole.at(0, 0), int_embed(f, 1));
  EXPECT_EQ(whole.at(2, 2), int_embed(f, 2));
  EXPECT_EQ(whole.submatrix(0, 0, 2, 2), a);
  EXPECT_EQ(whole.submatrix(2, 2, 1, 1), d);
}

TEST(CharPoly, MatchesCompanionCoefficients) {
  for (uint32_t p : {3u, 5u}) {
    Field f = FieldSpec::prime(p);
    std::mt19937 rng(11 + p);
    std::uniform_int_distribution<int64_t> pick(0, p - 1);
    // n = 5, 6 exercise the Hessenberg path; n <= 4 the direct expansion.
    for (uint32_t n = 1; n <= 6; ++n) {
      for (int rep = 0; rep < 10; ++rep) {
        std::vector<int64_t> coeffs(n);
        for (auto& c : coeffs) c = pick(rng);
        CompanionSpec c_spec = CompanionSpec::from_ints(f, coeffs);
        EXPECT_EQ(char_poly(c_spec.realize()), c_spec.char_polynomial());
      }
    }
  }
}

TEST(CharPoly, SimilarityInvariant) {
  Field f = FieldSpec::prime(3);
  std::mt19937 rng(23);
  for (uint32_t n : {3u, 5u, 6u}) {
    Matrix a = random_matrix(f, n, rng);
    Matrix p = random_invertible(f, n, rng);
    EXPECT_EQ(char_poly(a.conjugate_by(p)), char_poly(a));
  }
}

TEST(CharPoly, DiagonalFactors) {
  Field f = FieldSpec::prime(5);
  Matrix d(f, 3, 3);
  d.set(0, 0, int_embed(f, 1));
  d.set(1, 1, int_embed(f, 2));
  d.set(2, 2, int_embed(f, 2));
  Polynomial chi = char_poly(d);
  // (X-1)(X-2)^2 = X^3 - 5X^2 + 8X - 4 = X^3 + 3X + 1 over F_5.
  EXPECT_EQ(chi, Polynomial(f, {int_embed(f, 1), int_embed(f, 3), int_embed(f, 0),
                                int_embed(f, 1)}));
}

TEST(CharPoly, CayleyHamilton) {
  Field f = FieldSpec::prime(3);
  std::mt19937 rng(31);
  for (uint32_t n : {2u, 4u, 5u}) {
    Matrix a = random_matrix(f, n, rng);
    Polynomial chi = char_poly(a);
    Matrix acc(f, n, n);
    for (int32_t i = 0; i <= chi.degree(); ++i)
      acc = acc + a.pow(static_cast<uint32_t>(i)).scalar_mul(chi.coeff(i));
    EXPECT_TRUE(acc.is_zero());
  }
}

TEST(MinPoly, CompanionIsNonderogatory) {
  Field f = FieldSpec::prime(3);
  CompanionSpec c = CompanionSpec::from_ints(f, {1, 0, 2});
  EXPECT_EQ(min_poly(c.realize()), c.char_polynomial());
  EXPECT_TRUE(is_nonderogatory(c.realize()));
}

TEST(MinPoly, DetectsDerogatoryMatrices) {
  Field f = FieldSpec::prime(3);
  Matrix d = Matrix::identity(f, 2);
  Polynomial mp = min_poly(d);
  EXPECT_EQ(mp.degree(), 1);  // X - 1
  EXPECT_FALSE(is_nonderogatory(d));
  Matrix z(f, 3, 3);
  EXPECT_EQ(min_poly(z).degree(), 1);
}

TEST(MinPoly, DividesCharAndAnnihilates) {
  Field f = FieldSpec::prime(5);
  std::mt19937 rng(53);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix a = random_matrix(f, 4, rng);
    Polynomial mp = min_poly(a);
    EXPECT_TRUE(mp.divides(char_poly(a)));
    Matrix acc(f, 4, 4);
    for (int32_t i = 0; i <= mp.degree(); ++i)
      acc = acc + a.pow(static_cast<uint32_t>(i)).scalar_mul(mp.coeff(i));
    EXPECT_TRUE(acc.is_zero());
  }
}

TEST(Nilpotency, IndexOfShiftMatrix) {
  Field f = FieldSpec::prime(3);
  for (uint32_t n : {1u, 2u, 4u}) {
    Matrix j(f, n, n);
    for (uint32_t i = 0; i + 1 < n; ++i) j.set(i, i + 1, FieldElement::one(f));
    EXPECT_TRUE(is_nilpotent(j));
    EXPECT_EQ(nilpotency_index(j), n == 1 ? 1u : n);
  }
  EXPECT_EQ(nilpotency_index(Matrix(f, 3, 3)), 1u);
  EXPECT_FALSE(nilpotency_index(Matrix::identity(f, 2)).has_value());
}

TEST(PPotency, Examples) {
  Field f = FieldSpec::prime(3);
  EXPECT_TRUE(is_p_potent(Matrix(f, 2, 2)));
  EXPECT_TRUE(is_p_potent(Matrix::identity(f, 2)));
  EXPECT_TRUE(is_p_potent(Matrix::from_ints(f, {{1, 0}, {0, 2}})));  // diag(1,-1)
  EXPECT_FALSE(is_p_potent(Matrix::from_ints(f, {{0, 1}, {0, 0}})));

  // Over F_9, x itself is not fixed by the cube map (x^3 = -x), so diag(x)
  // is not p-potent even though it is diagonalizable.
  Field g = FieldSpec::extension(3, {1, 0, 1});
  Matrix dx(g, 2, 2);
  dx.set(0, 0, FieldElement(g, {0, 1}));
  EXPECT_FALSE(is_p_potent(dx));
}

TEST(Eigenvalues, MembershipViaCharPoly) {
  Field f = FieldSpec::prime(3);
  Matrix a = CompanionSpec::from_ints(f, {1, 0, 2}).realize();
  // The sharpness qualifier: no eigenvalue in {0, 1, -1}.
  for (int64_t x : {0, 1, 2}) EXPECT_FALSE(eigenvalue_member(a, int_embed(f, x)));
  Matrix d = Matrix::from_ints(f, {{2, 0}, {0, 1}});
  EXPECT_TRUE(eigenvalue_member(d, int_embed(f, 2)));
}

TEST(MatVec, MultipliesColumns) {
  Field f = FieldSpec::prime(5);
  Matrix a = Matrix::from_ints(f, {{1, 2}, {3, 4}});
  std::vector<FieldElement> v{int_embed(f, 1), int_embed(f, 1)};
  auto r = mat_vec(a, v);
  EXPECT_EQ(r[0], int_embed(f, 3));
  EXPECT_EQ(r[1], int_embed(f, 2));
}

TEST(Enumeration, LexOrderAndCount) {
  Field f = FieldSpec::prime(3);
  std::vector<Matrix> seen;
  for_each_matrix(f, 1, 2, 1000, [&](const Matrix& m) {
    seen.push_back(m);
    return false;
  });
  ASSERT_EQ(seen.size(), 9u);
  // (0,0) then (0,1): the last entry is least significant.
  EXPECT_EQ(seen[0], Matrix::from_ints(f, {{0, 0}}));
  EXPECT_EQ(seen[1], Matrix::from_ints(f, {{0, 1}}));
  EXPECT_EQ(seen[3], Matrix::from_ints(f, {{1, 0}}));
  EXPECT_EQ(seen[8], Matrix::from_ints(f, {{2, 2}}));
}

TEST(Enumeration, GuardRefusesHugeSpaces) {
  Field f = FieldSpec::prime(3);
  EXPECT_THROW(
      for_each_matrix(f, 4, 4, 1000000, [](const Matrix&) { return false; }),
      SearchSpaceTooLarge);
}

TEST(Enumeration, EarlyStop) {
  Field f = FieldSpec::prime(3);
  int count = 0;
  for_each_matrix(f, 2, 2, 100000, [&](const Matrix&) { return ++count == 5; });
  EXPECT_EQ(count, 5);
}
