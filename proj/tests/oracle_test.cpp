#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>

#include "potent/potent.hpp"

using namespace potent;

namespace {

// Flat row-major lex key of a matrix, last entry least significant; the
// enumeration order contract is expressed against this.
uint64_t lex_key(const Matrix& m) {
  uint64_t q = m.field()->order();
  uint64_t key = 0;
  for (uint32_t i = 0; i < m.rows(); ++i)
    for (uint32_t j = 0; j < m.cols(); ++j) key = key * q + m.at(i, j).lex_index();
  return key;
}

}  // namespace

TEST(EnumeratePPotents, CountsMatchClassArithmetic) {
  // Diagonalizable with eigenvalues among the prime subfield; the counts
  // follow from conjugacy class sizes. 2x2/F_3: 3 + 3*12 = 39. 2x2/F_9:
  // 3 + 3*90 = 273. 3x3/F_3: 3 + 6*117 + 1404 = 2109.
  Field f3 = FieldSpec::prime(3);
  Field f9 = FieldSpec::extension(3, {1, 0, 1});
  EXPECT_EQ(enumerate_p_potents(f3, 2).size(), 39u);
  EXPECT_EQ(enumerate_p_potents(f9, 2).size(), 273u);
  EXPECT_EQ(enumerate_p_potents(f3, 3).size(), 2109u);
}

TEST(EnumeratePPotents, OrderedAndActuallyPotent) {
  Field f = FieldSpec::prime(3);
  std::vector<Matrix> all = enumerate_p_potents(f, 2);
  ASSERT_FALSE(all.empty());
  EXPECT_TRUE(all.front().is_zero());
  uint64_t prev = lex_key(all.front());
  bool saw_identity = false;
  for (size_t i = 1; i < all.size(); ++i) {
    EXPECT_TRUE(is_p_potent(all[i]));
    uint64_t key = lex_key(all[i]);
    EXPECT_LT(prev, key);
    prev = key;
    if (all[i] == Matrix::identity(f, 2)) saw_identity = true;
  }
  EXPECT_TRUE(saw_identity);
}

TEST(EnumeratePPotents, GuardThrows) {
  Field f = FieldSpec::prime(3);
  EXPECT_THROW(enumerate_p_potents(f, 4, 1000), SearchSpaceTooLarge);
}

TEST(OracleDecompose, DistinguishesNilpotencyIndices) {
  Field f = FieldSpec::prime(3);
  // A sharpness qualifier: no split with V^2 = 0 exists, one with V^3 = 0 does.
  Matrix a = CompanionSpec::from_ints(f, {1, 0, 2}).realize();
  EXPECT_FALSE(oracle_decompose(a, 2).has_value());
  auto hit = oracle_decompose(a, 3);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(hit->first + hit->second, a);
  EXPECT_TRUE(is_p_potent(hit->first));
  EXPECT_TRUE(hit->second.pow(3).is_zero());
  EXPECT_FALSE((hit->second * hit->second).is_zero());
}

TEST(OracleDecompose, AgreesWithConstructiveRoutes) {
  Field f = FieldSpec::prime(3);
  for (int64_t c0 = 0; c0 < 3; ++c0)
    for (int64_t c1 = 0; c1 < 3; ++c1) {
      CompanionSpec c = CompanionSpec::from_ints(f, {c0, c1, 1});
      auto hit = oracle_decompose(c.realize(), 3);
      ASSERT_TRUE(hit.has_value());
      Decomposition d = decompose_companion(c);
      EXPECT_TRUE(verify_decomposition(d));
      // Same existence answer; the witnesses may differ.
    }
}

TEST(OracleDecompose, Guards) {
  Field f = FieldSpec::prime(3);
  Matrix a = CompanionSpec::from_ints(f, {1, 0, 2}).realize();
  EXPECT_THROW(oracle_decompose(a, 3, 100), SearchSpaceTooLarge);
  EXPECT_THROW(oracle_decompose(Matrix(f, 2, 3), 3), DimensionMismatch);
}

TEST(SharpnessScan, ExactlyTheThreeQualifiers) {
  SharpnessReport r = sharpness_scan();
  ASSERT_EQ(r.cases.size(), 3u);
  EXPECT_TRUE(r.all_sharp);
  std::vector<std::vector<std::string>> expect = {
      {"1", "0", "2"}, {"1", "1", "2"}, {"2", "2", "2"}};
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(r.cases[i].coeffs, expect[i]);
    EXPECT_TRUE(r.cases[i].smaller_index_impossible);
    EXPECT_TRUE(verify_decomposition(r.cases[i].certificate));
    EXPECT_EQ(r.cases[i].certificate.checks.nil_index, 3u);
  }
}

TEST(ExhaustiveSweep, CubicsOverFThree) {
  Field f = FieldSpec::prime(3);
  SweepReport r = exhaustive_sweep(f, 3);
  EXPECT_EQ(r.total, 27u);
  EXPECT_EQ(r.succeeded, 27u);
  EXPECT_EQ(r.trace_rejected, 0u);
  EXPECT_EQ(r.failed, 0u);
  EXPECT_TRUE(r.failure_examples.empty());
  ASSERT_EQ(r.histogram.size(), 3u);
  EXPECT_EQ(r.histogram.at(RouteTag::P3_T1), 9u);
  EXPECT_EQ(r.histogram.at(RouteTag::P3_T2), 9u);
  EXPECT_EQ(r.histogram.at(RouteTag::P3_T0_TRIP), 9u);
}

TEST(ExhaustiveSweep, ThreadCountDoesNotChangeTheReport) {
  Field f = FieldSpec::prime(3);
  SweepReport one = exhaustive_sweep(f, 4, 1);
  SweepReport three = exhaustive_sweep(f, 4, 3);
  EXPECT_EQ(one.total, three.total);
  EXPECT_EQ(one.succeeded, three.succeeded);
  EXPECT_EQ(one.trace_rejected, three.trace_rejected);
  EXPECT_EQ(one.failed, three.failed);
  EXPECT_EQ(one.histogram, three.histogram);
  EXPECT_EQ(one.failure_examples, three.failure_examples);
}

TEST(ExhaustiveSweep, ExtensionFieldTraceFilter) {
  Field f9 = FieldSpec::extension(3, {1, 0, 1});
  SweepReport r2 = exhaustive_sweep(f9, 2);
  EXPECT_EQ(r2.total, 81u);
  EXPECT_EQ(r2.succeeded, 27u);       // c_1 in the prime subfield
  EXPECT_EQ(r2.trace_rejected, 54u);  // the other two thirds
  EXPECT_EQ(r2.failed, 0u);

  SweepReport r3 = exhaustive_sweep(f9, 3);
  EXPECT_EQ(r3.total, 729u);
  EXPECT_EQ(r3.succeeded, 243u);
  EXPECT_EQ(r3.trace_rejected, 486u);
  EXPECT_EQ(r3.failed, 0u);
  EXPECT_EQ(r3.histogram.at(RouteTag::P3_T1), 81u);
  EXPECT_EQ(r3.histogram.at(RouteTag::P3_T2), 81u);
  EXPECT_EQ(r3.histogram.at(RouteTag::P3_T0_TRIP), 81u);
}

TEST(ExhaustiveSweep, GuardAndPreconditions) {
  Field f = FieldSpec::prime(3);
  EXPECT_THROW(exhaustive_sweep(f, 13), SearchSpaceTooLarge);
  EXPECT_THROW(exhaustive_sweep(f, 0), PreconditionViolated);
}
