#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rslevy/complex_matrix.hpp"
#include "rslevy/random.hpp"

using namespace rslevy;

namespace {

double rel_diff(const ComplexMatrix2& a, const ComplexMatrix2& b) { return (a - b).norm_inf() / b.norm_inf(); }

ComplexMatrix2 random_matrix(RandomStream& rng, double scale) {
  ComplexMatrix2 a;
  for (auto& e : a.m) e = Complex(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
  return a * Complex(scale / a.norm_inf());
}

}  // namespace

TEST(MatrixExp, ZeroGivesIdentity) {
  EXPECT_EQ((matrix_exp(ComplexMatrix2{}) - ComplexMatrix2::identity()).norm_inf(), 0.0);
}

TEST(MatrixExp, Diagonal) {
  const ComplexMatrix2 e = matrix_exp(ComplexMatrix2::diagonal(1.0, -1.0));
  EXPECT_NEAR(e(0, 0).real(), std::exp(1.0), 1e-12);
  EXPECT_NEAR(e(1, 1).real(), std::exp(-1.0), 1e-12);
  EXPECT_NEAR(std::abs(e(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e(1, 0)), 0.0, 1e-15);
}

TEST(MatrixExp, NilpotentMatrix) {
  ComplexMatrix2 n;
  n(0, 1) = Complex(3.0, -2.0);
  const ComplexMatrix2 e = matrix_exp(n);
  EXPECT_NEAR(std::abs(e(0, 1) - Complex(3.0, -2.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e(0, 0) - 1.0), 0.0, 1e-14);
}

TEST(MatrixExp, MatchesEigenOracle) {
  RandomStream rng(21);
  for (int i = 0; i < 2000; ++i) {
    const ComplexMatrix2 a = random_matrix(rng, 50.0 * rng.uniform());
    ASSERT_LT(rel_diff(matrix_exp(a), oracle::expm_2x2(a)), 1e-10);
  }
}

TEST(MatrixExp, NearDefectiveMatrix) {
  ComplexMatrix2 a{{Complex(2.0), Complex(1.0), Complex(1e-14), Complex(2.0)}};
  EXPECT_LT(rel_diff(matrix_exp(a), oracle::expm_2x2(a)), 1e-12);
}

TEST(MatrixExp, SemigroupProperty) {
  RandomStream rng(22);
  for (int i = 0; i < 200; ++i) {
    const ComplexMatrix2 a = random_matrix(rng, 5.0);
    const double t = rng.uniform(), s = rng.uniform();
    const ComplexMatrix2 lhs = matrix_exp(a * Complex(t)) * matrix_exp(a * Complex(s));
    ASSERT_LT(rel_diff(lhs, matrix_exp(a * Complex(t + s))), 1e-10);
  }
}

TEST(MatrixExp, StochasticSemigroupForGenerators) {
  RandomStream rng(23);
  for (int i = 0; i < 1000; ++i) {
    const double a = 20 * rng.uniform(), b = 20 * rng.uniform(), t = 5 * rng.uniform();
    const ComplexMatrix2 p = matrix_exp(ComplexMatrix2{{Complex(-a), Complex(a), Complex(b), Complex(-b)}} * Complex(t));
    for (int r = 0; r < 2; ++r) {
      ASSERT_NEAR((p(r, 0) + p(r, 1)).real(), 1.0, 1e-12);
      ASSERT_GE(p(r, 0).real(), -1e-15);
      ASSERT_GE(p(r, 1).real(), -1e-15);
    }
  }
}

TEST(MatrixExp, RejectsNonFiniteInput) {
  ComplexMatrix2 a;
  a(1, 0) = Complex(NAN, 0.0);
  EXPECT_THROW(matrix_exp(a), std::invalid_argument);
}

TEST(ComplexMatrix, InverseAndProduct) {
  RandomStream rng(24);
  const ComplexMatrix2 a = random_matrix(rng, 3.0);
  EXPECT_LT((a * inverse(a) - ComplexMatrix2::identity()).norm_inf(), 1e-13);
  EXPECT_NEAR(std::abs((a * a).determinant() - a.determinant() * a.determinant()), 0.0, 1e-12);
}
