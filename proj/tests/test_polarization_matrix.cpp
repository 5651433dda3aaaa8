#include <gtest/gtest.h>

#include "gapkgf/error.hpp"
#include "gapkgf/polarization_matrix.hpp"
#include "test_support.hpp"

using namespace gapkgf;
using gapkgf::test::matrices_near;

namespace {

const Complex I(0.0, 1.0);

TEST(PolarizationMatrix, FactoriesAndAccess) {
  const PolarizationMatrix m(1.0, 2.0, 3.0, 4.0);
  EXPECT_EQ(m(0, 0), Complex(1.0));
  EXPECT_EQ(m(0, 1), Complex(2.0));
  EXPECT_EQ(m(1, 0), Complex(3.0));
  EXPECT_EQ(m(1, 1), Complex(4.0));
  EXPECT_EQ(PolarizationMatrix::identity(), PolarizationMatrix::diagonal(1.0, 1.0));
  EXPECT_EQ(PolarizationMatrix::scalar(2.0 * I), PolarizationMatrix::diagonal(2.0 * I, 2.0 * I));
  EXPECT_EQ(PolarizationMatrix::zero().max_abs(), 0.0);
}

TEST(PolarizationMatrix, ProductTraceDeterminant) {
  const PolarizationMatrix a(1.0, 2.0, 3.0, 4.0);
  const PolarizationMatrix b(0.0, I, -I, 2.0);
  const PolarizationMatrix ab = a * b;
  EXPECT_EQ(ab, PolarizationMatrix(-2.0 * I, I + 4.0, -4.0 * I, 3.0 * I + 8.0));
  EXPECT_EQ(a.trace(), Complex(5.0));
  EXPECT_EQ(a.determinant(), Complex(-2.0));
  EXPECT_EQ(b.determinant(), Complex(-1.0));
}

TEST(PolarizationMatrix, AdjointTransposeConjugate) {
  const PolarizationMatrix m(1.0 + I, 2.0, 3.0 * I, 4.0 - I);
  EXPECT_EQ(m.transpose(), PolarizationMatrix(1.0 + I, 3.0 * I, 2.0, 4.0 - I));
  EXPECT_EQ(m.conjugate(), PolarizationMatrix(1.0 - I, 2.0, -3.0 * I, 4.0 + I));
  EXPECT_EQ(m.adjoint(), m.transpose().conjugate());
  EXPECT_DOUBLE_EQ(m.frobenius_norm(), std::sqrt(2.0 + 4.0 + 9.0 + 17.0));
}

TEST(PolarizationMatrix, InverseRoundTrip) {
  test::Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    const PolarizationMatrix m = rng.matrix();
    if (m.condition_number() > 1e8) continue;
    EXPECT_TRUE(matrices_near(m * m.inverse(), PolarizationMatrix::identity(), 1e-12));
    EXPECT_TRUE(matrices_near(m.inverse() * m, PolarizationMatrix::identity(), 1e-12));
  }
}

TEST(PolarizationMatrix, SingularInverseThrows) {
  const PolarizationMatrix m(1.0, 2.0, 2.0, 4.0);
  try {
    (void)m.inverse();
    FAIL() << "expected SingularMatrix";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMatrix);
  }
  EXPECT_THROW((void)PolarizationMatrix::zero().inverse(), Error);
}

TEST(PolarizationMatrix, DiagonalityUsesRelativeTolerance) {
  EXPECT_TRUE(PolarizationMatrix::diagonal(1.0, 2.0).is_diagonal());
  EXPECT_TRUE(PolarizationMatrix(1.0, 1e-15, 0.0, 1.0).is_diagonal());
  EXPECT_FALSE(PolarizationMatrix(1.0, 1e-13, 0.0, 1.0).is_diagonal());
  EXPECT_TRUE(PolarizationMatrix(1.0, 1e-13, 0.0, 1.0).is_diagonal(1e-12));
  // Scale-free: the same shape at 1e-20 magnitude is judged identically.
  EXPECT_FALSE(PolarizationMatrix(1e-20, 1e-33, 0.0, 1e-20).is_diagonal());
  EXPECT_TRUE(PolarizationMatrix::zero().is_diagonal());
}

TEST(PolarizationMatrix, HermitianEigenvalues) {
  const PolarizationMatrix h(2.0, 1.0 - I, 1.0 + I, 3.0);
  const auto ev = h.hermitian_eigenvalues();
  EXPECT_NEAR(ev[0], 1.0, 1e-14);
  EXPECT_NEAR(ev[1], 4.0, 1e-14);
  EXPECT_EQ(PolarizationMatrix(1.0, I, 0.0, 1.0).hermitian_part(), PolarizationMatrix(1.0, 0.5 * I, -0.5 * I, 1.0));
}

TEST(PolarizationMatrix, RelativeDifference) {
  const PolarizationMatrix a = PolarizationMatrix::identity();
  EXPECT_EQ(relative_difference(a, a), 0.0);
  EXPECT_EQ(relative_difference(PolarizationMatrix::zero(), PolarizationMatrix::zero()), 0.0);
  EXPECT_NEAR(relative_difference(a, a * 1.001), 0.001 / 1.001, 1e-12);
}

TEST(PolarizationMatrix, ScalarAlgebraIsDistributive) {
  test::Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const auto a = rng.matrix(), b = rng.matrix(), c = rng.matrix();
    const Complex s = rng.complex();
    EXPECT_TRUE(matrices_near(a * (b + c), a * b + a * c, 1e-14));
    EXPECT_TRUE(matrices_near((a * b) * c, a * (b * c), 1e-14));
    EXPECT_TRUE(matrices_near((a * s).adjoint(), a.adjoint() * std::conj(s), 1e-15));
    EXPECT_TRUE(matrices_near((a * b).adjoint(), b.adjoint() * a.adjoint(), 1e-14));
  }
}

}  // namespace
