#include <gtest/gtest.h>

#include <cmath>

#include "gapkgf/error.hpp"
#include "gapkgf/spectral.hpp"
#include "test_support.hpp"

using namespace gapkgf;

namespace {

const Complex I(0.0, 1.0);

TEST(AxialWavenumber, PythagoreanTriple) {
  const SpectralPoint p{1.0, 0.6, 0.0};
  EXPECT_EQ(classify(p), WaveKind::Propagating);
  EXPECT_NEAR(axial_wavenumber(p).real(), 0.8, 1e-15);
  EXPECT_EQ(axial_wavenumber(p).imag(), 0.0);
}

TEST(AxialWavenumber, EvanescentBranchIsDecaying) {
  const SpectralPoint p{1.0, std::sqrt(2.0), 0.0};
  EXPECT_EQ(classify(p), WaveKind::Evanescent);
  EXPECT_EQ(axial_wavenumber(p).real(), 0.0);
  EXPECT_NEAR(axial_wavenumber(p).imag(), 1.0, 1e-15);
}

TEST(AxialWavenumber, LightLineIsExact) {
  const SpectralPoint p{0.5, 0.5, 0.0};
  EXPECT_EQ(classify(p), WaveKind::LightLine);
  EXPECT_EQ(axial_wavenumber(p), Complex(0.0, 0.0));
  EXPECT_EQ(to_string(WaveKind::LightLine), "lightline");
}

TEST(AxialWavenumber, BranchHoldsForNegativeFrequency) {
  test::Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    const SpectralPoint p = rng.point();
    const Complex qz = axial_wavenumber(p);
    EXPECT_GE(qz.real(), 0.0);
    EXPECT_GE(qz.imag(), 0.0);
    EXPECT_NEAR(std::norm(qz) * (classify(p) == WaveKind::Propagating ? 1 : -1), p.qz_squared(),
                1e-13 * p.omega * p.omega);
  }
}

TEST(Classify, Sectors) {
  EXPECT_EQ(classify({1.0, 0.5, 0.0}), WaveKind::Propagating);
  EXPECT_EQ(classify({1.0, 2.0, 0.0}), WaveKind::Evanescent);
  EXPECT_EQ(classify({1.0, 0.0, 2.0}), WaveKind::Evanescent);
  EXPECT_EQ(classify({-1.0, 0.5, 0.0}), WaveKind::Propagating);
}

TEST(Boost, RejectsSuperluminal) {
  EXPECT_THROW(Boost(1.0), Error);
  EXPECT_THROW(Boost(-1.2), Error);
  EXPECT_NO_THROW(Boost(0.99));
  EXPECT_NEAR(Boost(0.6).gamma(), 1.25, 1e-15);
}

TEST(BoostPoint, NormalDoppler) {
  const SpectralPoint p = boost_point({1.0, 0.5, 0.0}, Boost(0.6));
  EXPECT_NEAR(p.omega, 0.875, 1e-15);
  EXPECT_NEAR(p.qx, -0.125, 1e-15);
  EXPECT_NEAR(p.omega * p.omega - p.qx * p.qx, 0.75, 1e-15);
}

TEST(BoostPoint, AnomalousDoppler) {
  const SpectralPoint p = boost_point({1.0, 1.5, 0.0}, Boost(0.8));
  EXPECT_NEAR(p.omega, -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.qx, 7.0 / 6.0, 1e-15);
}

TEST(BoostPoint, IdentityLeavesPointUnchanged) {
  const SpectralPoint p{0.37, -1.2, 0.4};
  EXPECT_EQ(boost_point(p, Boost(0.0)), p);
  EXPECT_EQ(boost_point(p, Boost()), p);
}

TEST(BoostPoint, PreservesInvariantAndKind) {
  test::Rng rng(5);
  for (int k = 0; k < 10000; ++k) {
    const SpectralPoint p = rng.point();
    const Boost b(rng.uniform(-0.99, 0.99));
    const SpectralPoint m = boost_point(p, b);
    const double before = p.omega * p.omega - p.qx * p.qx;
    const double after = m.omega * m.omega - m.qx * m.qx;
    // Relative to the largest term, since the invariant itself may cancel.
    const double scale = std::max({m.omega * m.omega, m.qx * m.qx, p.omega * p.omega});
    EXPECT_LE(std::abs(after - before), 1e-12 * scale);
    EXPECT_EQ(m.qy, p.qy);
    EXPECT_EQ(classify(m), classify(p));
  }
}

TEST(BoostPoint, GroupComposition) {
  test::Rng rng(9);
  for (int k = 0; k < 2000; ++k) {
    const SpectralPoint p = rng.point();
    const double b1 = rng.uniform(-0.9, 0.9);
    const double b2 = rng.uniform(-0.9, 0.9);
    const SpectralPoint twice = boost_point(boost_point(p, Boost(b1)), Boost(b2));
    const SpectralPoint once = boost_point(p, Boost((b1 + b2) / (1 + b1 * b2)));
    const double scale = std::max(std::abs(once.omega), std::abs(once.qx)) + std::abs(p.omega);
    EXPECT_LE(std::abs(twice.omega - once.omega), 1e-12 * scale);
    EXPECT_LE(std::abs(twice.qx - once.qx), 1e-12 * scale);
  }
}

TEST(BoostPoint, InverseUndoesBoost) {
  const Boost b(0.7);
  const SpectralPoint p{1.3, 0.4, -0.2};
  const SpectralPoint back = boost_point(boost_point(p, b), b.inverse());
  EXPECT_NEAR(back.omega, p.omega, 1e-14);
  EXPECT_NEAR(back.qx, p.qx, 1e-14);
}

TEST(Delta0, PropagatingValue) {
  // Decided convention: delta0 = -i / (2 qz).
  const PolarizationMatrix d = delta0({1.0, 0.6, 0.0});
  EXPECT_TRUE(test::matrices_near(d, PolarizationMatrix::scalar(-I / 1.6), 1e-15));
}

TEST(Delta0, EvanescentValueIsReal) {
  const PolarizationMatrix d = delta0({1.0, std::sqrt(2.0), 0.0});
  EXPECT_TRUE(test::matrices_near(d, PolarizationMatrix::scalar(-0.5), 1e-15));
  EXPECT_EQ(d(0, 0).imag(), 0.0);
}

TEST(Delta0, LightLineThrows) {
  try {
    (void)delta0({0.5, 0.5, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LightLineSingularity);
  }
}

TEST(Delta0, DiagonalAndDependsOnlyOnQz) {
  test::Rng rng(13);
  for (int k = 0; k < 500; ++k) {
    const SpectralPoint p = rng.point();
    const PolarizationMatrix d = delta0(p);
    EXPECT_TRUE(d.is_diagonal());
    EXPECT_EQ(d(0, 0), d(1, 1));
    // Same qz^2 reached by reflecting q in the plane: identical value.
    EXPECT_TRUE(test::matrices_near(delta0({p.omega, p.qy, p.qx}), d, 1e-15));
    EXPECT_TRUE(test::matrices_near(delta0({-p.omega, -p.qx, p.qy}), d, 1e-15));
  }
}

}  // namespace
