#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "gapkgf/error.hpp"
#include "gapkgf/mixing.hpp"
#include "gapkgf/occupation.hpp"
#include "test_support.hpp"

using namespace gapkgf;

namespace {

// 50-digit reference values (mpmath): 1/(e - 1) and coth(1).
constexpr long double kBoseEinsteinAtOne = 0.58197670686932642438500200510901155854686930107539L;
constexpr long double kCothOne = 1.3130352854993313036361612469308478329120139412405L;

// Independent oracle: N = sum_k exp(-k x), summed in long double.
long double bose_series(long double x) {
  long double sum = 0, term = 1;
  const long double r = std::exp(-x);
  for (int k = 1; k < 4000; ++k) {
    term *= r;
    sum += term;
    if (term < 1e-22L * sum) break;
  }
  return sum;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

std::shared_ptr<const OccupationTable> small_table() {
  std::istringstream in(
      "0.5,0.0,1.0,2.0\n0.5,2.0,3.0,4.0\n"
      "1.5,0.0,5.0,6.0\n1.5,2.0,7.0,8.0\n");
  return std::make_shared<const OccupationTable>(parse_occupation_table(in));
}

TEST(BoseEinstein, LogTwoGivesOne) { EXPECT_NEAR(bose_einstein(0.7 * std::log(2.0), 0.7), 1.0, 1e-15); }

TEST(BoseEinstein, ZeroTemperature) {
  EXPECT_EQ(bose_einstein(0.1, 0.0), 0.0);
  EXPECT_EQ(bose_einstein(100.0, 0.0), 0.0);
}

TEST(BoseEinstein, HighPrecisionValue) {
  EXPECT_NEAR(bose_einstein(1.0, 1.0), double(kBoseEinsteinAtOne), 2e-16);
  EXPECT_NEAR(bose_einstein(2.5, 2.5), double(kBoseEinsteinAtOne), 2e-16);
}

TEST(BoseEinstein, MatchesSeriesOracle) {
  test::Rng rng(47);
  for (int k = 0; k < 500; ++k) {
    const double x = rng.uniform(0.05, 40.0);
    const double n = bose_einstein(x, 1.0);
    EXPECT_LE(std::abs(n - double(bose_series(x))), 1e-14 * n) << x;
  }
}

TEST(BoseEinstein, RejectsBadArguments) {
  EXPECT_THROW((void)bose_einstein(0.0, 1.0), Error);
  EXPECT_THROW((void)bose_einstein(1.0, -1.0), Error);
}

TEST(ScriptNRest, VacuumIsSignTimesIdentity) {
  EXPECT_EQ(script_N_rest(occupation::Vacuum{}, {0.7, 0.2, 0.0}), PolarizationMatrix::identity());
  EXPECT_EQ(script_N_rest(occupation::Vacuum{}, {-0.7, 0.2, 0.0}), -PolarizationMatrix::identity());
}

TEST(ScriptNRest, ThermalIsCoth) {
  const PolarizationMatrix n = script_N_rest(occupation::Thermal{0.5}, {1.0, 0.3, 0.0});
  EXPECT_TRUE(test::matrices_near(n, PolarizationMatrix::scalar(double(kCothOne)), 2e-16));
  test::Rng rng(53);
  for (int k = 0; k < 200; ++k) {
    const double w = rng.uniform(0.01, 10.0), t = rng.uniform(0.01, 5.0);
    const double expected = 1.0 / std::tanh(w / (2 * t));
    EXPECT_NEAR(script_N_rest(occupation::Thermal{t}, {w, 0.0, 0.0})(0, 0).real(), expected, 1e-13 * expected);
  }
}

TEST(ScriptNRest, ZeroFrequencyRejected) {
  EXPECT_EQ(code_of([] { (void)script_N_rest(occupation::Thermal{1.0}, {0.0, 0.5, 0.0}); }), ErrorCode::ZeroFrequency);
}

TEST(ScriptNRest, Oddness) {
  test::Rng rng(59);
  const std::vector<OccupationSpectrum> occs{occupation::Vacuum{}, occupation::Thermal{0.3}, occupation::Thermal{4.0},
                                             occupation::Custom{small_table()}};
  for (const auto& occ : occs) {
    for (int k = 0; k < 500; ++k) {
      const double w = rng.uniform(0.5, 1.5);
      const SpectralPoint p{w, rng.uniform(0.0, 1.4), rng.uniform(0.0, 1.4)};
      const SpectralPoint m{-w, p.qx, p.qy};
      EXPECT_LE(relative_difference(script_N_rest(occ, m), -script_N_rest(occ, p)), 1e-14);
    }
  }
}

TEST(ScriptNRest, ThermalMonotoneAndAtLeastOne) {
  const OccupationSpectrum occ = occupation::Thermal{0.8};
  double previous = std::numeric_limits<double>::infinity();
  for (double w = 0.01; w < 20; w *= 1.3) {
    const PolarizationMatrix n = script_N_rest(occ, {w, 0.0, 0.0});
    EXPECT_GE(n(0, 0).real(), 1.0);
    EXPECT_EQ(n(0, 0), n(1, 1));
    EXPECT_LT(n(0, 0).real(), previous);
    previous = n(0, 0).real();
  }
}

TEST(ScriptNMoving, RestLimit) {
  test::Rng rng(61);
  for (int k = 0; k < 200; ++k) {
    const SpectralPoint p = rng.point();
    EXPECT_EQ(script_N_moving_lab(occupation::Thermal{0.4}, p, Boost(0.0)), script_N_rest(occupation::Thermal{0.4}, p));
  }
}

TEST(ScriptNMoving, AnomalousDopplerFlipsVacuumSign) {
  const SpectralPoint p{1.0, 1.5, 0.0};
  EXPECT_LT(boost_point(p, Boost(0.8)).omega, 0.0);
  const PolarizationMatrix n = script_N_moving_lab(occupation::Vacuum{}, p, Boost(0.8));
  EXPECT_TRUE(test::matrices_near(n, -PolarizationMatrix::identity(), 1e-14));
  // Normal-Doppler point: identity.
  EXPECT_TRUE(test::matrices_near(script_N_moving_lab(occupation::Vacuum{}, {1.0, 0.0, 0.0}, Boost(0.8)),
                                  PolarizationMatrix::identity(), 1e-14));
}

TEST(ScriptNMoving, TraceInvariance) {
  test::Rng rng(67);
  int checked = 0;
  for (int k = 0; k < 10000; ++k) {
    const SpectralPoint p = rng.point(1e-2);
    const Boost b(rng.uniform(-0.99, 0.99));
    const double t = rng.uniform(0.01, 5.0);
    const SpectralPoint moved = boost_point(p, b);
    if (std::abs(moved.omega) < 1e-6) continue;
    PolarizationMatrix n;
    try {
      n = script_N_moving_lab(occupation::Thermal{t}, p, b);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::SingularTransform);
      continue;
    }
    const double expected = 2.0 / std::tanh(std::abs(moved.omega) / (2 * t)) * (moved.omega > 0 ? 1 : -1);
    EXPECT_LE(std::abs(n.trace() - expected), 1e-12 * std::abs(n.trace()));
    ++checked;
  }
  EXPECT_GT(checked, 9000);
}

TEST(ScriptNMoving, OddUnderFullReversal) {
  // Omega -> -Omega (both omega and q) maps Omega' -> -Omega'.
  test::Rng rng(71);
  for (int k = 0; k < 1000; ++k) {
    const SpectralPoint p = rng.point(1e-2);
    const Boost b(rng.uniform(-0.9, 0.9));
    try {
      const PolarizationMatrix a = script_N_moving_lab(occupation::Thermal{0.7}, p, b);
      const PolarizationMatrix m = script_N_moving_lab(occupation::Thermal{0.7}, {-p.omega, -p.qx, -p.qy}, b);
      EXPECT_LE(std::abs(a.trace() + m.trace()), 1e-12 * std::abs(a.trace()));
    } catch (const Error&) {
    }
  }
}

TEST(ScriptNMoving, ZeroFrequencies) {
  EXPECT_EQ(code_of([] { (void)script_N_moving_lab(occupation::Vacuum{}, {0.0, 0.5, 0.0}, Boost(0.5)); }),
            ErrorCode::ZeroFrequency);
  EXPECT_EQ(code_of([] { (void)script_N_moving_lab(occupation::Vacuum{}, {0.5, 1.0, 0.0}, Boost(0.5)); }),
            ErrorCode::ZeroFrequency);
}

TEST(OccupationTable, BilinearInterpolation) {
  const auto t = small_table();
  EXPECT_EQ(t->at(0.5, 0.0), (std::array<double, 2>{1.0, 2.0}));
  EXPECT_EQ(t->at(1.5, 2.0), (std::array<double, 2>{7.0, 8.0}));
  const auto mid = t->at(1.0, 1.0);
  EXPECT_NEAR(mid[0], 4.0, 1e-15);
  EXPECT_NEAR(mid[1], 5.0, 1e-15);
  const auto edge = t->at(1.0, 0.0);
  EXPECT_NEAR(edge[0], 3.0, 1e-15);
}

TEST(OccupationTable, CustomOccupationMatrix) {
  const OccupationSpectrum occ = occupation::Custom{small_table()};
  EXPECT_FALSE(is_isotropic(occ));
  const PolarizationMatrix n = script_N_rest(occ, {1.0, 1.0, 0.0});
  EXPECT_TRUE(test::matrices_near(n, PolarizationMatrix::diagonal(9.0, 11.0), 1e-15));
}

TEST(OccupationTable, Errors) {
  const auto t = small_table();
  EXPECT_EQ(code_of([&] { (void)t->at(2.0, 1.0); }), ErrorCode::OutOfTableRange);
  EXPECT_EQ(code_of([&] { (void)t->at(1.0, 2.5); }), ErrorCode::OutOfTableRange);
  std::istringstream negative("0.5,0.0,-1.0,2.0\n");
  EXPECT_EQ(code_of([&] { (void)parse_occupation_table(negative); }), ErrorCode::NegativeOccupation);
  std::istringstream ragged("0.5,0.0,1.0,2.0\n0.5,1.0,1.0,2.0\n1.0,0.0,1.0,2.0\n");
  EXPECT_EQ(code_of([&] { (void)parse_occupation_table(ragged); }), ErrorCode::ParseError);
  std::istringstream zero_w("0.0,0.0,1.0,2.0\n");
  EXPECT_EQ(code_of([&] { (void)parse_occupation_table(zero_w); }), ErrorCode::ValidationError);
  std::istringstream empty("");
  EXPECT_EQ(code_of([&] { (void)parse_occupation_table(empty); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { (void)load_occupation_table("/nonexistent/occ.csv"); }), ErrorCode::IoError);
}

}  // namespace
