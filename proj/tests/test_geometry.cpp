#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hyflow/error.hpp"
#include "hyflow/geometry.hpp"
#include "oracles.hpp"

using namespace hyflow;
namespace sr = oracles::sqrt_ramp;

namespace {
const double kDeg = std::numbers::pi / 180.0;
}

TEST(EvalProfile, SqrtAtTwo) {
  const auto v = eval_profile(RampProfile::power(1.0, 0.5), 2.0);
  EXPECT_NEAR(v.b, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(v.db, 1.0 / (2.0 * std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(v.d2b, -1.0 / (4.0 * std::pow(2.0, 1.5)), 1e-15);
}

TEST(EvalProfile, FlatAndLinearWedges) {
  const auto flat = eval_profile(RampProfile::wedge(0.0), 3.7);
  EXPECT_EQ(flat.b, 0.0);
  EXPECT_EQ(flat.db, 0.0);
  EXPECT_EQ(flat.d2b, 0.0);
  const double t = std::tan(30 * kDeg);
  const auto w = eval_profile(RampProfile::wedge(t), 1.0);
  EXPECT_NEAR(w.b, 0.57735, 1e-5);
  EXPECT_NEAR(w.db, 0.57735, 1e-5);
  EXPECT_EQ(w.d2b, 0.0);
}

TEST(EvalProfile, PolynomialDerivatives) {
  const auto v = eval_profile(RampProfile::polynomial({0.0, 1.0, 0.5}), 2.0);
  EXPECT_DOUBLE_EQ(v.b, 4.0);
  EXPECT_DOUBLE_EQ(v.db, 3.0);
  EXPECT_DOUBLE_EQ(v.d2b, 1.0);
}

TEST(EvalProfile, DomainErrors) {
  EXPECT_THROW(eval_profile(RampProfile::wedge(1.0, 2.0), 2.5), DomainError);
  EXPECT_THROW(eval_profile(RampProfile::wedge(1.0), -0.1), DomainError);
  EXPECT_THROW(RampProfile::tabulated({0.0, 1.0}, {0.0, 1.0}), DomainError);
  EXPECT_THROW(RampProfile::tabulated({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), DomainError);
  EXPECT_THROW(RampProfile::power(1.0, 1.5), DomainError);
  EXPECT_THROW(RampProfile::polynomial({1.0, 1.0}), DomainError);
}

TEST(ArcIntegral, SqrtAtTwoIsOne) {
  EXPECT_NEAR(arc_integral_H(RampProfile::power(1.0, 0.5), 2.0), 1.0, 1e-14);
  // Independent check: quadrature of b'/sqrt(1+b'^2) after x = s^2 (smooth integrand).
  const long double q = oracles::simpson_ld(
      [](long double s) {
        const long double x = s * s, d = 0.5L / std::sqrt(x);
        return 2.0L * s * d / std::sqrt(1.0L + d * d);
      },
      1e-30L, std::sqrt(2.0L), 2000);
  EXPECT_NEAR(static_cast<double>(q), 1.0, 1e-12);
}

TEST(ArcIntegral, WedgeIsXSinTheta) {
  for (double deg : {5.0, 20.0, 45.0, 70.0}) {
    const double th = deg * kDeg;
    const RampProfile p = RampProfile::wedge(std::tan(th));
    for (double x : {0.01, 1.0, 7.5}) EXPECT_NEAR(arc_integral_H(p, x), x * std::sin(th), 1e-12);
  }
}

TEST(ArcIntegral, ZeroAtOrigin) {
  EXPECT_EQ(arc_integral_H(RampProfile::power(1.0, 0.5), 0.0), 0.0);
  EXPECT_EQ(arc_integral_H(RampProfile::polynomial({0.0, 0.2, 0.1}), 0.0), 0.0);
}

TEST(ArcIntegral, QuadratureMatchesClosedFormOnLogGrid) {
  // A polynomial equal to the wedge forces the numeric path.
  const double slope = 0.7;
  const RampProfile numeric = RampProfile::polynomial({0.0, slope});
  const RampProfile power = RampProfile::power(1.0, 0.5);
  const double s = slope / std::sqrt(1 + slope * slope);
  for (double x = 1e-3; x < 1e3; x *= 3.0) {
    EXPECT_NEAR(arc_integral_H(numeric, x, 1e-10), x * s, 1e-10 * std::max(1.0, x));
    EXPECT_NEAR(arc_integral_H(power, x), std::sqrt(x + 0.25) - 0.5, 1e-10);
  }
}

TEST(ArcIntegral, MonotoneAndFlatSegments) {
  const RampProfile p = RampProfile::polynomial({0.0, 0.3, 0.2, 0.05});
  double prev = 0.0;
  for (double x = 0.1; x <= 5.0; x += 0.1) {
    const double h = arc_integral_H(p, x);
    EXPECT_GT(h, prev);
    prev = h;
  }
  const RampProfile flat = RampProfile::wedge(0.0);
  EXPECT_EQ(arc_integral_H(flat, 1.0), arc_integral_H(flat, 2.0));
}

TEST(Admissibility, Examples) {
  EXPECT_TRUE(check_admissibility(RampProfile::power(1.0, 0.5), 0.0, 10.0, 100).admissible);
  EXPECT_TRUE(check_admissibility(RampProfile::wedge(1.0), 0.0, 10.0, 10).admissible);
  const auto flat = check_admissibility(RampProfile::wedge(0.0), 0.0, 10.0, 10);
  EXPECT_FALSE(flat.admissible);
  ASSERT_TRUE(flat.first_failure.has_value());
  EXPECT_EQ(*flat.first_failure, 0.0);
}

TEST(Admissibility, DetectsStrongConcavity) {
  // b = x - 0.45 x^2 turns downward; somewhere the curvature term wins.
  const auto r = check_admissibility(RampProfile::polynomial({0.0, 1.0, -0.45}), 0.0, 1.0, 200);
  EXPECT_FALSE(r.admissible);
  ASSERT_TRUE(r.first_failure.has_value());
  const double x = *r.first_failure;
  // Oracle: margin b''H + b'^2 sqrt(1+b'^2) with H by quadrature.
  auto margin = [](double xx) {
    const long double H = oracles::simpson_ld(
        [](long double t) {
          const long double d = 1.0L - 0.9L * t;
          return d / std::sqrt(1.0L + d * d);
        },
        0.0L, xx, 2000);
    const double d = 1.0 - 0.9 * xx;
    return -0.9 * static_cast<double>(H) + d * d * std::sqrt(1 + d * d);
  };
  EXPECT_LE(margin(x), 1e-9);
  EXPECT_GT(margin(x - 1.0 / 199.0), 0.0);
}

TEST(Geometry, NormalIsUnitAndInward) {
  const Geometry g(RampProfile::power(1.0, 0.5));
  for (double x : {0.01, 0.5, 2.0, 9.0}) {
    const auto n = g.normal(x);
    EXPECT_NEAR(n[0] * n[0] + n[1] * n[1], 1.0, 1e-14);
    EXPECT_NEAR(n[0], -sr::db(x) / std::sqrt(1 + sr::db(x) * sr::db(x)), 1e-15);
    EXPECT_GT(n[1], 0.0);
  }
}

TEST(Tabulated, FidelityAgainstSqrt) {
  std::vector<double> xs, bs;
  for (int i = 0; i < 200; ++i) {
    const double x = 0.01 * std::pow(1000.0, i / 199.0);
    xs.push_back(x);
    bs.push_back(std::sqrt(x));
  }
  const RampProfile t = RampProfile::tabulated(xs, bs);
  for (int i = 0; i <= 1000; ++i) {
    const double x = 0.01 + (10.0 - 0.01) * i / 1000.0;
    EXPECT_NEAR(eval_profile(t, x).b, std::sqrt(x), 1e-6) << x;
    EXPECT_GE(eval_profile(t, x).db, 0.0);
  }
}

TEST(Tabulated, MonotoneInterpolantOnStepLikeData) {
  const RampProfile t = RampProfile::tabulated({0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 0.0, 1.0, 1.0, 1.0});
  for (double x = 0.0; x <= 4.0; x += 0.01) EXPECT_GE(eval_profile(t, x).db, -1e-15);
}
