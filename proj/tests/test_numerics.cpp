#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hyflow/error.hpp"
#include "hyflow/interpolation.hpp"
#include "hyflow/ode.hpp"
#include "hyflow/quadrature.hpp"
#include "hyflow/roots.hpp"

using namespace hyflow;

TEST(Quadrature, PolynomialIsExact) {
  const auto r = integrate_adaptive([](double x) { return 3 * x * x - 2 * x + 1; }, -1.0, 2.0);
  EXPECT_NEAR(r.value, 9.0 - 3.0 + 3.0, 1e-13);
}

TEST(Quadrature, EndpointSingularity) {
  // int_0^1 x^{-1/2} dx = 2
  const auto r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                                    {1e-10, 0.0, 4000});
  EXPECT_NEAR(r.value, 2.0, 1e-8);
}

TEST(Quadrature, Oscillatory) {
  const auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
}

TEST(Quadrature, ReversedAndEmptyIntervals) {
  EXPECT_NEAR(integrate_adaptive([](double x) { return x; }, 1.0, 0.0).value, -0.5, 1e-14);
  EXPECT_EQ(integrate_adaptive([](double x) { return x; }, 1.0, 1.0).value, 0.0);
}

TEST(Quadrature, BudgetExhaustionThrows) {
  EXPECT_THROW(integrate_adaptive([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0,
                                  {1e-15, 0.0, 5}),
               ConvergenceError);
}

TEST(Quadrature, SimpsonFourthOrder) {
  auto f = [](double x) { return std::exp(x); };
  const double exact = std::exp(1.0) - 1.0;
  const double e1 = std::abs(simpson(f, 0.0, 1.0, 8) - exact);
  const double e2 = std::abs(simpson(f, 0.0, 1.0, 16) - exact);
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.1);
  EXPECT_NEAR(simpson([](double x) { return x * x * x; }, 0.0, 2.0, 2), 4.0, 1e-14);
}

TEST(Roots, BrentAndBisection) {
  auto f = [](double x) { return x * x - 2.0; };
  EXPECT_NEAR(find_root(f, 0.0, 2.0), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(bisect(f, 0.0, 2.0), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(find_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0), 0.7390851332151607,
              1e-14);
}

TEST(Roots, NoBracketThrows) {
  EXPECT_THROW(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), Error);
}

TEST(Ode, ExponentialDecay) {
  auto rhs = [](double, const OdeState<1>& y) { return OdeState<1>{-y[0]}; };
  const auto out = integrate_to<1>(rhs, 0.0, {1.0}, {0.5, 1.0, 5.0});
  EXPECT_NEAR(out[0][0], std::exp(-0.5), 1e-11);
  EXPECT_NEAR(out[1][0], std::exp(-1.0), 1e-11);
  EXPECT_NEAR(out[2][0], std::exp(-5.0), 1e-11);
}

TEST(Ode, HarmonicOscillatorSystem) {
  auto rhs = [](double, const OdeState<2>& y) { return OdeState<2>{y[1], -y[0]}; };
  const auto out = integrate_to<2>(rhs, 0.0, {0.0, 1.0}, {10.0});
  EXPECT_NEAR(out[0][0], std::sin(10.0), 1e-10);
  EXPECT_NEAR(out[0][1], std::cos(10.0), 1e-10);
}

TEST(Ode, DescendingOutputsThrow) {
  auto rhs = [](double, const OdeState<1>&) { return OdeState<1>{1.0}; };
  EXPECT_THROW(integrate_to<1>(rhs, 1.0, {0.0}, {0.5}), DomainError);
}

TEST(Ode, EventStopsAtZeroCrossing) {
  // y' = -1 from y = 1 reaches zero at t = 1.
  auto rhs = [](double, const OdeState<1>&) { return OdeState<1>{-1.0}; };
  auto event = [](double, const OdeState<1>& y) { return y[0]; };
  const auto traj = integrate_until<1>(rhs, event, 0.0, {1.0}, 5.0, 0.1);
  EXPECT_TRUE(traj.event_reached);
  EXPECT_NEAR(traj.t.back(), 1.0, 1e-12);
  for (std::size_t i = 1; i < traj.t.size(); ++i) EXPECT_LE(traj.t[i] - traj.t[i - 1], 0.1 + 1e-15);
}

TEST(Interpolation, HermiteReproducesCubic) {
  auto f = [](double x) { return x * x * x - x; };
  auto df = [](double x) { return 3 * x * x - 1; };
  std::vector<double> xs{0.0, 0.7, 1.5, 3.0}, ys, ds;
  for (double x : xs) {
    ys.push_back(f(x));
    ds.push_back(df(x));
  }
  HermiteTable t(xs, ys, ds);
  for (double x : {0.1, 1.0, 2.2, 2.9}) {
    const auto v = t.eval(x);
    EXPECT_NEAR(v.value, f(x), 1e-13);
    EXPECT_NEAR(v.slope, df(x), 1e-12);
    EXPECT_NEAR(v.curvature, 6 * x, 1e-10);
  }
}

TEST(Interpolation, StencilDerivativeFourthOrder) {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 10; ++i) {
    xs.push_back(0.1 * i);
    ys.push_back(std::sin(0.1 * i));
  }
  EXPECT_NEAR(stencil_derivative(xs, ys, 5), std::cos(0.5), 5e-6);
  EXPECT_NEAR(stencil_derivative(xs, ys, 0), std::cos(0.0), 1e-4);
}

TEST(Interpolation, ClampsOutsideNodes) {
  HermiteTable t({0.0, 1.0, 2.0}, {0.0, 1.0, 4.0}, {0.0, 2.0, 4.0});
  EXPECT_EQ(t(-1.0), 0.0);
  EXPECT_EQ(t(3.0), 4.0);
}
