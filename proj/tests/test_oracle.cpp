#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hyflow/oracle.hpp"
#include "hyflow/problem1.hpp"
#include "oracles.hpp"

using namespace hyflow;
namespace sr = oracles::sqrt_ramp;

namespace {
const Geometry& sqrt_geometry() {
  static const Geometry g(RampProfile::power(1.0, 0.5));
  return g;
}
// Cell whose right edge is nearest to x.
const AccretionState& cell_at(const AccretionResult& r, double x) {
  const AccretionState* best = &r.cells.front();
  for (const auto& c : r.cells)
    if (std::abs(c.x - x) < std::abs(best->x - x)) best = &c;
  return *best;
}
}  // namespace

TEST(AccreteWall, WedgePressure) {
  const double th = std::numbers::pi / 6;
  const auto r = accrete_wall(Geometry(RampProfile::wedge(std::tan(th))), 1.0, 1e-3);
  for (std::size_t i = 1; i < r.cells.size(); ++i)
    EXPECT_NEAR(r.cells[i].w_p, 0.25, 0.0025);
  EXPECT_NEAR(r.back().x, 1.0, 1e-12);
  EXPECT_NEAR(r.back().M, std::tan(th), 1e-12);
}

TEST(AccreteWall, SqrtAtTwo) {
  const auto r = accrete_wall(sqrt_geometry(), 2.0, 1e-3);
  EXPECT_NEAR(r.back().w_p, 1.0 / 27.0, 0.01 / 27.0);
  EXPECT_NEAR(r.back().M, std::sqrt(2.0), 1e-3 * std::sqrt(2.0));
  // Tangency of the layer momentum.
  EXPECT_NEAR(r.back().Py / r.back().Px, sr::db(2.0), 1e-3);
  EXPECT_NEAR(r.back().Px, 2.0 * std::sqrt(2.0) / 3.0, 1e-2);
}

TEST(AccreteWall, FlatWall) {
  const auto r = accrete_wall(Geometry(RampProfile::wedge(0.0)), 1.0, 1e-2);
  for (const auto& c : r.cells) {
    EXPECT_EQ(c.M, 0.0);
    EXPECT_EQ(c.w_p, 0.0);
  }
}

TEST(AccreteWall, ExactMassConservation) {
  // Captured mass equals the free stream crossing the wall rise: M(x) = b(x).
  const auto r = accrete_wall(sqrt_geometry(), 3.0, 1e-2);
  for (const auto& c : r.cells) EXPECT_NEAR(c.M, std::sqrt(c.x), 1e-13);
}

TEST(AccreteWall, FirstOrderConvergence) {
  std::vector<double> dxs{4e-3, 2e-3, 1e-3}, errs;
  for (double dx : dxs) errs.push_back(std::abs(accrete_wall(sqrt_geometry(), 2.0, dx).back().w_p - 1.0 / 27.0));
  const double order = measured_order(dxs, errs);
  EXPECT_GE(order, 0.9);
  EXPECT_LE(order, 1.1);
}

TEST(AccreteFreeLayer, DeadGasHalfPressure) {
  const auto r = accrete_free_layer(sqrt_geometry(), DeadGasSpec::with_pressure(2.0, 0.5), 1e-4, 6.0);
  EXPECT_LE(sup_deviation(r, sr::layer_phalf, 2.0, 6.0), 5e-3);
  EXPECT_FALSE(r.blow_up_x.has_value());
}

TEST(AccreteFreeLayer, RollUpDetected) {
  const auto r = accrete_free_layer(sqrt_geometry(), DeadGasSpec::with_pressure(2.0, 2.0), 1e-4, 6.0);
  ASSERT_TRUE(r.blow_up_x.has_value());
  EXPECT_NEAR(*r.blow_up_x, sr::terminal_x_p2(), 1e-2);
}

TEST(AccreteFreeLayer, JetLinearCase) {
  const auto r = accrete_free_layer(sqrt_geometry(), JetSpec{2.0, 1.0, 1.0, 0.5, 1.0}, 1e-3, 5.0);
  EXPECT_NEAR(r.height(4.0), 2.0147186, 5e-3);
}

TEST(AccreteFreeLayer, ConservativeBookkeeping) {
  // Pressure-free dead gas: layer mass equals everything captured from above, b* + Y.
  const auto r = accrete_free_layer(sqrt_geometry(), DeadGasSpec::with_pressure(2.0, 0.0), 1e-3, 5.0);
  for (const auto& c : r.cells)
    if (c.x > 2.0) EXPECT_NEAR(c.M, c.y, 1e-12);
}

TEST(AccreteFreeLayer, FirstOrderShapeConvergence) {
  std::vector<double> dxs{4e-3, 2e-3, 1e-3}, errs;
  for (double dx : dxs) {
    const auto r = accrete_free_layer(sqrt_geometry(), DeadGasSpec::with_pressure(2.0, 0.5), dx, 6.0);
    errs.push_back(sup_deviation(r, sr::layer_phalf, 2.0, 6.0));
  }
  const double order = measured_order(dxs, errs);
  EXPECT_GE(order, 0.9);
  EXPECT_LE(order, 1.1);
}

TEST(MeasuredOrder, ExactPowerLaw) {
  EXPECT_NEAR(measured_order({1.0, 0.5, 0.25}, {3.0, 0.75, 0.1875}), 2.0, 1e-14);
}

TEST(AccretionResult, HeightInterpolates) {
  const auto r = accrete_wall(Geometry(RampProfile::wedge(1.0)), 1.0, 0.1);
  EXPECT_NEAR(r.height(0.55), 0.55, 1e-12);
  EXPECT_NEAR(r.height(5.0), 1.0, 1e-12);
  EXPECT_NEAR(cell_at(r, 0.5).y, 0.5, 1e-12);
}
