#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "dmfaw/controller.hpp"

using namespace dmfaw;

namespace {
PiController primed(double p, double tol, double ploss) {
  PiController c;
  c.p = p;
  c.tol = tol;
  c.prev_loss = ploss;
  return c;
}
}  // namespace

TEST(Controller, FirstCallOnlyRecords) {
  PiController c;
  c.p = 3.0;
  PiController d = controller_step(c, 7.5);
  EXPECT_EQ(d.p, 3.0);
  EXPECT_EQ(d.tol, c.tol);
  ASSERT_TRUE(d.prev_loss.has_value());
  EXPECT_EQ(*d.prev_loss, 7.5);
}

TEST(Controller, FixedPoint) {
  PiController d = controller_step(primed(2.0, 1e-3, 1e-3), 1e-3);
  EXPECT_NEAR(d.p, 2.0, 1e-12);
  EXPECT_NEAR(d.tol, 1e-3, 1e-12);
}

TEST(Controller, WorkedExample) {
  PiController d = controller_step(primed(2.0, 1e-3, 2e-3), 1e-3);
  EXPECT_NEAR(d.p, 2.0 * std::pow(2.0, 0.2), 1e-12);
  EXPECT_NEAR(d.p, 2.2974, 1e-4);
  EXPECT_NEAR(d.tol, 1.5e-3, 1e-12);
  EXPECT_EQ(*d.prev_loss, 1e-3);
}

TEST(Controller, ClampLow) {
  PiController d = controller_step(primed(2.0, 1e-3, 100.0), 1e6);
  EXPECT_EQ(d.p, d.p_min);
}

TEST(Controller, ClampHigh) {
  PiController d = controller_step(primed(9.0, 1.0, 1.0), 1e-3);
  EXPECT_EQ(d.p, d.p_max);
}

TEST(Controller, NegativeLossUsesMagnitude) {
  PiController a = controller_step(primed(2.0, 1e-3, -2e-3), -1e-3);
  EXPECT_NEAR(a.p, 2.0 * std::pow(2.0, 0.2), 1e-12);
  EXPECT_NEAR(a.tol, 1.5e-3, 1e-12);
}

TEST(Controller, NonFiniteLossRejected) {
  EXPECT_THROW(controller_step(primed(2.0, 1e-3, 1.0), std::numeric_limits<double>::quiet_NaN()),
               std::runtime_error);
}
