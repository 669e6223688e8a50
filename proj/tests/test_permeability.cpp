// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "biot/permeability.hpp"

namespace biot::permeability {
namespace {

const KozenyCarman kKc{1.0, 0.5, -0.75, 0.75};
const NetworkInspired kNet{1.0, 0.4, 0.2, 0.01};
const QuadraticClamped kQuad{1.0, 0.4, 0.01, 0.75};

TEST(Permeability, KozenyCarmanValues) {
  // rho(0) = rho0 = 0.5 -> 0.125 / 0.25
  EXPECT_NEAR(eval(kKc, 0.0), 0.5, 1e-15);
  const Bounds b = bounds(kKc);
  // rho(-0.75) = 0.125, rho(0.75) = 0.875
  EXPECT_NEAR(b.lower, std::pow(0.125, 3) / std::pow(0.875, 2), 1e-15);
  EXPECT_NEAR(b.upper, std::pow(0.875, 3) / std::pow(0.125, 2), 1e-12);
  EXPECT_DOUBLE_EQ(eval(kKc, -5.0), b.lower);
  EXPECT_DOUBLE_EQ(eval(kKc, 5.0), b.upper);
}

TEST(Permeability, NetworkValues) {
  EXPECT_NEAR(eval(kNet, 0.0), 1.0 + 0.01, 1e-15);
  // Channels close once rho < rho_hat.
  EXPECT_NEAR(eval(kNet, -10.0), 0.01, 1e-15);
  EXPECT_NEAR(lipschitz_constant(kNet), 4.0, 1e-15);
}

TEST(Permeability, QuadraticValues) {
  EXPECT_NEAR(eval(kQuad, 0.0), 0.16, 1e-15);
  EXPECT_NEAR(eval(kQuad, -10.0), 1e-4, 1e-15);
  EXPECT_NEAR(eval(kQuad, 10.0), 0.5625, 1e-15);
  EXPECT_NEAR(lipschitz_constant(kQuad), 2 * 0.75 * 0.6, 1e-15);
}

TEST(Permeability, ConstantIsFlat) {
  const Constant c{0.5};
  EXPECT_EQ(eval(c, 123.0), 0.5);
  EXPECT_EQ(derivative(c, 1.0), 0.0);
  EXPECT_EQ(lipschitz_constant(c), 0.0);
  EXPECT_TRUE(is_constant(c));
  EXPECT_FALSE(is_constant(kKc));
}

TEST(Permeability, KozenyCarmanLipschitzMatchesSampling) {
  // The derivative is increasing in s, so the supremum sits at the upper clamp.
  const double L = lipschitz_constant(kKc);
  EXPECT_NEAR(L, 0.5 * 0.875 * 0.875 * 2.125 / std::pow(0.125, 3), 1e-9);
  double worst = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double s = -1.0 + 2.0 * i / n;
    const double t = s + 2.0 / n;
    worst = std::max(worst, std::abs(eval(kKc, t) - eval(kKc, s)) / (t - s));
  }
  EXPECT_LE(worst, L * (1 + 1e-12));
  EXPECT_GE(worst, 0.99 * L);
}

TEST(Permeability, SampledContract) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (const Model& m : {Model(kKc), Model(kNet), Model(kQuad)}) {
    const Bounds b = bounds(m);
    const double L = lipschitz_constant(m);
    ASSERT_GT(b.lower, 0.0);
    for (int i = 0; i < 10000; ++i) {
      const double s = dist(rng), t = dist(rng);
      const double ks = eval(m, s), kt = eval(m, t);
      ASSERT_GE(ks, b.lower * (1 - 1e-14)) << kind_name(m);
      ASSERT_LE(ks, b.upper * (1 + 1e-14)) << kind_name(m);
      ASSERT_LE(std::abs(ks - kt), L * std::abs(s - t) * (1 + 1e-12) + 1e-15) << kind_name(m);
    }
  }
}

TEST(Permeability, ContinuousAtBreakpoints) {
  const double e = 1e-13;
  // A jump would exceed the Lipschitz bound across the 2e-13 gap.
  const double tol = lipschitz_constant(kKc) * 2 * e * (1 + 1e-6) + 1e-14;
  for (double s : {kKc.c_s, kKc.C_s}) EXPECT_NEAR(eval(kKc, s - e), eval(kKc, s + e), tol);
  // rho(s) = rho0 + (1 - rho0) s hits the clamps at these dilatations.
  for (double rho : {kQuad.c_s, kQuad.C_s}) {
    const double s = (rho - kQuad.rho0) / (1 - kQuad.rho0);
    EXPECT_NEAR(eval(kQuad, s - e), eval(kQuad, s + e), 1e-12);
  }
  const double s_hat = -std::log((1 - kNet.rho_hat) / (1 - kNet.rho0));
  EXPECT_NEAR(eval(kNet, s_hat - e), eval(kNet, s_hat + e), 1e-12);
}

TEST(Permeability, DerivativeMatchesFiniteDifferences) {
  const double h = 1e-6;
  for (const Model& m : {Model(kKc), Model(kNet), Model(kQuad)}) {
    for (double s : {-0.6, -0.2, 0.0, 0.3, 0.7}) {
      const double fd = (eval(m, s + h) - eval(m, s - h)) / (2 * h);
      EXPECT_NEAR(derivative(m, s), fd, 1e-6 * std::max(1.0, std::abs(fd))) << kind_name(m);
    }
  }
  EXPECT_EQ(derivative(kKc, 2.0), 0.0);
  EXPECT_EQ(derivative(kQuad, -5.0), 0.0);
}

TEST(Permeability, Validation) {
  EXPECT_THROW(validate(Constant{0.0}), std::invalid_argument);
  EXPECT_THROW(validate(KozenyCarman{1.0, 0.5, 0.8, 0.75}), std::invalid_argument);
  // rho0 / (rho0 - 1) = -1 for rho0 = 0.5
  EXPECT_THROW(validate(KozenyCarman{1.0, 0.5, -1.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(validate(NetworkInspired{1.0, 0.4, 0.5, 0.01}), std::invalid_argument);
  EXPECT_THROW(validate(NetworkInspired{1.0, 0.4, 0.2, 0.0}), std::invalid_argument);
  EXPECT_THROW(validate(QuadraticClamped{1.0, 0.4, 0.0, 0.75}), std::invalid_argument);
  EXPECT_NO_THROW(validate(kKc));
  EXPECT_NO_THROW(validate(kNet));
  EXPECT_NO_THROW(validate(kQuad));
}

TEST(Permeability, KindNames) {
  EXPECT_EQ(kind_name(Constant{1.0}), "constant");
  EXPECT_EQ(kind_name(kKc), "kozeny-carman");
  EXPECT_EQ(kind_name(kNet), "network");
  EXPECT_EQ(kind_name(kQuad), "quadratic");
}

}  // namespace
}  // namespace biot::permeability
