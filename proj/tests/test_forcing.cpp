// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "biot/forcing.hpp"
#include "oracles.hpp"

namespace biot {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Forcing, Experiment41Data) {
  const ProblemData d = experiment_41_data();
  EXPECT_EQ(d.coeffs.lambda, 7.826e8);
  EXPECT_EQ(d.coeffs.mu, 1.826e9);
  EXPECT_EQ(d.coeffs.alpha, 0.85);
  EXPECT_EQ(d.coeffs.M, 7e9);
  EXPECT_EQ(d.coeffs.kappa_over_nu_scale, 8e-10);
  EXPECT_EQ(permeability::kind_name(d.coeffs.permeability), "network");
  EXPECT_NEAR(d.g({0.5, 0.3}, 1.0), 30.0 * std::exp(-1.0), 1e-13);
  EXPECT_NEAR(d.p0({0.5, 0.5}), 50.0 / 16.0, 1e-14);
  EXPECT_EQ(d.f({0.2, 0.7}, 0.4)[0], 0.0);
  EXPECT_FALSE(d.has_exact_solution());
}

TEST(Forcing, Experiment43Data) {
  const ProblemData d = experiment_43_data(1.5);
  EXPECT_EQ(d.coeffs.alpha, 1.5);
  EXPECT_NEAR(d.g({0.1, 0.1}, 0.0), 5.0, 1e-14);
  EXPECT_NEAR(d.g({0.1, 0.1}, 1.0), 1.0, 1e-14);
  EXPECT_EQ(d.p0({0.3, 0.3}), 0.0);
  EXPECT_NO_THROW(experiment_43_data(0.0));
  EXPECT_THROW(experiment_43_data(-0.1), std::invalid_argument);
  EXPECT_THROW(experiment_43_data(std::nan("")), std::invalid_argument);
}

TEST(Forcing, Experiment42ExactSolution) {
  const ProblemData d = experiment_42_data();
  ASSERT_TRUE(d.has_exact_solution());
  const Point x{0.3, 0.8};
  const double s = std::sin(kPi * 0.3) * std::sin(kPi * 0.8);
  EXPECT_NEAR((*d.exact_p)(x, 0.7), 0.7 * s, 1e-15);
  EXPECT_NEAR((*d.exact_u)(x, 0.7)[1], std::exp(-0.7) / 6 * s, 1e-15);
  EXPECT_EQ((*d.exact_p)(x, 0.0), d.p0(x));
}

TEST(Forcing, ExactSolutionVanishesOnBoundary) {
  const ProblemData d = experiment_42_data();
  for (double s : {0.0, 0.25, 0.5, 1.0}) {
    for (const Point x : {Point{0.0, s}, Point{1.0, s}, Point{s, 0.0}, Point{s, 1.0}}) {
      EXPECT_NEAR((*d.exact_p)(x, 0.9), 0.0, 1e-15);
      EXPECT_NEAR((*d.exact_u)(x, 0.9)[0], 0.0, 1e-15);
    }
  }
}

void expect_strong_residual_small(const ProblemData& d, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pos(0.05, 0.95), time(0.05, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Point x{pos(rng), pos(rng)};
    const double t = time(rng);
    const auto r = oracle::ex42_strong_residual(d, x, t, 1e-3);
    EXPECT_LT(r.momentum, 1e-5) << "x=" << x.x << "," << x.y << " t=" << t;
    EXPECT_LT(r.flow, 1e-5) << "x=" << x.x << "," << x.y << " t=" << t;
  }
}

TEST(Forcing, Experiment42SatisfiesStrongForm) { expect_strong_residual_small(experiment_42_data(), 1); }

TEST(Forcing, Experiment42OverridesRederiveForcing) {
  Coefficients c = experiment_42_coefficients();
  c.lambda = 3.0;
  c.mu = 0.5;
  c.alpha = 0.7;
  c.M = 2.0;
  c.kappa_over_nu_scale = 0.4;
  expect_strong_residual_small(experiment_42_data(c), 2);
  c.permeability = permeability::Constant{0.5};
  expect_strong_residual_small(experiment_42_data(c), 3);
}

TEST(Forcing, ZeroProblem) {
  const ProblemData d = zero_problem(experiment_42_coefficients(), 0.5);
  EXPECT_EQ(d.final_time, 0.5);
  EXPECT_EQ(d.g({0.5, 0.5}, 0.2), 0.0);
  EXPECT_TRUE(d.has_exact_solution());
}

}  // namespace
}  // namespace biot
