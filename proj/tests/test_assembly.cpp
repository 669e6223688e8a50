// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "biot/assembly.hpp"
#include "biot/forcing.hpp"
#include "oracles.hpp"

namespace biot {
namespace {

using oracle::Dense;

Coefficients odd_coefficients() {
  Coefficients c;
  c.lambda = 1.7;
  c.mu = 0.8;
  c.alpha = 0.6;
  c.M = 2.5;
  c.kappa_over_nu_scale = 1.3;
  c.permeability = permeability::KozenyCarman{1.0, 0.5, -0.75, 0.75};
  return c;
}

Vector random_vector(std::size_t n, unsigned seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  Vector v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

class AssemblyOracle : public ::testing::TestWithParam<int> {};

TEST_P(AssemblyOracle, MatchesDenseReference) {
  const Mesh mesh = Mesh::structured(GetParam());
  const Coefficients c = odd_coefficients();
  EXPECT_LE(oracle::max_abs_diff(oracle::to_dense(assemble_elasticity(mesh, c)),
                                 oracle::elasticity(mesh, c)),
            1e-12);
  EXPECT_LE(oracle::max_abs_diff(oracle::to_dense(assemble_pressure_mass(mesh, c)),
                                 oracle::restrict_scalar(mesh, oracle::mass_full(mesh, 1 / c.M))),
            1e-12);
  EXPECT_LE(oracle::max_abs_diff(oracle::to_dense(assemble_coupling(mesh, c)),
                                 oracle::coupling(mesh, c)),
            1e-12);
  for (unsigned seed : {1u, 2u, 3u}) {
    const Vector u = random_vector(2 * mesh.interior_count(), seed, 0.4);
    const Dense expected = oracle::permeability(mesh, c, u);
    EXPECT_LE(oracle::max_abs_diff(oracle::to_dense(assemble_permeability_stiffness(mesh, c, u)),
                                   expected),
              1e-12);
    PermeabilityAssembler assembler(mesh, c);
    EXPECT_LE(oracle::max_abs_diff(oracle::to_dense(assembler.assemble(u)), expected), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Meshes, AssemblyOracle, ::testing::Values(1, 2, 4));

TEST(Assembly, MassSumsToInverseModulus) {
  const Coefficients c = odd_coefficients();
  const CsrMatrix C = assemble_pressure_mass(Mesh::structured(4), c, DofSpace::Full);
  const double sum = std::accumulate(C.values().begin(), C.values().end(), 0.0);
  EXPECT_NEAR(sum, 1.0 / c.M, 1e-12);
}

TEST(Assembly, CouplingAnnihilatesConstants) {
  const Mesh mesh = Mesh::structured(4);
  const Coefficients c = odd_coefficients();
  const CsrMatrix D = assemble_coupling(mesh, c, DofSpace::Full);
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Vector u = oracle::expand_vector(mesh, random_vector(2 * mesh.interior_count(), seed));
    const Vector du = D * u;
    EXPECT_NEAR(std::accumulate(du.begin(), du.end(), 0.0), 0.0, 1e-12);
  }
}

TEST(Assembly, OperatorsAreSymmetricAndSharePatterns) {
  const Mesh mesh = Mesh::structured(5);
  const Coefficients c = odd_coefficients();
  EXPECT_TRUE(assemble_elasticity(mesh, c).is_symmetric(1e-12));
  const CsrMatrix C = assemble_pressure_mass(mesh, c);
  const CsrMatrix B = assemble_permeability_stiffness(mesh, c, Vector(2 * mesh.interior_count(), 0.0));
  EXPECT_TRUE(B.is_symmetric(1e-12));
  EXPECT_TRUE(C.same_pattern(B));
  EXPECT_TRUE(C.same_pattern(assemble_laplace(mesh)));
}

TEST(Assembly, LoadsMatchOracle) {
  const Mesh mesh = Mesh::structured(4);
  const ProblemData d = experiment_42_data();
  const Vector lq = assemble_load_q(mesh, d.g, 0.3);
  const Vector oq = oracle::load_q(mesh, d.g, 0.3);
  for (std::size_t i = 0; i < lq.size(); ++i) EXPECT_NEAR(lq[i], oq[i], 1e-13);
  const Vector lv = assemble_load_v(mesh, d.f, 0.3);
  const Vector ov = oracle::load_v(mesh, d.f, 0.3);
  for (std::size_t i = 0; i < lv.size(); ++i) EXPECT_NEAR(lv[i], ov[i], 1e-13);
}

TEST(Assembly, LoadOfConstantIntegratesExactly) {
  // Full-space load of g = 1 sums to the area of the domain.
  const Mesh mesh = Mesh::structured(3);
  const Vector g = assemble_load_q(mesh, [](Point, double) { return 1.0; }, 0.0, DofSpace::Full);
  EXPECT_NEAR(std::accumulate(g.begin(), g.end(), 0.0), 1.0, 1e-14);
}

TEST(Assembly, ElementDivergenceMatchesOracle) {
  const Mesh mesh = Mesh::structured(3);
  const Vector u = random_vector(2 * mesh.interior_count(), 11);
  const Vector full = oracle::expand_vector(mesh, u);
  const Vector div = element_divergence(mesh, u);
  ASSERT_EQ(div.size(), static_cast<std::size_t>(mesh.triangle_count()));
  for (int t = 0; t < mesh.triangle_count(); ++t)
    EXPECT_NEAR(div[t], oracle::element_divergence(oracle::element(mesh, t), full), 1e-13);
}

TEST(Assembly, CoefficientValidation) {
  Coefficients c;
  c.mu = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = Coefficients{};
  c.M = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = Coefficients{};
  c.alpha = 0.0;
  EXPECT_NO_THROW(c.validate());
}

}  // namespace
}  // namespace biot
