// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "biot/mesh.hpp"
#include "oracles.hpp"

namespace biot {
namespace {

TEST(Mesh, Counts) {
  for (int n : {1, 2, 3, 4, 8}) {
    const Mesh m = Mesh::structured(n);
    EXPECT_EQ(m.node_count(), (n + 1) * (n + 1));
    EXPECT_EQ(m.triangle_count(), 2 * n * n);
    EXPECT_EQ(m.boundary_count(), 4 * n);
    EXPECT_EQ(m.interior_count(), (n - 1) * (n - 1));
  }
  const Mesh m2 = Mesh::structured(2);
  EXPECT_EQ(m2.interior_count(), 1);
  EXPECT_EQ(m2.interior_node(0), m2.node_index(1, 1));
}

TEST(Mesh, RejectsZeroSubdivisions) {
  EXPECT_THROW(Mesh::structured(0), std::invalid_argument);
  EXPECT_THROW(Mesh::structured(-3), std::invalid_argument);
}

TEST(Mesh, AreasArePositiveAndSumToOne) {
  for (int n : {1, 4, 7}) {
    const Mesh m = Mesh::structured(n);
    double total = 0.0;
    for (int t = 0; t < m.triangle_count(); ++t) {
      EXPECT_NEAR(m.signed_area(t), 0.5 * m.h() * m.h(), 1e-15);
      total += m.signed_area(t);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Mesh, BoundaryTagging) {
  const Mesh m = Mesh::structured(5);
  for (int i = 0; i < m.node_count(); ++i) {
    const Point x = m.nodes()[i];
    const bool edge = x.x == 0.0 || x.x == 1.0 || x.y == 0.0 || x.y == 1.0;
    EXPECT_EQ(m.on_boundary(i), edge);
  }
}

TEST(Mesh, NestedGrids) {
  const Mesh coarse = Mesh::structured(3);
  const Mesh fine = Mesh::structured(6);
  for (int r = 0; r <= 3; ++r) {
    for (int c = 0; c <= 3; ++c) {
      const Point a = coarse.nodes()[coarse.node_index(c, r)];
      const Point b = fine.nodes()[fine.node_index(2 * c, 2 * r)];
      EXPECT_DOUBLE_EQ(a.x, b.x);
      EXPECT_DOUBLE_EQ(a.y, b.y);
    }
  }
}

TEST(Prolong, ZeroAndLinear) {
  const Mesh coarse = Mesh::structured(1);
  const Mesh fine = Mesh::structured(2);
  Vector zero(4, 0.0);
  for (double v : prolong(coarse, fine, zero)) EXPECT_EQ(v, 0.0);

  Vector lin(4);
  for (int i = 0; i < 4; ++i) lin[i] = coarse.nodes()[i].x;
  const Vector out = prolong(coarse, fine, lin);
  for (int i = 0; i < fine.node_count(); ++i) EXPECT_NEAR(out[i], fine.nodes()[i].x, 1e-15);
}

TEST(Prolong, MatchesBarycentricOracle) {
  const Mesh coarse = Mesh::structured(2);
  const Mesh fine = Mesh::structured(4);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(coarse.node_count());
  for (double& x : v) x = dist(rng);
  const Vector out = prolong(coarse, fine, v);
  for (int i = 0; i < fine.node_count(); ++i) {
    EXPECT_NEAR(out[i], oracle::evaluate_p1(coarse, v, fine.nodes()[i]), 1e-14);
  }
}

TEST(Prolong, Linearity) {
  const Mesh coarse = Mesh::structured(3);
  const Mesh fine = Mesh::structured(9);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(coarse.node_count()), w(coarse.node_count()), c(coarse.node_count());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = dist(rng);
    w[i] = dist(rng);
    c[i] = 2.5 * v[i] - 0.75 * w[i];
  }
  const Vector pv = prolong(coarse, fine, v), pw = prolong(coarse, fine, w),
               pc = prolong(coarse, fine, c);
  for (std::size_t i = 0; i < pc.size(); ++i) EXPECT_NEAR(pc[i], 2.5 * pv[i] - 0.75 * pw[i], 1e-13);
}

TEST(Prolong, RejectsNonNested) {
  const Mesh a = Mesh::structured(2);
  const Mesh b = Mesh::structured(3);
  EXPECT_THROW(prolong(a, b, Vector(a.node_count(), 0.0)), std::invalid_argument);
  EXPECT_THROW(prolong(a, Mesh::structured(4), Vector(3, 0.0)), std::invalid_argument);
}

TEST(Prolong, InteriorVariantsKeepBoundaryZero) {
  const Mesh coarse = Mesh::structured(2);
  const Mesh fine = Mesh::structured(4);
  const Vector p = prolong_interior_scalar(coarse, fine, Vector{1.0});
  ASSERT_EQ(p.size(), static_cast<std::size_t>(fine.interior_count()));
  // Centre node keeps its value; the hat function halves at edge midpoints.
  EXPECT_DOUBLE_EQ(p[fine.interior_index(fine.node_index(2, 2))], 1.0);
  EXPECT_DOUBLE_EQ(p[fine.interior_index(fine.node_index(1, 2))], 0.5);
  const Vector u = prolong_interior_vector(coarse, fine, Vector{1.0, -2.0});
  ASSERT_EQ(u.size(), 2 * p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    EXPECT_DOUBLE_EQ(u[2 * k], p[k]);
    EXPECT_DOUBLE_EQ(u[2 * k + 1], -2.0 * p[k]);
  }
}

}  // namespace
}  // namespace biot
