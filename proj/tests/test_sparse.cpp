// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "biot/sparse.hpp"

namespace biot {
namespace {

CsrMatrix sample() {
  // [1 0 2]
  // [0 3 0]
  return CsrMatrix::from_triplets(2, 3, {{0, 2, 2.0}, {1, 1, 3.0}, {0, 0, 0.5}, {0, 0, 0.5}});
}

TEST(Csr, FromTripletsSumsDuplicates) {
  const CsrMatrix m = sample();
  EXPECT_EQ(m.nonzeros(), 3);
  EXPECT_EQ(m.at(0, 0), 1.0);
  EXPECT_EQ(m.at(0, 1), 0.0);
  EXPECT_EQ(m.find(0, 1), -1);
  EXPECT_EQ(m.at(0, 2), 2.0);
  EXPECT_EQ(m.at(1, 1), 3.0);
}

TEST(Csr, KeepsExplicitZeros) {
  const CsrMatrix m = CsrMatrix::from_triplets(2, 2, {{0, 1, 0.0}, {1, 0, 1.0}});
  EXPECT_EQ(m.nonzeros(), 2);
  EXPECT_GE(m.find(0, 1), 0);
}

TEST(Csr, Products) {
  const CsrMatrix m = sample();
  const Vector y = m * Vector({1.0, 2.0, 3.0});
  EXPECT_EQ(y, (Vector{7.0, 6.0}));
  const Vector z = m.multiply_transposed(Vector{1.0, -1.0});
  EXPECT_EQ(z, (Vector{1.0, -3.0, 2.0}));
  const CsrMatrix t = m.transposed();
  EXPECT_EQ(t.rows(), 3);
  EXPECT_EQ(t.at(2, 0), 2.0);
  EXPECT_EQ((t * Vector{1.0, -1.0}), z);
}

TEST(Csr, DenseCopyAndSymmetry) {
  const CsrMatrix m = sample();
  EXPECT_EQ(m.to_dense(), (std::vector<double>({1, 0, 2, 0, 3, 0})));
  const CsrMatrix s = CsrMatrix::from_triplets(2, 2, {{0, 1, 2.0}, {1, 0, 2.0}, {0, 0, 1.0}});
  EXPECT_TRUE(s.is_symmetric(0.0));
  EXPECT_FALSE(CsrMatrix::from_triplets(2, 2, {{0, 1, 2.0}}).is_symmetric(1e-12));
}

TEST(Csr, LinearCombinationRequiresSamePattern) {
  const CsrMatrix a = sample();
  const CsrMatrix b = a.scaled(2.0);
  const CsrMatrix c = linear_combination(1.0, a, -0.5, b);
  for (double v : c.values()) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(linear_combination(1.0, a, 1.0, CsrMatrix::identity(2)), std::invalid_argument);
}

TEST(Csr, RejectsMalformedInput) {
  EXPECT_THROW(CsrMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(CsrMatrix(2, 2, {0, 1}, {0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(sample() * Vector{1.0}, std::invalid_argument);
}

TEST(Csr, VectorHelpers) {
  const Vector a{3.0, 4.0};
  EXPECT_EQ(dot(a, a), 25.0);
  EXPECT_EQ(norm2(a), 5.0);
  Vector y{1.0, 1.0};
  axpy(2.0, a, y);
  EXPECT_EQ(y, (Vector{7.0, 9.0}));
}

}  // namespace
}  // namespace biot
