// Copyright 2026 The qbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "qbayes/matrix.hpp"

namespace qbayes {
namespace {

CMatrix random_matrix(Eigen::Index r, Eigen::Index c, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> n;
  CMatrix a(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) a(i, j) = Complex(n(gen), n(gen));
  return a;
}

CMatrix random_psd(Eigen::Index n, unsigned seed) {
  CMatrix g = random_matrix(n, n, seed);
  return g * g.adjoint();
}

TEST(MatrixTest, HsInnerMatchesEntrySum) {
  const CMatrix a = random_matrix(3, 4, 1), b = random_matrix(3, 4, 2);
  Complex sum = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) sum += std::conj(a(i, j)) * b(i, j);
  EXPECT_NEAR(std::abs(hs_inner(a, b) - sum), 0.0, 1e-12);
}

TEST(MatrixTest, KronEntrywise) {
  const CMatrix a = random_matrix(2, 3, 3), b = random_matrix(4, 2, 4);
  const CMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 8);
  ASSERT_EQ(k.cols(), 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 2; ++q) EXPECT_EQ(k(i * 4 + p, j * 2 + q), a(i, j) * b(p, q));
}

TEST(MatrixTest, SqrtSquaresBack) {
  const CMatrix a = random_psd(5, 5);
  const CMatrix s = psd_sqrt(a);
  EXPECT_LT((s * s - a).norm(), 1e-10 * a.norm());
  EXPECT_LT(hermitian_defect(s), 1e-12);
  EXPECT_GE(min_eigenvalue(s), -1e-12);
}

TEST(MatrixTest, SqrtOfDiagonal) {
  RVector d(3);
  d << 4.0, 0.25, 0.0;
  const CMatrix s = psd_sqrt(diagonal(d));
  EXPECT_NEAR(s(0, 0).real(), 2.0, 1e-14);
  EXPECT_NEAR(s(1, 1).real(), 0.5, 1e-14);
  EXPECT_NEAR(std::abs(s(2, 2)), 0.0, 1e-14);
}

TEST(MatrixTest, SqrtRejectsIndefinite) {
  RVector d(2);
  d << 1.0, -0.1;
  EXPECT_THROW(psd_sqrt(diagonal(d)), NotPsdError);
  CMatrix skew(2, 2);
  skew << 1.0, 1.0, 0.0, 1.0;
  EXPECT_THROW(psd_sqrt(skew), NotPsdError);
}

TEST(MatrixTest, InverseSqrt) {
  const CMatrix a = random_psd(4, 6);
  const CMatrix t = psd_inv_sqrt(a);
  EXPECT_LT((t * a * t - identity(4)).norm(), 1e-9);
  RVector d(2);
  d << 1.0, 0.0;
  EXPECT_THROW(psd_inv_sqrt(diagonal(d)), SingularError);
}

TEST(MatrixTest, PartialTraceTwoFactors) {
  const CMatrix a = random_matrix(6, 6, 7);
  const DimList dims{2, 3};
  const CMatrix first = partial_trace(a, dims, {1, 0});
  const CMatrix second = partial_trace(a, dims, {0, 1});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < 3; ++k) s += a(i * 3 + k, j * 3 + k);
      EXPECT_NEAR(std::abs(first(i, j) - s), 0.0, 1e-12);
    }
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      Complex s = 0.0;
      for (int i = 0; i < 2; ++i) s += a(i * 3 + k, i * 3 + l);
      EXPECT_NEAR(std::abs(second(k, l) - s), 0.0, 1e-12);
    }
}

TEST(MatrixTest, PartialTraceMiddleFactor) {
  const CMatrix a = random_matrix(12, 12, 8);
  const CMatrix r = partial_trace(a, {2, 2, 3}, {1, 0, 1});
  ASSERT_EQ(r.rows(), 6);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 3; ++l) {
          Complex s = 0.0;
          for (int m = 0; m < 2; ++m) s += a(i * 6 + m * 3 + k, j * 6 + m * 3 + l);
          EXPECT_NEAR(std::abs(r(i * 3 + k, j * 3 + l) - s), 0.0, 1e-12);
        }
  EXPECT_NEAR(std::abs(partial_trace(a, {2, 2, 3}, {0, 0, 0})(0, 0) - a.trace()), 0.0, 1e-12);
  EXPECT_EQ(partial_trace(a, {2, 2, 3}, {1, 1, 1}), a);
}

TEST(MatrixTest, RejectsBadShapes) {
  EXPECT_THROW(check_dims({2, 0}), DimensionError);
  EXPECT_THROW(check_dims({}), DimensionError);
  EXPECT_THROW(partial_trace(identity(6), {2, 3}, {1}), DimensionError);
  EXPECT_THROW(partial_trace(identity(5), {2, 3}, {1, 0}), DimensionError);
  EXPECT_THROW(multiply(identity(2), identity(3)), DimensionError);
}

TEST(MatrixTest, OperatorNorm) {
  RVector d(3);
  d << 0.5, -3.0, 2.0;
  EXPECT_NEAR(operator_norm(diagonal(d)), 3.0, 1e-12);
}

}  // namespace
}  // namespace qbayes
