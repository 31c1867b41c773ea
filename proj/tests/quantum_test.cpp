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
#include <vector>

#include <gtest/gtest.h>

#include "qbayes/classical.hpp"
#include "qbayes/quantum.hpp"

namespace qbayes::quantum {
namespace {

CMatrix diag2(double a, double b) {
  RVector d(2);
  d << a, b;
  return diagonal(d);
}

CMatrix plus_projector() {
  CMatrix p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  return p;
}

// Decoherence in the computational basis: keeps only the diagonal.
QChannel decoherence(std::size_t n) {
  std::vector<CMatrix> blocks;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      blocks.push_back(k == l ? matrix_unit(n, k, k) : CMatrix::Zero(static_cast<Eigen::Index>(n),
                                                                        static_cast<Eigen::Index>(n)));
  return QChannel({n}, {n}, blocks);
}

TEST(QuantumTest, StateValidation) {
  EXPECT_NO_THROW(QState(diag2(0.25, 0.75)));
  EXPECT_THROW(QState(diag2(0.5, 0.6)), ValidationError);
  EXPECT_THROW(QState(diag2(1.2, -0.2)), ValidationError);
  CMatrix skew(2, 2);
  skew << 0.5, 0.1, 0.3, 0.5;
  EXPECT_THROW(QState{skew}, ValidationError);
  EXPECT_THROW(QState(identity(4) / 4.0, {2, 3}), DimensionError);
}

TEST(QuantumTest, EffectValidation) {
  EXPECT_NO_THROW(Effect(diag2(1.0, 0.0)));
  EXPECT_THROW(Effect(diag2(1.1, 0.0)), ValidationError);
  EXPECT_THROW(Effect(diag2(0.5, -0.1)), ValidationError);
}

TEST(QuantumTest, DiagonalCaseByHand) {
  const QState sigma(diag2(0.25, 0.75));
  const Effect p(diag2(1.0, 0.5));
  EXPECT_NEAR(validity(sigma, p), 0.25 + 0.375, 1e-15);
  const QState lower = cond_lower(sigma, p), upper = cond_upper(sigma, p);
  EXPECT_NEAR(lower.mat()(0, 0).real(), 0.25 / 0.625, 1e-14);
  EXPECT_NEAR(upper.mat()(1, 1).real(), 0.375 / 0.625, 1e-14);
  EXPECT_NEAR(orthosupplement(p).mat()(1, 1).real(), 0.5, 1e-15);
}

TEST(QuantumTest, ConditioningOrderMatters) {
  const QState sigma(identity(2) / 2.0);
  const Effect p(diag2(1.0, 0.0)), q(plus_projector());
  // Sharp projections collapse onto themselves.
  const QState pq = cond_lower(cond_lower(sigma, p), q);
  const QState qp = cond_lower(cond_lower(sigma, q), p);
  EXPECT_LT((pq.mat() - plus_projector()).norm(), 1e-12);
  EXPECT_LT((qp.mat() - diag2(1.0, 0.0)).norm(), 1e-12);
  EXPECT_NEAR((pq.mat() - qp.mat()).norm(), 1.0, 1e-12);
}

TEST(QuantumTest, SeqConjIsSandwich) {
  const Effect p(diag2(0.81, 0.25)), q(plus_projector());
  const CMatrix s = diag2(0.9, 0.5);
  EXPECT_LT((seq_conj(p, q).mat() - s * plus_projector() * s).norm(), 1e-14);
}

TEST(QuantumTest, ZeroValidity) {
  EXPECT_THROW(cond_lower(QState(diag2(1.0, 0.0)), Effect(diag2(0.0, 1.0))), ZeroValidityError);
  EXPECT_THROW(cond_upper(QState(diag2(1.0, 0.0)), Effect(diag2(0.0, 1.0))), ZeroValidityError);
}

TEST(QuantumTest, DecoherenceChannel) {
  CMatrix rho(2, 2);
  rho << 0.6, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.4;
  const QChannel d = decoherence(2);
  EXPECT_TRUE(d.unital());
  EXPECT_LT((state_transform(d, QState(rho)).mat() - diag2(0.6, 0.4)).norm(), 1e-15);
  const QChannel k = QChannel::from_kraus({2}, {2}, {matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LT((k.blocks()[i] - d.blocks()[i]).norm(), 1e-15);
}

TEST(QuantumTest, IdentityChannel) {
  CMatrix rho(3, 3);
  rho << 0.5, 0.1, 0.0, 0.1, 0.3, Complex(0, 0.05), 0.0, Complex(0, -0.05), 0.2;
  const QChannel id = QChannel::identity({3});
  EXPECT_LT((state_transform(id, QState(rho)).mat() - rho).norm(), 1e-15);
}

TEST(QuantumTest, RejectsTransposeMap) {
  // Positive and unital, but not completely positive.
  std::vector<CMatrix> blocks;
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 2; ++l) blocks.push_back(matrix_unit(2, l, k));
  EXPECT_THROW(QChannel({2}, {2}, blocks), ValidationError);
}

TEST(QuantumTest, RejectsSuperunital) {
  std::vector<CMatrix> blocks{2.0 * identity(2), CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), identity(2)};
  EXPECT_THROW(QChannel({2}, {2}, blocks), ValidationError);
}

TEST(QuantumTest, AssertGivesSeqConj) {
  const Effect p(diag2(0.7, 0.2)), q(plus_projector());
  const QChannel a = asrt(p);
  EXPECT_FALSE(a.unital());
  EXPECT_LT((pred_transform(a, q).mat() - seq_conj(p, q).mat()).norm(), 1e-14);
  const SubState s = push_forward(a, QState(identity(2) / 2.0));
  EXPECT_NEAR(s.trace, 0.45, 1e-14);
  EXPECT_TRUE(s.subnormalized);
  EXPECT_LT((s.normalized().mat() - cond_lower(QState(identity(2) / 2.0), p).mat()).norm(), 1e-14);
  EXPECT_THROW(state_transform(a, QState(identity(2) / 2.0)), ValidationError);
}

TEST(QuantumTest, TensorChannelActsFactorwise) {
  const QChannel d = decoherence(2);
  const QChannel id = QChannel::identity({3});
  const QChannel t = tensor(d, id);
  CMatrix b = CMatrix::Zero(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) b(i, j) = Complex(i + j, i - j) / 20.0;
  // Oracle: (D (x) id)(B) kills the off-diagonal 3x3 blocks.
  CMatrix want = b;
  want.block(0, 3, 3, 3).setZero();
  want.block(3, 0, 3, 3).setZero();
  std::vector<CMatrix> blocks{CMatrix(2.0 * identity(2)), CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), identity(2)};
}

TEST(QuantumTest, MarginalOfProduct) {
  const QState a(diag2(0.25, 0.75)), b(plus_projector());
  const QState ab = tensor(a, b);
  EXPECT_EQ(ab.dims(), (DimList{2, 2}));
  EXPECT_LT((marginal(ab, {1, 0}).mat() - a.mat()).norm(), 1e-15);
  EXPECT_LT((marginal(ab, {0, 1}).mat() - b.mat()).norm(), 1e-15);
}

TEST(QuantumTest, CupIsMaximallyEntangled) {
  const QState c = cup(3);
  EXPECT_EQ(c.dims(), (DimList{3, 3}));
  EXPECT_NEAR(c.mat().trace().real(), 1.0, 1e-15);
  EXPECT_LT((c.mat() * c.mat() - c.mat()).norm(), 1e-14);
  EXPECT_LT((marginal(c, {1, 0}).mat() - identity(3) / 3.0).norm(), 1e-15);
}

TEST(QuantumTest, HatIsDiagonal) {
  using classical::FinSet;
  using classical::Space;
  const Space b(FinSet::boolean());
  const QState s = hat(classical::Dist(b, {0.3, 0.7}));
  EXPECT_LT((s.mat() - diag2(0.3, 0.7)).norm(), 1e-15);
  classical::RMatrix m(2, 2);
  m << 0.9, 0.1, 0.2, 0.8;
  const QChannel c = hat(classical::StochChannel(b, b, m));
  EXPECT_TRUE(c.unital());
  EXPECT_LT((c.block(0, 0) - diag2(0.9, 0.2)).norm(), 1e-15);
  EXPECT_LT(c.block(0, 1).norm(), 1e-15);
}

}  // namespace
}  // namespace qbayes::quantum
