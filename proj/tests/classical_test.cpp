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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qbayes/classical.hpp"

namespace qbayes::classical {
namespace {

const Space kBool(FinSet::boolean());

StochChannel bool_channel(double tt, double ft) {
  RMatrix m(2, 2);
  m << tt, 1 - tt, ft, 1 - ft;
  return StochChannel(kBool, kBool, m);
}

TEST(ClassicalTest, FinSetAndSpace) {
  EXPECT_THROW(FinSet(std::vector<std::string>{}), ValidationError);
  EXPECT_THROW(FinSet({"a", "a"}), ValidationError);
  const Space s(std::vector<FinSet>{FinSet::boolean(), FinSet::range(3, "y")});
  EXPECT_EQ(s.size(), 6u);
  EXPECT_EQ(s.label_tuple(4), (std::vector<std::string>{"f", "y1"}));
  EXPECT_EQ(s.index_of({"t", "y2"}), 2u);
}

TEST(ClassicalTest, DistValidation) {
  EXPECT_THROW(Dist(kBool, {0.5, 0.6}), ValidationError);
  EXPECT_THROW(Dist(kBool, {1.2, -0.2}), ValidationError);
  EXPECT_THROW(Dist(kBool, {1.0}), DimensionError);
  const Dist d(kBool, {1.0 + 1e-13, -1e-13});
  EXPECT_EQ(d[1], 0.0);
  EXPECT_THROW(FuzzyPred(kBool, {0.5, 1.5}), ValidationError);
}

TEST(ClassicalTest, ConditioningByHand) {
  const Dist smoking(kBool, {0.3, 0.7});
  const FuzzyPred evidence(kBool, {0.95, 0.25});
  EXPECT_NEAR(validity(smoking, evidence), 0.46, 1e-15);
  const Dist post = condition(smoking, evidence);
  EXPECT_NEAR(post[0], 0.285 / 0.46, 1e-15);
  EXPECT_NEAR(post[1], 0.175 / 0.46, 1e-15);
  EXPECT_THROW(condition(Dist::point(kBool, 0), FuzzyPred::point(kBool, 1)), ZeroValidityError);
}

TEST(ClassicalTest, PairTable) {
  const Dist smoking(kBool, {0.3, 0.7});
  const Dist joint = pair(smoking, bool_channel(0.4, 0.05));
  const double expected[] = {0.12, 0.18, 0.035, 0.665};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(joint[i], expected[i], 1e-15);
  EXPECT_NEAR(joint.prob({"f", "t"}), 0.035, 1e-15);
}

TEST(ClassicalTest, TransformsAgainstMatrixProducts) {
  const StochChannel c = bool_channel(0.95, 0.25);
  const Dist w(kBool, {0.3, 0.7});
  const Dist out = state_transform(c, w);
  EXPECT_NEAR(out[0], 0.3 * 0.95 + 0.7 * 0.25, 1e-15);
  const FuzzyPred q(kBool, {0.2, 0.9});
  const FuzzyPred back = pred_transform(c, q);
  EXPECT_NEAR(back[1], 0.25 * 0.2 + 0.75 * 0.9, 1e-15);
}

TEST(ClassicalTest, ComposeAppliesFirstArgumentLast) {
  const StochChannel c = bool_channel(0.9, 0.2), d = bool_channel(0.6, 0.1);
  const Dist w(kBool, {0.4, 0.6});
  const Dist lhs = state_transform(compose(d, c), w);
  const Dist rhs = state_transform(d, state_transform(c, w));
  EXPECT_NEAR(lhs[0], rhs[0], 1e-15);
}

TEST(ClassicalTest, CopyChannel) {
  const StochChannel cp = StochChannel::copy(FinSet::boolean(), 3);
  const Dist out = state_transform(cp, Dist(kBool, {0.3, 0.7}));
  EXPECT_NEAR(out.prob({"t", "t", "t"}), 0.3, 1e-15);
  EXPECT_NEAR(out.prob({"f", "f", "f"}), 0.7, 1e-15);
  EXPECT_NEAR(out.prob({"t", "f", "t"}), 0.0, 1e-15);
}

TEST(ClassicalTest, MarginalSumsOut) {
  const Space s3(std::vector<FinSet>{FinSet::boolean(), FinSet::range(3), FinSet::range(2, "z")});
  RVector p(12);
  for (int i = 0; i < 12; ++i) p(i) = i + 1;
  const Dist tau(s3, RVector(p / p.sum()));
  const Dist m = marginal(tau, {1, 0, 1});
  ASSERT_EQ(m.size(), 4u);
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) {
      double s = 0.0;
      for (int b = 0; b < 3; ++b) s += tau[a * 6 + b * 2 + c];
      EXPECT_NEAR(m[a * 2 + c], s, 1e-15);
    }
}

TEST(ClassicalTest, ExtractUndoesPair) {
  const Space x(FinSet::range(3));
  const Space y(FinSet::range(2, "y"));
  RMatrix rows(3, 2);
  rows << 0.1, 0.9, 0.5, 0.5, 0.7, 0.3;
  const StochChannel c(x, y, rows);
  const Dist w(x, {0.2, 0.3, 0.5});
  const StochChannel back = extract(pair(w, c));
  EXPECT_LT((back.rows() - rows).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ClassicalTest, ExtractNeedsFullSupport) {
  const Space joint = Space::product(kBool, kBool);
  const Dist tau(joint, {0.5, 0.5, 0.0, 0.0});
  try {
    extract(tau);
    FAIL() << "expected SupportError";
  } catch (const SupportError& e) {
    EXPECT_NE(std::string(e.what()).find("'f'"), std::string::npos);
  }
}

TEST(ClassicalTest, SemiExpBetaLaw) {
  const FinSet z = FinSet::range(2, "z");
  const FinSet x = FinSet::boolean();
  RMatrix rows(4, 3);
  rows << 0.2, 0.3, 0.5, 1.0, 0.0, 0.0, 0.6, 0.2, 0.2, 0.1, 0.1, 0.8;
  const StochChannel f(Space(std::vector<FinSet>{z, x}), Space(FinSet::range(3, "y")), rows);
  const SemiExpAbstraction lam = semiexp_abstract(f);
  // The abstracted joint at z0 has uniform first marginal.
  EXPECT_NEAR(lam(0)[0], 0.1, 1e-15);
  EXPECT_LT((semiexp_eval_abstract(lam, x).rows() - rows).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ClassicalTest, SemiExpEtaLawFailsOffUniform) {
  const Space joint = Space::product(kBool, kBool);
  const Dist skewed(joint, {0.1, 0.1, 0.4, 0.4});
  const Dist flat(joint, {0.1, 0.4, 0.25, 0.25});
  const SemiExpAbstraction back = semiexp_abstract(semiexp_ev_channel({skewed, flat}));
  // Lambda(ev) replaces the first marginal by the uniform one.
  EXPECT_NEAR(back(0)[0], 0.25, 1e-15);
  EXPECT_GT((back(0).probs() - skewed.probs()).cwiseAbs().maxCoeff(), 0.1);
  EXPECT_LT((back(1).probs() - flat.probs()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ClassicalTest, Format) {
  EXPECT_EQ(format(Dist(kBool, {0.3, 0.7})), "0.3|t> + 0.7|f>");
  EXPECT_EQ(format(Dist(kBool, {0.26666, 0.73334})), "0.267|t> + 0.733|f>");
}

}  // namespace
}  // namespace qbayes::classical
