#include <gtest/gtest.h>

#include "support.hpp"

using namespace epictrl;
using namespace epictrl::testing;

TEST(DiseaseFree, Definition) {
  const auto a = disease_free(measles());
  EXPECT_EQ(a.s, 1e6);
  EXPECT_EQ(a.e + a.i + a.r, 0.0);
  EXPECT_EQ(a.kind, EquilibriumKind::DiseaseFree);
  EXPECT_EQ(disease_free(influenza(7)).s, 1000.0);
  EXPECT_LE(residual(measles(), a), 1e-12 * 1e6);
}

TEST(Endemic, MeaslesPercentages) {
  const ModelParams p = measles();
  const auto en = endemic(p);
  ASSERT_TRUE(en);
  const double k = 100.0 / p.n_total;
  // Published values; recomputed at 40 digits: 8.33965, 0.05112, 0.01832, 91.59091.
  EXPECT_NEAR(en->s * k, 8.34, 0.005);
  EXPECT_NEAR(en->e * k, 0.051, 0.005);
  EXPECT_NEAR(en->i * k, 0.019, 0.005);
  EXPECT_NEAR(en->r * k, 91.59, 0.005);
  EXPECT_NEAR(en->s * k, 8.339651303462322, 1e-10);
  EXPECT_NEAR(en->r * k, 91.59090846168793, 1e-10);
  EXPECT_LE(residual(p, *en), 1e-9 * p.n_total);
  EXPECT_NEAR(en->s + en->e + en->i + en->r, p.n_total, 1e-9 * p.n_total);
}

TEST(Endemic, InfluenzaRemovedLevels) {
  EXPECT_NEAR(endemic(influenza(7))->r, 445.81491769940735, 1e-9);
  EXPECT_NEAR(endemic(influenza(15))->r, 561.36070628336041, 1e-9);
}

TEST(Endemic, AbsentBelowThresholdAndDegenerateAtIt) {
  ModelParams p = measles();
  p.beta = 0.1;
  EXPECT_FALSE(endemic(p));
  // Smallest representable beta with sigma beta >= (mu + sigma)(mu + gamma).
  const double thr = (p.mu + p.sigma) * (p.mu + p.gamma);
  p.beta = thr / p.sigma;
  while (p.sigma * p.beta < thr) p.beta = std::nextafter(p.beta, INFINITY);
  const auto en = endemic(p);
  ASSERT_TRUE(en);
  EXPECT_TRUE(en->degenerate);
  EXPECT_NEAR(en->s, p.n_total, 1e-9 * p.n_total);
  EXPECT_NEAR(en->i, 0.0, 1e-9 * p.n_total);
  EXPECT_NEAR(en->r, 0.0, 1e-9 * p.n_total);
}

TEST(ReproductionRatio, Values) {
  EXPECT_NEAR(reproduction_ratio(measles()), 11.990909015402552, 1e-12);
  EXPECT_NEAR(reproduction_ratio(influenza(7)), 3.6513711653692395, 1e-12);
  ModelParams p = measles();
  p.beta = (p.mu + p.sigma) * (p.mu + p.gamma) / p.sigma;
  EXPECT_NEAR(reproduction_ratio(p), 1.0, 1e-15);
  p.mu = 0.0;
  p.gamma = 0.0;
  try {
    reproduction_ratio(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateRates);
  }
}

TEST(Residual, NonEquilibriumIsPositive) {
  const ModelParams p = measles();
  EXPECT_GT(residual(p, {p.n_total / 2, 0, p.n_total / 4, p.n_total / 4, EquilibriumKind::Endemic}), 0.0);
}

TEST(Endemic, RandomParametersStayFeasible) {
  Gen gen(21);
  for (int k = 0; k < 1000; ++k) {
    const ModelParams p = gen.endemic_params();
    const auto en = endemic(p);
    ASSERT_TRUE(en);
    ASSERT_GE(reproduction_ratio(p), 1.0);
    for (double c : {en->s, en->e, en->i, en->r}) {
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, p.n_total);
    }
    EXPECT_LE(residual(p, *en), 1e-9 * p.n_total) << k;
    EXPECT_NEAR(en->s + en->e + en->i + en->r, p.n_total, 1e-9 * p.n_total);
  }
}

TEST(Endemic, SusceptibleLevelIndependentOfOmega) {
  ModelParams p = measles();
  const double s_ref = endemic(p)->s;
  for (double om = 0.0; om <= 1.0; om += 0.05) {
    p.omega = om;
    EXPECT_EQ(endemic(p)->s, s_ref);
  }
}

TEST(Endemic, ContinuousAtTheThreshold) {
  ModelParams p = measles();
  const double b_crit = (p.mu + p.sigma) * (p.mu + p.gamma) / p.sigma;
  double prev_dist = INFINITY;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    p.beta = b_crit * (1 + eps);
    const auto en = endemic(p);
    ASSERT_TRUE(en);
    const double dist = std::max({std::abs(en->s - p.n_total), en->e, en->i, en->r});
    EXPECT_LT(dist, prev_dist);
    EXPECT_LT(dist, 2 * eps * p.n_total);
    prev_dist = dist;
  }
}
