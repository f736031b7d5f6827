#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "support.hpp"

using namespace epictrl;
using namespace epictrl::testing;

namespace {

// Numeric eigenvalues via Eigen's real Schur decomposition.
std::array<Complex, 3> numeric_eigenvalues(const Matrix3& a) {
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = a[r][c];
  const Eigen::Vector3cd ev = Eigen::EigenSolver<Eigen::Matrix3d>(m, false).eigenvalues();
  std::array<Complex, 3> z{ev[0], ev[1], ev[2]};
  std::sort(z.begin(), z.end(), [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return z;
}

// Independent cofactor expansion of det(sI - J) at a real point.
double det_si_minus(const Matrix3& j, double s) {
  Matrix3 m{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m[r][c] = (r == c ? s : 0.0) - j[r][c];
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Coefficients of det(sI - J) from trace / principal minors / determinant.
Polynomial charpoly_from_matrix(const Matrix3& a) {
  const double tr = a[0][0] + a[1][1] + a[2][2];
  const double minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] - a[0][2] * a[2][0] +
                        a[1][1] * a[2][2] - a[1][2] * a[2][1];
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  return {{-det, minors, -tr, 1.0}};
}

}  // namespace

TEST(Linearize, DiseaseFreeMatrix) {
  const ModelParams p = measles();
  const Jacobian3 j = linearize(p, disease_free(p));
  EXPECT_EQ(j[0][0], -p.mu);
  EXPECT_EQ(j[0][1], -p.beta);
  EXPECT_EQ(j[0][2], p.omega);
  EXPECT_EQ(j[1][0], -p.sigma);
  EXPECT_EQ(j[1][2], -p.sigma);
  EXPECT_EQ(j[2][1], p.gamma);
  EXPECT_EQ(j[1][1], -(p.mu + p.sigma + p.gamma));
  EXPECT_EQ(j[2][2], -(p.mu + p.omega));
}

TEST(Linearize, EndemicEntryAndFiniteDifferences) {
  const ModelParams p = measles();
  const auto en = endemic(p);
  const Jacobian3 j = linearize(p, *en);
  const double i2 = (p.mu + p.omega) * (p.sigma * p.beta - (p.mu + p.sigma) * (p.mu + p.gamma)) /
                    (p.beta * ((p.mu + p.gamma + p.sigma) * (p.mu + p.omega) + p.gamma * p.sigma)) * p.n_total;
  EXPECT_NEAR(j[0][0], -p.mu - p.beta * i2 / p.n_total, 1e-15);
  const Jacobian3 fd = finite_difference_jacobian(p, en->s, en->i, en->r);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(fd[r][c], j[r][c], 1e-6) << r << "," << c;
}

TEST(Linearize, RejectsNonEquilibrium) {
  const ModelParams p = measles();
  try {
    linearize(p, {p.n_total / 2, 0, p.n_total / 4, p.n_total / 4, EquilibriumKind::Endemic});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAnEquilibrium);
  }
}

TEST(DiseaseFreeEigenvalues, Measles) {
  const ModelParams p = measles();
  const auto z = disease_free_eigenvalues(p);
  EXPECT_NEAR(z[0].real(), -0.76114002589715294, 1e-12);
  EXPECT_NEAR(z[1].real(), -5.48e-5, 1e-15);
  EXPECT_NEAR(z[2].real(), 0.38883042589715294, 1e-12);
  const auto num = numeric_eigenvalues(linearize(p, disease_free(p)));
  for (int k = 0; k < 3; ++k) EXPECT_LE(std::abs(z[k] - num[k]), 1e-9);
}

TEST(DiseaseFreeEigenvalues, ZeroTransmission) {
  ModelParams p = influenza(7);
  p.gamma = 0.3;
  p.beta = 0.0;
  const auto z = disease_free_eigenvalues(p);
  std::array<double, 3> expect{-(p.mu + p.sigma), -(p.mu + p.gamma), -(p.mu + p.omega)};
  std::sort(expect.begin(), expect.end());
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(z[k].real(), expect[k], 1e-14);
  const auto num = numeric_eigenvalues(linearize(p, disease_free(p)));
  for (int k = 0; k < 3; ++k) EXPECT_LE(std::abs(z[k] - num[k]), 1e-9);
}

TEST(DiseaseFreeEigenvalues, ZeroAtThreshold) {
  ModelParams p = measles();
  p.beta = disease_free_beta_threshold(p);
  EXPECT_NEAR(disease_free_eigenvalues(p)[2].real(), 0.0, 1e-15);
}

TEST(DiseaseFreeEigenvalues, MatchNumericSolverProperty) {
  Gen gen(31);
  for (int k = 0; k < 1000; ++k) {
    const ModelParams p = gen.params();
    const auto z = disease_free_eigenvalues(p);
    const auto num = numeric_eigenvalues(linearize(p, disease_free(p)));
    for (int j = 0; j < 3; ++j) EXPECT_LE(std::abs(z[j] - num[j]), 1e-9) << k;
  }
}

TEST(CubicRoots, AgainstNumericSolver) {
  Gen gen(32);
  for (int k = 0; k < 500; ++k) {
    const ModelParams p = gen.endemic_params();
    const auto en = endemic(p);
    const Jacobian3 j = jacobian_at(p, en->s, en->i);
    const Polynomial cp = charpoly_from_matrix(j);
    const auto z = cubic_roots(cp.coeff(3), cp.coeff(2), cp.coeff(1), cp.coeff(0));
    const auto num = numeric_eigenvalues(j);
    const double scale = std::max({1.0, std::abs(num[0]), std::abs(num[2])});
    for (int m = 0; m < 3; ++m) EXPECT_LE(std::abs(z[m] - num[m]), 1e-7 * scale) << k;
  }
  const auto z = cubic_roots(1, 6, 11, 6);
  EXPECT_NEAR(z[0].real(), -3, 1e-12);
  EXPECT_NEAR(z[1].real(), -2, 1e-12);
  EXPECT_NEAR(z[2].real(), -1, 1e-12);
  const auto c = cubic_roots(1, 1, 1, 1);  // (s + 1)(s^2 + 1)
  EXPECT_NEAR(c[0].real(), -1, 1e-12);
  EXPECT_NEAR(std::abs(c[1].imag()), 1, 1e-12);
}

TEST(CharPolyPair, ExpandsToFactoredForm) {
  const ModelParams p = measles();
  const CharPolyPair pair = char_poly_pair(p);
  EXPECT_EQ(pair.p.degree(), 3u);
  EXPECT_EQ(pair.p.coeff(3), 1.0);
  const double a = p.mu + p.sigma + p.gamma, b = p.mu + p.omega;
  for (double s : {-2.0, -0.5, 0.0, 0.3, 4.0}) {
    const double direct = (s + b) * ((s + p.mu) * (s + a) + p.sigma * p.gamma);
    EXPECT_NEAR(pair.p(s), direct, 1e-12 * std::max(1.0, std::abs(direct)));
  }
  EXPECT_NEAR(pair.p(0.0), b * (p.mu * a + p.sigma * p.gamma), 1e-18);
}

TEST(CharPolyPair, DeterminantIdentityAtMeasles) {
  const ModelParams p = measles();
  const CharPolyPair pair = char_poly_pair(p);
  const auto en = endemic(p);
  const Jacobian3 j = jacobian_at(p, en->s, en->i);
  // 40-digit reference: 1.373227565428734
  EXPECT_NEAR(det_si_minus(j, 1.0), 1.373227565428734, 1e-12);
  EXPECT_NEAR(pair.p2()(1.0), det_si_minus(j, 1.0), 1e-12);
}

TEST(CharPolyPair, DegenerateInfectiousLimit) {
  const ModelParams p = measles();
  const CharPolyPair pair = char_poly_pair_at(p, 0.3 * p.n_total, 0.0);
  for (double s : {-1.0, 0.0, 2.0})
    EXPECT_NEAR(pair.p_tilde(s), -p.sigma * (s + p.mu + p.omega) * 0.3, 1e-15);
}

TEST(CharPolyPair, CoefficientIdentityProperty) {
  Gen gen(33);
  for (int k = 0; k < 1000; ++k) {
    const ModelParams p = gen.endemic_params();
    const CharPolyPair pair = char_poly_pair(p);
    const auto en = endemic(p);
    const Polynomial direct = charpoly_from_matrix(jacobian_at(p, en->s, en->i));
    const Polynomial p2 = pair.p2();
    for (std::size_t c = 0; c <= 3; ++c) {
      const double scale = std::max({std::abs(direct.coeff(c)), std::abs(p2.coeff(c)), 1e-300});
      // Relative to the largest term that enters the coefficient.
      const double terms = std::abs(pair.p.coeff(c)) + std::abs(p.beta * pair.p_tilde.coeff(c));
      EXPECT_LE(std::abs(p2.coeff(c) - direct.coeff(c)), 1e-9 * std::max(scale, terms)) << k << " c" << c;
    }
  }
}

TEST(CharPolyPair, RequiresEndemicPoint) {
  ModelParams p = measles();
  p.beta = 0.1;
  try {
    char_poly_pair(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoEndemicPoint);
  }
}

TEST(RouthHurwitz, Examples) {
  EXPECT_TRUE(routh_hurwitz(1, 6, 11, 6));
  EXPECT_FALSE(routh_hurwitz(1, 4, 1, -6));
  EXPECT_TRUE(routh_hurwitz(-2, -12, -22, -12));
  EXPECT_FALSE(routh_hurwitz(1, 0, 1, 0));
  EXPECT_TRUE(routh_hurwitz(char_poly_pair(measles()).p));
  try {
    routh_hurwitz(0, 1, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateLeadingCoefficient);
  }
}

TEST(RouthHurwitz, AgreesWithRootsProperty) {
  Gen gen(34);
  for (int k = 0; k < 2000; ++k) {
    const double a2 = gen.uniform(-3, 3), a1 = gen.uniform(-3, 3), a0 = gen.uniform(-3, 3);
    const auto z = cubic_roots(1, a2, a1, a0);
    const bool stable = std::all_of(z.begin(), z.end(), [](const Complex& c) { return c.real() < 0; });
    if (std::abs(a2 * a1 - a0) < 1e-6 || std::abs(a0) < 1e-6) continue;  // root on/near the axis
    EXPECT_EQ(routh_hurwitz(1, a2, a1, a0), stable) << a2 << " " << a1 << " " << a0;
  }
}

TEST(HinfRatio, DominatesDcGainAndZeroForZeroNumerator) {
  const CharPolyPair pair = char_poly_pair(measles());
  const double r = hinf_ratio(pair);
  EXPECT_GE(r, std::abs(pair.p_tilde(0.0) / pair.p(0.0)));
  CharPolyPair zero = pair;
  zero.p_tilde = Polynomial{{0.0, 0.0, 0.0}};
  EXPECT_EQ(hinf_ratio(zero), 0.0);
}

TEST(HinfRatio, AgreesWithDenseSweep) {
  for (const ModelParams& p : {measles(), influenza(7), influenza(15)}) {
    const CharPolyPair pair = char_poly_pair(p);
    // Brute force: 10^6 log-spaced frequencies plus w = 0.
    double dense = std::abs(pair.p_tilde(0.0) / pair.p(0.0));
    const int n = 1000000;
    for (int k = 0; k < n; ++k) {
      const double w = std::pow(10.0, -6.0 + 12.0 * k / (n - 1));
      const Complex jw{0.0, w};
      dense = std::max(dense, std::abs(pair.p_tilde(jw)) / std::abs(pair.p(jw)));
    }
    EXPECT_LE(rel_err(hinf_ratio(pair), dense), 1e-4);
  }
}

TEST(HinfRatio, RejectsNonHurwitzDenominator) {
  ModelParams p = measles();
  p.mu = 0.0;  // omega = 0 too: p(s) has a root at the origin
  const CharPolyPair pair = char_poly_pair(p);
  try {
    hinf_ratio(pair);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PNotHurwitz);
  }
}

TEST(Assess, Measles) {
  const ModelParams p = measles();
  const StabilityReport rep = assess(p);
  EXPECT_FALSE(rep.df_stable);
  EXPECT_NEAR(rep.df_threshold, 0.27420773485784114, 1e-14);
  EXPECT_TRUE(rep.endemic_exists);
  ASSERT_TRUE(rep.hinf_ratio);
  EXPECT_TRUE(rep.verdict_consistent);
  // The endemic Jacobian itself is Hurwitz; the frequency test is only sufficient.
  EXPECT_TRUE(rep.routh_hurwitz_p2);
  const auto num = numeric_eigenvalues(jacobian_at(p, rep.endemic_point->s, rep.endemic_point->i));
  for (int k = 0; k < 3; ++k) EXPECT_LE(std::abs((*rep.endemic_eigenvalues)[k] - num[k]), 1e-9);
}

TEST(Assess, LowTransmission) {
  ModelParams p = measles();
  p.beta = 0.1;
  const StabilityReport rep = assess(p);
  EXPECT_TRUE(rep.df_stable);
  EXPECT_FALSE(rep.endemic_exists);
  for (const auto& z : rep.df_eigenvalues) EXPECT_LT(z.real(), 0.0);
}

TEST(Assess, DiseaseFreeStabilityExcludesEndemicPoint) {
  Gen gen(35);
  for (int k = 0; k < 1000; ++k) {
    const ModelParams p = gen.params();
    const StabilityReport rep = assess(p, {1e-6, 1e6, 200, 1e-6});
    if (rep.df_stable) {
      EXPECT_FALSE(rep.endemic_exists);
    }
    const bool all_negative =
        std::all_of(rep.df_eigenvalues.begin(), rep.df_eigenvalues.end(), [](const Complex& z) { return z.real() < 0; });
    if (p.mu + p.omega > 0 && std::abs(p.beta / rep.df_threshold - 1) > 1e-9) {
      EXPECT_EQ(rep.df_stable, all_negative) << k;
    }
  }
}

TEST(Assess, ThresholdFlipsExactly) {
  ModelParams p = measles();
  const double thr = disease_free_beta_threshold(p);
  p.beta = thr * (1 - 1e-6);
  EXPECT_TRUE(assess(p).df_stable);
  p.beta = thr * (1 + 1e-6);
  EXPECT_FALSE(assess(p).df_stable);
}

TEST(Assess, P2RootsApproachPRootsAsBetaVanishes) {
  // Root-locus limit: hold the equilibrium (S*, I*) fixed and shrink beta.
  const ModelParams p = measles();
  const CharPolyPair pair = char_poly_pair(p);
  const auto base = cubic_roots(pair.p.coeff(3), pair.p.coeff(2), pair.p.coeff(1), pair.p.coeff(0));
  double prev = INFINITY;
  for (double b : {1.0, 1e-2, 1e-4, 1e-6}) {
    CharPolyPair scaled = pair;
    scaled.beta = b;
    const Polynomial p2 = scaled.p2();
    const auto z = cubic_roots(p2.coeff(3), p2.coeff(2), p2.coeff(1), p2.coeff(0));
    double dist = 0.0;
    for (int k = 0; k < 3; ++k) dist = std::max(dist, std::abs(z[k] - base[k]));
    EXPECT_LT(dist, prev);
    prev = dist;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Assess, HinfConditionImpliesRouthHurwitzOnBetaGrid) {
  int met = 0;
  for (const ModelParams& base : {measles(), influenza(7), influenza(15)}) {
    ModelParams p = base;
    const double lo = disease_free_beta_threshold(p);
    for (double f = 1.0001; f < 50.0; f *= 1.05) {
      p.beta = lo * f;
      const StabilityReport rep = assess(p);
      ASSERT_TRUE(rep.endemic_exists);
      if (rep.hinf_condition_met) {
        ++met;
        EXPECT_TRUE(rep.routh_hurwitz_p2) << "beta = " << p.beta;
      }
      EXPECT_TRUE(rep.verdict_consistent);
    }
  }
  EXPECT_GT(met, 0);
}
