#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "epictrl/equilibria.hpp"
#include "epictrl/error.hpp"
#include "epictrl/model.hpp"

namespace epictrl {

using Complex = std::complex<double>;

/// Real polynomial, coefficients in ascending powers of s.
struct Polynomial {
  std::vector<double> c;

  std::size_t degree() const { return c.empty() ? 0 : c.size() - 1; }
  double coeff(std::size_t k) const { return k < c.size() ? c[k] : 0.0; }

  template <class T>
  T operator()(T s) const {
    T acc{0.0};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + T{*it};
    return acc;
  }

  bool is_zero() const {
    return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial out{std::vector<double>(std::max(a.c.size(), b.c.size()), 0.0)};
    for (std::size_t k = 0; k < out.c.size(); ++k) out.c[k] = a.coeff(k) + b.coeff(k);
    return out;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c.empty() || b.c.empty()) return {};
    Polynomial out{std::vector<double>(a.c.size() + b.c.size() - 1, 0.0)};
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
    return out;
  }
  friend Polynomial operator*(double k, const Polynomial& a) {
    Polynomial out = a;
    for (double& v : out.c) v *= k;
    return out;
  }
};

/// Linearization of the vaccination-free reduced model, rows/cols (S, I, R).
using Jacobian3 = Matrix3;

/// p(s) is the monic cubic of the decoupled loop, p_tilde(s) the quadratic
/// that multiplies beta; p + beta p_tilde is the endemic characteristic
/// polynomial.
struct CharPolyPair {
  Polynomial p;
  Polynomial p_tilde;
  double beta = 0.0;

  Polynomial p2() const { return p + beta * p_tilde; }
};

inline Jacobian3 jacobian_at(const ModelParams& p, double s_star, double i_star) {
  const double n = p.n_total;
  return {{{-p.mu - p.beta * i_star / n, -p.beta * s_star / n, p.omega},
           {-p.sigma, -(p.mu + p.sigma + p.gamma), -p.sigma},
           {0.0, p.gamma, -(p.mu + p.omega)}}};
}

inline Jacobian3 linearize(const ModelParams& p, const EquilibriumPoint& pt) {
  const double res = residual(p, pt);
  if (res > 1e-6 * p.n_total)
    throw Error(ErrorCode::NotAnEquilibrium, "stability", "linearize", detail::cat("residual = ", res));
  return jacobian_at(p, pt.s, pt.i);
}

/// Central-difference Jacobian of the reduced field at (s, i, r), zero signal.
inline Jacobian3 finite_difference_jacobian(const ModelParams& p, double s, double i, double r) {
  const std::array<double, 3> x{s, i, r};
  Jacobian3 jac{};
  for (std::size_t c = 0; c < 3; ++c) {
    const double h = 1e-6 * std::max(1.0, p.n_total);
    auto xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const ReducedRates fp = reduced_derivative(p, xp[0], xp[1], xp[2], 0.0);
    const ReducedRates fm = reduced_derivative(p, xm[0], xm[1], xm[2], 0.0);
    jac[0][c] = (fp.s - fm.s) / (2 * h);
    jac[1][c] = (fp.i - fm.i) / (2 * h);
    jac[2][c] = (fp.r - fm.r) / (2 * h);
  }
  return jac;
}

namespace detail {

inline void sort_roots(std::array<Complex, 3>& z) {
  std::sort(z.begin(), z.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
}

// Roots of s^2 + b s + c without cancellation.
inline std::array<Complex, 2> monic_quadratic_roots(double b, double c) {
  const double disc = b * b - 4.0 * c;
  if (disc >= 0.0) {
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q == 0.0) return {Complex{0.0}, Complex{0.0}};
    return {Complex{q}, Complex{c / q}};
  }
  const double re = -0.5 * b, im = 0.5 * std::sqrt(-disc);
  return {Complex{re, -im}, Complex{re, im}};
}

}  // namespace detail

/// Roots of a3 s^3 + a2 s^2 + a1 s + a0: one real root by the
/// trigonometric/Cardano formula, Newton-polished, then deflation.
inline std::array<Complex, 3> cubic_roots(double a3, double a2, double a1, double a0) {
  if (a3 == 0.0)
    throw Error(ErrorCode::DegenerateLeadingCoefficient, "stability", "cubic_roots", "a3 = 0");
  const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
  // s = y - b/3 gives y^3 + q1 y + q0.
  const double q1 = c - b * b / 3.0;
  const double q0 = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double disc = q0 * q0 / 4.0 + q1 * q1 * q1 / 27.0;
  double y;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    y = std::cbrt(-q0 / 2.0 + sq) + std::cbrt(-q0 / 2.0 - sq);
  } else if (q1 == 0.0) {
    y = 0.0;
  } else {
    const double m = 2.0 * std::sqrt(-q1 / 3.0);
    const double arg = std::clamp(3.0 * q0 / (q1 * m), -1.0, 1.0);
    y = m * std::cos(std::acos(arg) / 3.0);
  }
  double root = y - b / 3.0;
  for (int it = 0; it < 3; ++it) {
    const double f = ((root + b) * root + c) * root + d;
    const double df = (3.0 * root + 2.0 * b) * root + c;
    if (df == 0.0) break;
    const double next = root - f / df;
    if (!std::isfinite(next)) break;
    root = next;
  }
  // s^3 + b s^2 + c s + d = (s - root)(s^2 + e1 s + e0)
  const double e1 = b + root;
  const double e0 = root != 0.0 && std::abs(d) > std::abs(c) * 1e-3 ? -d / root : c + root * e1;
  const auto quad = detail::monic_quadratic_roots(e1, e0);
  std::array<Complex, 3> z{Complex{root}, quad[0], quad[1]};
  detail::sort_roots(z);
  return z;
}

/// Closed-form eigenvalues at the disease-free point, ascending real part.
inline std::array<Complex, 3> disease_free_eigenvalues(const ModelParams& p) {
  const double spread = std::sqrt((p.sigma - p.gamma) * (p.sigma - p.gamma) + 4.0 * p.sigma * p.beta);
  const double centre = 2.0 * p.mu + p.sigma + p.gamma;
  std::array<Complex, 3> z{Complex{-(p.mu + p.omega)}, Complex{-0.5 * (centre + spread)},
                           Complex{-0.5 * (centre - spread)}};
  detail::sort_roots(z);
  return z;
}

/// Stability threshold on beta at the disease-free point.
inline double disease_free_beta_threshold(const ModelParams& p) {
  return (p.mu + p.gamma) * (p.mu + p.sigma) / p.sigma;
}

inline CharPolyPair char_poly_pair_at(const ModelParams& p, double s_star, double i_star) {
  const double a = p.mu + p.sigma + p.gamma;
  const double b = p.mu + p.omega;
  const double sg = p.sigma * p.gamma;
  const Polynomial s_plus_mu{{p.mu, 1.0}}, s_plus_a{{a, 1.0}}, s_plus_b{{b, 1.0}}, sg_const{{sg}};
  CharPolyPair pair;
  pair.beta = p.beta;
  pair.p = s_plus_b * (s_plus_mu * s_plus_a + sg_const);
  pair.p_tilde = (1.0 / p.n_total) *
                 (i_star * (s_plus_a * s_plus_b + sg_const) + (-p.sigma * s_star) * s_plus_b);
  return pair;
}

inline CharPolyPair char_poly_pair(const ModelParams& p) {
  const auto pt = endemic(p);
  if (!pt)
    throw Error(ErrorCode::NoEndemicPoint, "stability", "char_poly_pair",
                detail::cat("reproduction ratio = ", reproduction_ratio(p), " < 1"));
  return char_poly_pair_at(p, pt->s, pt->i);
}

/// True iff every root of a3 s^3 + a2 s^2 + a1 s + a0 lies in the open left
/// half plane.
inline bool routh_hurwitz(double a3, double a2, double a1, double a0) {
  if (a3 == 0.0)
    throw Error(ErrorCode::DegenerateLeadingCoefficient, "stability", "routh_hurwitz", "a3 = 0");
  const double b2 = a2 / a3, b1 = a1 / a3, b0 = a0 / a3;
  return b2 > 0.0 && b1 > 0.0 && b0 > 0.0 && b2 * b1 > b0;
}

inline bool routh_hurwitz(const Polynomial& cubic) {
  return routh_hurwitz(cubic.coeff(3), cubic.coeff(2), cubic.coeff(1), cubic.coeff(0));
}

struct SweepConfig {
  double w_min = 1e-6;  ///< rad/day
  double w_max = 1e6;
  std::size_t points = 2000;
  double rel_tol = 1e-6;
};

/// sup over w >= 0 of |p_tilde(jw) / p(jw)|: logarithmic grid plus
/// golden-section refinement around the grid maximum.
inline double hinf_ratio(const CharPolyPair& pair, const SweepConfig& cfg = {}) {
  if (!routh_hurwitz(pair.p))
    throw Error(ErrorCode::PNotHurwitz, "stability", "hinf_ratio", "p(s) has a root with Re >= 0");
  if (pair.p_tilde.is_zero()) return 0.0;
  if (cfg.points < 2 || !(cfg.w_min > 0.0) || !(cfg.w_max > cfg.w_min))
    throw Error(ErrorCode::InvalidConfig, "stability", "hinf_ratio", "bad sweep grid");

  auto gain = [&](double w) {
    const Complex jw{0.0, w};
    return std::abs(pair.p_tilde(jw)) / std::abs(pair.p(jw));
  };
  const double lo = std::log(cfg.w_min), hi = std::log(cfg.w_max);
  const double dl = (hi - lo) / static_cast<double>(cfg.points - 1);
  double best = gain(0.0);
  std::size_t best_k = 0;
  double best_grid = -1.0;
  for (std::size_t k = 0; k < cfg.points; ++k) {
    const double v = gain(std::exp(lo + dl * static_cast<double>(k)));
    if (v > best_grid) {
      best_grid = v;
      best_k = k;
    }
  }
  best = std::max(best, best_grid);

  double a = lo + dl * static_cast<double>(best_k == 0 ? 0 : best_k - 1);
  double b = lo + dl * static_cast<double>(std::min(best_k + 1, cfg.points - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = gain(std::exp(x1)), f2 = gain(std::exp(x2));
  // Bracket in log-frequency; a width of rel_tol there is a relative width in w.
  while (b - a > cfg.rel_tol) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = gain(std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = gain(std::exp(x2));
    }
  }
  return std::max({best, f1, f2});
}

struct StabilityReport {
  double df_threshold = 0.0;  ///< beta below which the disease-free point is stable
  bool df_stable = false;
  std::array<Complex, 3> df_eigenvalues{};
  bool endemic_exists = false;
  std::optional<EquilibriumPoint> endemic_point;
  std::optional<std::array<Complex, 3>> endemic_eigenvalues;
  std::optional<double> hinf_ratio;  ///< absent when p(s) is not Hurwitz
  bool hinf_condition_met = false;   ///< hinf_ratio < 1 / beta
  bool routh_hurwitz_p2 = false;
  /// hinf_condition_met implies routh_hurwitz_p2 (sufficiency only).
  bool verdict_consistent = true;
};

inline StabilityReport assess(const ModelParams& params, const SweepConfig& sweep = {}) {
  const ModelParams p = validate_params(params);
  StabilityReport rep;
  rep.df_threshold = disease_free_beta_threshold(p);
  rep.df_stable = p.beta < rep.df_threshold;
  rep.df_eigenvalues = disease_free_eigenvalues(p);
  rep.endemic_point = endemic(p);
  rep.endemic_exists = rep.endemic_point.has_value();
  if (!rep.endemic_exists) return rep;

  const CharPolyPair pair = char_poly_pair_at(p, rep.endemic_point->s, rep.endemic_point->i);
  const Polynomial p2 = pair.p2();
  rep.routh_hurwitz_p2 = routh_hurwitz(p2);
  rep.endemic_eigenvalues = cubic_roots(p2.coeff(3), p2.coeff(2), p2.coeff(1), p2.coeff(0));
  if (routh_hurwitz(pair.p)) {
    rep.hinf_ratio = hinf_ratio(pair, sweep);
    rep.hinf_condition_met = p.beta > 0.0 ? *rep.hinf_ratio < 1.0 / p.beta : true;
  }
  rep.verdict_consistent = !rep.hinf_condition_met || rep.routh_hurwitz_p2;
  return rep;
}

}  // namespace epictrl
