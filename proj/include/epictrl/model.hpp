#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "epictrl/error.hpp"

namespace epictrl {

/// Rate constants of the constant-population SEIR model, all per day, and
/// the total population in people.
struct ModelParams {
  double mu = 0.0;     ///< deaths unrelated to the infection
  double omega = 0.0;  ///< loss of immunity
  double beta = 0.0;   ///< transmission constant
  double sigma = 0.0;  ///< inverse latent period
  double gamma = 0.0;  ///< inverse infective period
  double n_total = 0.0;

  bool operator==(const ModelParams&) const = default;
};

/// One point of the state space, in people, at time `t` (days).
struct State {
  double s = 0.0;
  double e = 0.0;
  double i = 0.0;
  double r = 0.0;
  double t = 0.0;

  double total() const { return s + e + i + r; }
  bool operator==(const State&) const = default;
};

/// Time derivative of a State, people per day.
struct StateRates {
  double s = 0.0;
  double e = 0.0;
  double i = 0.0;
  double r = 0.0;

  double sum() const { return s + e + i + r; }
};

/// Derivative of the reduced (S, I, R) system where E = N - S - I - R.
struct ReducedRates {
  double s = 0.0;
  double i = 0.0;
  double r = 0.0;
};

/// Numerical slack on the analytic [0, N] and conservation guarantees, both
/// relative to N.
struct Tolerances {
  double positivity = 1e-9;
  double conservation = 1e-6;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

inline ModelParams validate_params(const ModelParams& raw) {
  constexpr std::string_view kMod = "model", kOp = "validate_params";
  const std::array<std::pair<const char*, double>, 6> fields{{{"mu", raw.mu},
                                                              {"omega", raw.omega},
                                                              {"beta", raw.beta},
                                                              {"sigma", raw.sigma},
                                                              {"gamma", raw.gamma},
                                                              {"n_total", raw.n_total}}};
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value)) throw Error(ErrorCode::NonFinite, kMod, kOp, detail::cat(name, " = ", value));
  }
  for (const auto& [name, value] : fields) {
    if (value < 0.0 && std::string_view(name) != "n_total")
      throw Error(ErrorCode::NegativeRate, kMod, kOp, detail::cat(name, " = ", value));
  }
  if (raw.sigma <= 0.0) throw Error(ErrorCode::ZeroSigma, kMod, kOp, detail::cat("sigma = ", raw.sigma));
  if (raw.n_total <= 0.0)
    throw Error(ErrorCode::NonPositivePopulation, kMod, kOp, detail::cat("n_total = ", raw.n_total));
  return raw;
}

/// Vector field of the SEIR model under vaccination signal `v`.
inline StateRates derivative(const ModelParams& p, const State& x, double v) {
  const double n = p.n_total;
  const double incidence = p.beta * x.s * x.i / n;
  return {
      -p.mu * x.s + p.omega * x.r - incidence + p.mu * n * (1.0 - v),
      incidence - (p.mu + p.sigma) * x.e,
      -(p.mu + p.gamma) * x.i + p.sigma * x.e,
      -(p.mu + p.omega) * x.r + p.gamma * x.i + p.mu * n * v,
  };
}

/// Reduced field with the infected population eliminated through the
/// conservation law. `alpha` is the auxiliary splitting constant of the S
/// equation; it cancels analytically and defaults to beta.
inline ReducedRates reduced_derivative(const ModelParams& p, double s, double i, double r, double v,
                                       double alpha) {
  const double n = p.n_total;
  return {
      -(p.mu + alpha) * s + p.omega * r + (alpha - p.beta * i / n) * s + p.mu * n * (1.0 - v),
      -(p.mu + p.gamma + p.sigma) * i + p.sigma * (n - s - r),
      -(p.mu + p.omega) * r + p.gamma * i + p.mu * n * v,
  };
}

inline ReducedRates reduced_derivative(const ModelParams& p, double s, double i, double r, double v) {
  return reduced_derivative(p, s, i, r, v, p.beta);
}

/// Linear part A(alpha) of the reduced system written as x' = A x + m(t),
/// rows/cols ordered (S, I, R). Off-diagonal entries are nonnegative.
inline Matrix3 metzler_matrix(const ModelParams& p, double alpha) {
  return {{{-(p.mu + alpha), 0.0, p.omega},
           {0.0, -(p.mu + p.gamma + p.sigma), 0.0},
           {0.0, p.gamma, -(p.mu + p.omega)}}};
}

inline bool is_metzler(const Matrix3& a) {
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      if (r != c && a[r][c] < 0.0) return false;
  return true;
}

struct AdmissibilityReport {
  bool initial_nonneg = false;
  bool exposed_lower_ok = false;
  bool exposed_upper_ok = false;
  bool beta_above_threshold = false;
  double beta_threshold = 0.0;
  /// Some strict inequality holds with relative slack below 1e-9.
  bool marginal = false;

  bool admissible() const {
    return initial_nonneg && exposed_lower_ok && exposed_upper_ok && beta_above_threshold;
  }
};

/// Smallest transmission constant compatible with admissible initial data:
/// (mu + gamma)(1 + mu / sigma).
inline double beta_threshold(const ModelParams& p) { return (p.mu + p.gamma) * (1.0 + p.mu / p.sigma); }

inline AdmissibilityReport check_admissibility(const ModelParams& p, const State& x0) {
  constexpr double kMarginal = 1e-9;
  AdmissibilityReport rep;
  auto near = [&](double lhs, double rhs) {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale > 0.0 && std::abs(lhs - rhs) < kMarginal * scale;
  };

  rep.initial_nonneg = x0.s >= 0.0 && x0.i >= 0.0 && x0.r >= 0.0;
  rep.beta_threshold = beta_threshold(p);
  rep.beta_above_threshold = p.beta > rep.beta_threshold;
  rep.marginal = near(p.beta, rep.beta_threshold);

  if (x0.i != 0.0) {
    const double lower = (p.mu + p.gamma) / p.sigma * x0.i;
    const double upper = p.beta * x0.s * x0.i / ((p.mu + p.sigma) * p.n_total);
    rep.exposed_lower_ok = x0.e > lower;
    rep.exposed_upper_ok = x0.e < upper;
    rep.marginal = rep.marginal || near(x0.e, lower) || near(x0.e, upper);
  } else {
    rep.exposed_lower_ok = true;
    rep.exposed_upper_ok = true;
  }
  return rep;
}

/// Largest vaccination signal for which the positivity argument still holds:
/// 1 + (alpha - beta I / N) S / (mu N).
inline double positivity_v_upper_bound(const ModelParams& p, double alpha, const State& x) {
  constexpr std::string_view kMod = "model", kOp = "positivity_v_upper_bound";
  if (p.mu <= 0.0) throw Error(ErrorCode::MuZero, kMod, kOp, detail::cat("mu = ", p.mu));
  const double coupling = p.beta * x.i / p.n_total;
  if (alpha < coupling)
    throw Error(ErrorCode::AlphaTooSmall, kMod, kOp, detail::cat("alpha = ", alpha, " < beta*I/N = ", coupling));
  return 1.0 + (alpha - coupling) * x.s / (p.mu * p.n_total);
}

}  // namespace epictrl
