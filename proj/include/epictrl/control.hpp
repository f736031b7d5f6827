#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "epictrl/error.hpp"
#include "epictrl/model.hpp"

namespace epictrl {

enum class LawKind { None, Law1, Law2 };

/// How the law-2 offset gain g1 is chosen: taken as given, or derived as
/// mu + omega + g so that the removed population tracks N exactly.
enum class G1Mode { Printed, Derived };

/// Active vaccination rule and its gains.
struct ControlLaw {
  LawKind kind = LawKind::None;
  double g = 0.0;   ///< per day
  double g1 = 0.0;  ///< per day, law 2 only
  double k0 = 1.0;  ///< gain-condition constant of law 1
  bool clamp_v = false;

  static ControlLaw none() { return {}; }
  static ControlLaw law1(double g, double k0 = 1.0) { return {LawKind::Law1, g, 0.0, k0, false}; }
  static ControlLaw law2(double g, double g1) { return {LawKind::Law2, g, g1, 1.0, false}; }

  bool operator==(const ControlLaw&) const = default;
};

inline constexpr std::string_view to_string(LawKind k) {
  switch (k) {
    case LawKind::None: return "none";
    case LawKind::Law1: return "law1";
    case LawKind::Law2: return "law2";
  }
  return "none";
}

inline constexpr std::string_view to_string(G1Mode m) { return m == G1Mode::Printed ? "printed" : "derived"; }

inline double derived_g1(const ModelParams& p, double g) { return p.mu + p.omega + g; }

inline double resolve_g1(const ModelParams& p, double g, double printed_g1, G1Mode mode) {
  return mode == G1Mode::Derived ? derived_g1(p, g) : printed_g1;
}

/// Rejects gains outside the convergence conditions of each law. Returns
/// non-fatal findings (e.g. a printed g1 slightly below mu + omega + g).
inline std::vector<std::string> validate_law(const ModelParams& p, const ControlLaw& law) {
  constexpr std::string_view kMod = "control", kOp = "validate_law";
  std::vector<std::string> warnings;
  if (!std::isfinite(law.g) || !std::isfinite(law.g1) || !std::isfinite(law.k0))
    throw Error(ErrorCode::NonFinite, kMod, kOp, detail::cat("g = ", law.g, ", g1 = ", law.g1, ", k0 = ", law.k0));
  switch (law.kind) {
    case LawKind::None:
      break;
    case LawKind::Law1:
      if (law.g <= 0.0) throw Error(ErrorCode::NonPositiveGain, kMod, kOp, detail::cat("g = ", law.g));
      if (law.k0 < 1.0) throw Error(ErrorCode::InvalidConfig, kMod, kOp, detail::cat("k0 = ", law.k0, " < 1"));
      break;
    case LawKind::Law2: {
      const double floor = p.mu + p.omega + law.g;
      if (floor <= 0.0)
        throw Error(ErrorCode::GainTooNegative, kMod, kOp, detail::cat("g = ", law.g, " <= -(mu+omega)"));
      if (law.g1 < floor)
        warnings.push_back(detail::cat("g1 = ", law.g1, " is below mu+omega+g = ", floor,
                                       "; R(inf) settles below N"));
      break;
    }
  }
  return warnings;
}

namespace detail {

inline void require_mu_n(const ModelParams& p, std::string_view op) {
  if (p.mu * p.n_total <= 0.0) throw Error(ErrorCode::MuZero, "control", op, cat("mu = ", p.mu));
}

// h(x) = exp(-(mu + x) t). First and second divided differences in x, with
// the confluent limits -t h(a) and t^2 h(a) / 2.
inline double exp_dd1(double mu, double a, double b, double t) {
  const double ha = std::exp(-(mu + a) * t);
  if (a == b) return -t * ha;
  return ha * std::expm1(-(b - a) * t) / (b - a);
}

inline double exp_dd2(double mu, double a, double b, double c, double t) {
  std::array<double, 3> x{a, b, c};
  std::sort(x.begin(), x.end());
  if (x[0] == x[2]) return 0.5 * t * t * std::exp(-(mu + x[0]) * t);
  return (exp_dd1(mu, x[1], x[2], t) - exp_dd1(mu, x[0], x[1], t)) / (x[2] - x[0]);
}

inline bool coincide(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace detail

/// Law 1: V = [omega R + (g - beta I / N) S + mu N] / (mu N). Closes the
/// loop as S' = -(mu + g) S.
inline double law1_v(const ModelParams& p, double g, const State& x) {
  detail::require_mu_n(p, "law1_v");
  const double mun = p.mu * p.n_total;
  return (p.omega * x.r + (g - p.beta * x.i / p.n_total) * x.s + mun) / mun;
}

/// Law 2. Before the switch V = (g1 N - g R - gamma I) / (mu N); once S has
/// reached zero, V = (mu N + omega R) / (mu N), which keeps S' = 0.
inline double law2_v(const ModelParams& p, double g, double g1, const State& x, bool switched) {
  detail::require_mu_n(p, "law2_v");
  const double mun = p.mu * p.n_total;
  if (switched) return (mun + p.omega * x.r) / mun;
  return (g1 * p.n_total - g * x.r - p.gamma * x.i) / mun;
}

inline double vaccination_signal(const ModelParams& p, const ControlLaw& law, const State& x, bool switched) {
  double v = 0.0;
  switch (law.kind) {
    case LawKind::None: v = 0.0; break;
    case LawKind::Law1: v = law1_v(p, law.g, x); break;
    case LawKind::Law2: v = law2_v(p, law.g, law.g1, x, switched); break;
  }
  return law.clamp_v ? std::clamp(v, 0.0, 1.0) : v;
}

struct GainCheck {
  double bound = 0.0;  ///< g must exceed this
  bool met = false;
};

/// Sufficient gain of law 1: min{sigma, gamma} + k0 beta S(0) / N.
inline double law1_min_gain(const ModelParams& p, double s0, double k0) {
  if (k0 < 1.0 || s0 < 0.0 || s0 > p.n_total)
    throw Error(ErrorCode::InvalidConfig, "control", "law1_min_gain", detail::cat("k0 = ", k0, ", s0 = ", s0));
  return std::min(p.sigma, p.gamma) + k0 * p.beta * s0 / p.n_total;
}

/// Initial-condition-free variant (S(0) replaced by N).
inline double law1_min_gain_uniform(const ModelParams& p, double k0) { return law1_min_gain(p, p.n_total, k0); }

/// Advisory only: simulations are allowed below the bound.
inline GainCheck law1_gain_check(const ModelParams& p, double g, double s0, double k0) {
  const double b = law1_min_gain(p, s0, k0);
  return {b, g > b};
}

inline double law1_s_closed_form(const ModelParams& p, double g, double s0, double t) {
  return s0 * std::exp(-(p.mu + g) * t);
}

struct Envelopes {
  double e_bound = 0.0;
  double i_bound = 0.0;
  /// g, sigma and gamma are not pairwise distinct, so confluent limits were used.
  bool limiting_case = false;
};

/// Analytic upper envelopes of E(t) and I(t) under law 1. `m_i` must bound
/// I over [0, t].
inline Envelopes law1_envelopes(const ModelParams& p, double g, double s0, double e0, double i0, double m_i,
                                double t) {
  if (g <= 0.0) throw Error(ErrorCode::NonPositiveGain, "control", "law1_envelopes", detail::cat("g = ", g));
  const double mu = p.mu, sg = p.sigma, gm = p.gamma;
  const double forcing = p.beta * s0 * m_i / p.n_total;
  Envelopes env;
  env.limiting_case = detail::coincide(g, sg) || detail::coincide(g, gm) || detail::coincide(sg, gm);
  env.e_bound = std::exp(-(mu + sg) * t) * e0 - forcing * detail::exp_dd1(mu, g, sg, t);
  env.i_bound = std::exp(-(mu + gm) * t) * i0 - sg * e0 * detail::exp_dd1(mu, sg, gm, t) +
                sg * forcing * detail::exp_dd2(mu, g, sg, gm, t);
  return env;
}

/// Bound on max ||(E, I)|| over the run when g exceeds law1_min_gain.
inline double law1_boundedness_bound(const ModelParams& p, double g, double k0, double s0, double z0_norm) {
  const double margin = p.n_total * (g - std::min(p.sigma, p.gamma));
  const double denom = margin - k0 * p.beta * s0;
  if (denom <= 0.0)
    throw Error(ErrorCode::InvalidConfig, "control", "law1_boundedness_bound",
                detail::cat("g = ", g, " does not exceed ", law1_min_gain(p, s0, k0)));
  return k0 * margin / denom * z0_norm;
}

struct Law2Asymptotics {
  double r_inf = 0.0;
  double sei_inf = 0.0;
};

/// Limits of law 2 when S never reaches zero.
inline Law2Asymptotics law2_asymptotics(const ModelParams& p, double g, double g1) {
  const double k = p.mu + p.omega + g;
  if (k <= 0.0) throw Error(ErrorCode::GainTooNegative, "control", "law2_asymptotics", detail::cat("g = ", g));
  const double n = p.n_total;
  return {g1 * n / k, (k - g1) * n / k};
}

/// Pre-switch solution of R' = -(mu + omega + g) R + g1 N.
inline double law2_r_closed_form(const ModelParams& p, double g, double g1, double r0, double t) {
  const double k = p.mu + p.omega + g;
  const double decay = std::exp(-k * t);
  return r0 * decay - g1 * p.n_total * std::expm1(-k * t) / k;
}

struct Law2Certificates {
  bool offset_dominates_gamma = false;   ///< g1 = mu+omega+g and g1 >= gamma
  bool gamma_matches_turnover = false;   ///< g1 = mu+omega+g, g >= 0 and gamma = mu+omega
  bool infectious_ceiling = false;       ///< min{1, ratio} <= (mu+omega)/gamma
  bool ceiling_vacuous = false;          ///< gamma = 0

  bool certified() const { return offset_dominates_gamma || gamma_matches_turnover || infectious_ceiling; }
};

/// Sufficient conditions for law 2 to keep V >= 0. All false means "not
/// certified", not "negative".
inline Law2Certificates law2_nonneg_certificates(const ModelParams& p, double g, double g1) {
  Law2Certificates c;
  const double turnover = p.mu + p.omega;
  const bool tracking = detail::coincide(g1, turnover + g);
  c.offset_dominates_gamma = tracking && g1 >= p.gamma;
  c.gamma_matches_turnover = tracking && g >= 0.0 && detail::coincide(p.gamma, turnover);
  if (p.gamma == 0.0) {
    c.ceiling_vacuous = true;
    c.infectious_ceiling = true;
  } else {
    const double denom = (p.mu + p.sigma) * (p.mu + p.gamma);
    const double ratio = denom > 0.0 ? p.sigma * p.beta / denom : INFINITY;
    c.infectious_ceiling = std::min(1.0, ratio) <= turnover / p.gamma;
  }
  return c;
}

struct ExposedInfectious {
  double e = 0.0;
  double i = 0.0;
};

/// E and I after the law-2 switch, when S stays at zero.
inline ExposedInfectious law2_post_switch_closed_forms(const ModelParams& p, const State& at_switch, double t) {
  const double tau = t - at_switch.t;
  if (tau < 0.0)
    throw Error(ErrorCode::InvalidConfig, "control", "law2_post_switch_closed_forms",
                detail::cat("t = ", t, " < t_s = ", at_switch.t));
  return {at_switch.e * std::exp(-(p.mu + p.sigma) * tau),
          at_switch.i * std::exp(-(p.mu + p.gamma) * tau) -
              p.sigma * at_switch.e * detail::exp_dd1(p.mu, p.sigma, p.gamma, tau)};
}

}  // namespace epictrl
