#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "epictrl/control.hpp"
#include "epictrl/error.hpp"
#include "epictrl/model.hpp"

namespace epictrl {

struct IntegrationConfig {
  double step = 0.01;     ///< days
  double horizon = 50.0;  ///< days
  std::size_t record_stride = 10;
  double switch_tol = 1e-6;  ///< days
  Tolerances tol{};

  bool operator==(const IntegrationConfig& o) const {
    return step == o.step && horizon == o.horizon && record_stride == o.record_stride &&
           switch_tol == o.switch_tol && tol.positivity == o.tol.positivity &&
           tol.conservation == o.tol.conservation;
  }
};

struct Sample {
  State x;
  double v = 0.0;       ///< applied vaccination signal
  double effort = 0.0;  ///< mu N V, people per day
};

struct SwitchEvent {
  double t_s = 0.0;
  State state;  ///< S pinned to zero
};

/// Range of the applied signal over all steps. V outside [0, 1] is reported,
/// not rejected.
struct VRange {
  double v_min = std::numeric_limits<double>::infinity();
  double v_max = -std::numeric_limits<double>::infinity();
  std::optional<double> first_negative_t;
  std::optional<double> first_above_one_t;

  void observe(double v, double t) {
    v_min = std::min(v_min, v);
    v_max = std::max(v_max, v);
    if (v < 0.0 && !first_negative_t) first_negative_t = t;
    if (v > 1.0 && !first_above_one_t) first_above_one_t = t;
  }
};

struct Trajectory {
  std::vector<Sample> samples;
  std::optional<SwitchEvent> switch_event;
  ModelParams params;
  ControlLaw law;
  IntegrationConfig config;
  VRange v_range;
  double max_conservation_error = 0.0;  ///< people
  double min_component = 0.0;           ///< people, over every step

  const Sample& back() const { return samples.back(); }
};

inline void validate_config(const IntegrationConfig& cfg) {
  constexpr std::string_view kMod = "integrate", kOp = "validate_config";
  if (!(cfg.step > 0.0) || !(cfg.horizon > 0.0) || cfg.step > cfg.horizon || !std::isfinite(cfg.horizon))
    throw Error(ErrorCode::InvalidConfig, kMod, kOp, detail::cat("step = ", cfg.step, ", horizon = ", cfg.horizon));
  if (cfg.record_stride == 0) throw Error(ErrorCode::InvalidConfig, kMod, kOp, "record_stride = 0");
  if (!(cfg.switch_tol > 0.0) || cfg.switch_tol >= cfg.step)
    throw Error(ErrorCode::InvalidConfig, kMod, kOp,
                detail::cat("switch_tol = ", cfg.switch_tol, " must lie in (0, step = ", cfg.step, ")"));
  if (!(cfg.tol.positivity >= 0.0) || !(cfg.tol.conservation >= 0.0))
    throw Error(ErrorCode::InvalidConfig, kMod, kOp, "negative tolerance");
}

/// One classical Runge-Kutta-4 step of y' = f(y).
template <std::size_t K, class F>
std::array<double, K> rk4_step(F&& f, const std::array<double, K>& y, double h) {
  auto axpy = [](const std::array<double, K>& a, double s, const std::array<double, K>& b) {
    std::array<double, K> out;
    for (std::size_t j = 0; j < K; ++j) out[j] = a[j] + s * b[j];
    return out;
  };
  const auto k1 = f(y);
  const auto k2 = f(axpy(y, 0.5 * h, k1));
  const auto k3 = f(axpy(y, 0.5 * h, k2));
  const auto k4 = f(axpy(y, h, k3));
  std::array<double, K> out;
  for (std::size_t j = 0; j < K; ++j) out[j] = y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  return out;
}

namespace detail {

inline std::array<double, 4> to_array(const State& x) { return {x.s, x.e, x.i, x.r}; }
inline State to_state(const std::array<double, 4>& y, double t) { return {y[0], y[1], y[2], y[3], t}; }

/// Closed-loop step: the signal is recomputed from every stage state. After
/// the law-2 switch S is frozen.
inline State closed_loop_step(const ModelParams& p, const ControlLaw& law, const State& x, double h, bool switched) {
  auto field = [&](const std::array<double, 4>& y) {
    const State st = to_state(y, 0.0);
    const StateRates d = derivative(p, st, vaccination_signal(p, law, st, switched));
    return std::array<double, 4>{switched ? 0.0 : d.s, d.e, d.i, d.r};
  };
  return to_state(rk4_step(field, to_array(x), h), x.t + h);
}

}  // namespace detail

/// Locates the zero of a continuous, decreasing-through-zero function on
/// [t_lo, t_hi] by bisection, to within `tol`.
template <class SAt>
double bisect_zero_crossing(SAt&& s_at, double t_lo, double t_hi, double tol) {
  double s_lo = s_at(t_lo);
  const double s_hi = s_at(t_hi);
  if (!(t_lo < t_hi) || !(s_lo > 0.0) || !(s_hi <= 0.0))
    throw Error(ErrorCode::NoSignChange, "integrate", "detect_switch",
                detail::cat("S(", t_lo, ") = ", s_lo, ", S(", t_hi, ") = ", s_hi));
  while (t_hi - t_lo > tol) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (s_at(mid) > 0.0) {
      t_lo = mid;
    } else {
      t_hi = mid;
    }
  }
  return 0.5 * (t_lo + t_hi);
}

/// Finds the first time S reaches zero between `x_lo.t` and `t_hi` under the
/// law-2 pre-switch dynamics, re-integrating sub-steps from `x_lo`.
inline SwitchEvent detect_switch(const ModelParams& p, const ControlLaw& law, const State& x_lo, double t_hi,
                                 double switch_tol) {
  auto s_at = [&](double t) {
    return t == x_lo.t ? x_lo.s : detail::closed_loop_step(p, law, x_lo, t - x_lo.t, false).s;
  };
  const double t_s = bisect_zero_crossing(s_at, x_lo.t, t_hi, switch_tol);
  State at = detail::closed_loop_step(p, law, x_lo, t_s - x_lo.t, false);
  at.s = 0.0;
  at.t = t_s;
  return {t_s, at};
}

namespace detail {

inline void check_state(const ModelParams& p, const IntegrationConfig& cfg, const State& x, Trajectory& traj) {
  constexpr std::string_view kMod = "integrate", kOp = "integrate";
  const double n = p.n_total;
  if (!std::isfinite(x.s) || !std::isfinite(x.e) || !std::isfinite(x.i) || !std::isfinite(x.r))
    throw Error(ErrorCode::NonFiniteState, kMod, kOp, cat("state non-finite at t = ", x.t));
  const double lo = std::min({x.s, x.e, x.i, x.r});
  const double hi = std::max({x.s, x.e, x.i, x.r});
  traj.min_component = std::min(traj.min_component, lo);
  const double slack = cfg.tol.positivity * n;
  if (lo < -slack || hi > n + slack)
    throw Error(ErrorCode::PositivityViolated, kMod, kOp,
                cat("component outside [0, N] at t = ", x.t, ": (", x.s, ", ", x.e, ", ", x.i, ", ", x.r, ")"));
  const double drift = std::abs(x.total() - n);
  traj.max_conservation_error = std::max(traj.max_conservation_error, drift);
  if (drift > cfg.tol.conservation * n)
    throw Error(ErrorCode::ConservationViolated, kMod, kOp, cat("|S+E+I+R-N| = ", drift, " at t = ", x.t));
}

}  // namespace detail

/// Integrates the closed loop from `x0` over [0, horizon] with fixed-step RK4.
/// Every step state is checked against the positivity and conservation
/// tolerances; the first violation aborts with an error.
inline Trajectory integrate(const ModelParams& params, const State& x0, const ControlLaw& law,
                            const IntegrationConfig& cfg) {
  constexpr std::string_view kMod = "integrate", kOp = "integrate";
  const ModelParams p = validate_params(params);
  validate_law(p, law);
  validate_config(cfg);
  const double n = p.n_total;
  if (x0.s < 0.0 || x0.e < 0.0 || x0.i < 0.0 || x0.r < 0.0)
    throw Error(ErrorCode::InvalidConfig, kMod, kOp, "initial state has a negative component");
  if (std::abs(x0.total() - n) > cfg.tol.conservation * n)
    throw Error(ErrorCode::InvalidConfig, kMod, kOp, detail::cat("initial total ", x0.total(), " != N = ", n));

  Trajectory traj;
  traj.params = p;
  traj.law = law;
  traj.config = cfg;

  State x = x0;
  x.t = 0.0;
  bool switched = false;
  if (law.kind == LawKind::Law2 && x.s <= 0.0) {
    switched = true;
    x.s = 0.0;
    traj.switch_event = SwitchEvent{0.0, x};
  }

  auto record = [&](const State& st) {
    const double v = vaccination_signal(p, law, st, switched);
    traj.samples.push_back({st, v, p.mu * n * v});
  };
  detail::check_state(p, cfg, x, traj);
  traj.v_range.observe(vaccination_signal(p, law, x, switched), 0.0);
  record(x);

  const auto full_steps = static_cast<std::size_t>(std::floor(cfg.horizon / cfg.step + 1e-9));
  const double covered = static_cast<double>(full_steps) * cfg.step;
  const bool partial_tail = cfg.horizon - covered > 1e-9 * cfg.horizon;
  const std::size_t total_steps = full_steps + (partial_tail ? 1 : 0);

  for (std::size_t k = 0; k < total_steps; ++k) {
    const double t_next = (k + 1 == total_steps) ? cfg.horizon : static_cast<double>(k + 1) * cfg.step;
    const double h = t_next - x.t;
    State next = detail::closed_loop_step(p, law, x, h, switched);
    if (law.kind == LawKind::Law2 && !switched && next.s <= 0.0) {
      SwitchEvent ev = detect_switch(p, law, x, t_next, cfg.switch_tol);
      detail::check_state(p, cfg, ev.state, traj);
      traj.switch_event = ev;
      switched = true;
      next = ev.t_s < t_next ? detail::closed_loop_step(p, law, ev.state, t_next - ev.t_s, true) : ev.state;
    }
    next.t = t_next;
    detail::check_state(p, cfg, next, traj);
    x = next;
    traj.v_range.observe(vaccination_signal(p, law, x, switched), x.t);
    if ((k + 1) % cfg.record_stride == 0 || k + 1 == total_steps) record(x);
  }
  return traj;
}

/// Integrates the reduced (S, I, R) system with E = N - S - I - R under a
/// constant signal `v`. Used to cross-check the full system.
inline std::vector<State> integrate_reduced(const ModelParams& params, const State& x0, double v,
                                            const IntegrationConfig& cfg, double alpha) {
  const ModelParams p = validate_params(params);
  validate_config(cfg);
  const double n = p.n_total;
  auto field = [&](const std::array<double, 3>& y) {
    const ReducedRates d = reduced_derivative(p, y[0], y[1], y[2], v, alpha);
    return std::array<double, 3>{d.s, d.i, d.r};
  };
  std::array<double, 3> y{x0.s, x0.i, x0.r};
  auto make = [&](double t) { return State{y[0], n - y[0] - y[1] - y[2], y[1], y[2], t}; };
  std::vector<State> out{make(0.0)};
  const auto steps = static_cast<std::size_t>(std::llround(cfg.horizon / cfg.step));
  for (std::size_t k = 0; k < steps; ++k) {
    y = rk4_step(field, y, cfg.step);
    if ((k + 1) % cfg.record_stride == 0 || k + 1 == steps) out.push_back(make(static_cast<double>(k + 1) * cfg.step));
  }
  return out;
}

/// Index of the sample with the largest infectious population.
inline std::size_t peak_infectious_index(const Trajectory& traj) {
  const auto it = std::max_element(traj.samples.begin(), traj.samples.end(),
                                   [](const Sample& a, const Sample& b) { return a.x.i < b.x.i; });
  return static_cast<std::size_t>(it - traj.samples.begin());
}

/// Linear interpolation of the stored samples at time t (clamped to the run).
inline Sample sample_at(const Trajectory& traj, double t) {
  const auto& s = traj.samples;
  if (t <= s.front().x.t) return s.front();
  if (t >= s.back().x.t) return s.back();
  const auto it = std::lower_bound(s.begin(), s.end(), t, [](const Sample& a, double tt) { return a.x.t < tt; });
  const Sample& b = *it;
  const Sample& a = *(it - 1);
  const double w = (t - a.x.t) / (b.x.t - a.x.t);
  auto lerp = [w](double u, double v) { return u + w * (v - u); };
  return {State{lerp(a.x.s, b.x.s), lerp(a.x.e, b.x.e), lerp(a.x.i, b.x.i), lerp(a.x.r, b.x.r), t},
          lerp(a.v, b.v), lerp(a.effort, b.effort)};
}

}  // namespace epictrl
