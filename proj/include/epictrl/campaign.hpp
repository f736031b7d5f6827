#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "epictrl/error.hpp"
#include "epictrl/integrate.hpp"

namespace epictrl {

struct CadenceEntry {
  double start = 0.0;            ///< days
  double length = 0.0;           ///< days
  double vaccines_per_day = 0.0;
};

/// Vaccination campaign derived from a simulated effort curve.
struct CampaignPlan {
  double target_n = 0.0;         ///< people to vaccinate
  double effort_integral = 0.0;  ///< integral of mu N V over the window, people
  double f = 0.0;                ///< effort_integral / target_n
  double window = 0.0;           ///< days
  double week_length = 7.0;      ///< days
  std::vector<CadenceEntry> daily_cadence;   ///< one entry per day
  std::vector<CadenceEntry> weekly_cadence;  ///< constant within each week

  static double total(const std::vector<CadenceEntry>& c) {
    double acc = 0.0;
    for (const auto& e : c) acc += e.vaccines_per_day * e.length;
    return acc;
  }
};

inline double target_population(double no_vax_r_star, double vax_r_final) {
  if (no_vax_r_star < 0.0 || vax_r_final < no_vax_r_star)
    throw Error(ErrorCode::NegativeTarget, "campaign", "target_population",
                detail::cat("no_vax_r_star = ", no_vax_r_star, ", vax_r_final = ", vax_r_final));
  return vax_r_final - no_vax_r_star;
}

/// Trapezoidal integral of the stored effort samples over [a, b], with
/// linear interpolation at the ends.
inline double effort_between(const Trajectory& traj, double a, double b) {
  const auto& s = traj.samples;
  double acc = 0.0;
  double t_prev = a;
  double f_prev = sample_at(traj, a).effort;
  for (const auto& smp : s) {
    if (smp.x.t <= a) continue;
    if (smp.x.t >= b) break;
    acc += 0.5 * (f_prev + smp.effort) * (smp.x.t - t_prev);
    t_prev = smp.x.t;
    f_prev = smp.effort;
  }
  acc += 0.5 * (f_prev + sample_at(traj, b).effort) * (b - t_prev);
  return acc;
}

inline double effort_integral(const Trajectory& traj, double window) {
  const double horizon = traj.samples.back().x.t;
  if (window > horizon * (1.0 + 1e-12) || window < 0.0)
    throw Error(ErrorCode::WindowExceedsHorizon, "campaign", "effort_integral",
                detail::cat("window = ", window, ", horizon = ", horizon));
  return effort_between(traj, 0.0, std::min(window, horizon));
}

namespace detail {

inline std::vector<CadenceEntry> bucket_cadence(const Trajectory& traj, double window, double bucket, double f) {
  std::vector<CadenceEntry> out;
  for (double start = 0.0; start < window - 1e-9; start += bucket) {
    const double end = std::min(start + bucket, window);
    const double len = end - start;
    out.push_back({start, len, effort_between(traj, start, end) / (len * f)});
  }
  return out;
}

}  // namespace detail

/// Normalizes the effort curve so that it administers exactly `target_n`
/// vaccines over the window, then buckets it per day and per week.
inline CampaignPlan build_plan_for_target(const Trajectory& traj, double target_n, double window,
                                          double week_length) {
  if (!(target_n > 0.0))
    throw Error(ErrorCode::ZeroTarget, "campaign", "build_plan", detail::cat("target_n = ", target_n));
  if (!(week_length > 0.0) || !(window > 0.0))
    throw Error(ErrorCode::InvalidConfig, "campaign", "build_plan",
                detail::cat("window = ", window, ", week_length = ", week_length));
  CampaignPlan plan;
  plan.target_n = target_n;
  plan.window = window;
  plan.week_length = week_length;
  plan.effort_integral = effort_integral(traj, window);
  plan.f = plan.effort_integral / target_n;
  if (plan.f == 0.0)
    throw Error(ErrorCode::ZeroTarget, "campaign", "build_plan", "zero vaccination effort over the window");
  plan.daily_cadence = detail::bucket_cadence(traj, window, 1.0, plan.f);
  plan.weekly_cadence = detail::bucket_cadence(traj, window, week_length, plan.f);
  return plan;
}

/// Target taken as R at the end of the window minus the vaccination-free
/// steady-state R.
inline CampaignPlan build_plan(const Trajectory& traj, double no_vax_r_star, double window, double week_length) {
  const double r_end = sample_at(traj, window).x.r;
  return build_plan_for_target(traj, target_population(no_vax_r_star, r_end), window, week_length);
}

}  // namespace epictrl
