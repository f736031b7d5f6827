#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "epictrl/campaign.hpp"
#include "epictrl/equilibria.hpp"
#include "epictrl/integrate.hpp"
#include "epictrl/scenario.hpp"

namespace epictrl {

inline Trajectory simulate(const Scenario& sc) {
  return integrate(sc.params, sc.initial, sc.effective_law(), sc.integration);
}

struct CampaignOutcome {
  CampaignPlan plan;
  double no_vax_r_star = 0.0;  ///< R at the vaccination-free endemic point (0 if none)
  double vax_r_final = 0.0;    ///< R at the end of the window
  /// Target rounded to the nearest 0.1 % of N and the factor it implies.
  double rounded_target = 0.0;
  double f_rounded = 0.0;
};

inline CampaignOutcome plan_campaign(const Scenario& sc, const Trajectory& traj) {
  CampaignOutcome out;
  const double n = sc.params.n_total;
  if (const auto pt = endemic(sc.params)) out.no_vax_r_star = pt->r;
  out.vax_r_final = sample_at(traj, sc.window).x.r;
  double target = 0.0;
  switch (sc.target_mode) {
    case TargetMode::Endpoint: target = target_population(out.no_vax_r_star, out.vax_r_final); break;
    case TargetMode::Full: target = target_population(out.no_vax_r_star, n); break;
    case TargetMode::Explicit: target = sc.target_people; break;
  }
  out.plan = build_plan_for_target(traj, target, sc.window, sc.week_length);
  const double grain = 1e-3 * n;
  out.rounded_target = std::round(target / grain) * grain;
  out.f_rounded = out.rounded_target > 0.0 ? out.plan.effort_integral / out.rounded_target : 0.0;
  return out;
}

enum class SweepParam { G, G1, Beta, Omega };

inline SweepParam parse_sweep_param(const std::string& s) {
  if (s == "g") return SweepParam::G;
  if (s == "g1") return SweepParam::G1;
  if (s == "beta") return SweepParam::Beta;
  if (s == "omega") return SweepParam::Omega;
  throw Error(ErrorCode::ParseError, "cli", "sweep", detail::cat("parameter '", s, "' (expected g|g1|beta|omega)"));
}

inline constexpr std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::G: return "g";
    case SweepParam::G1: return "g1";
    case SweepParam::Beta: return "beta";
    case SweepParam::Omega: return "omega";
  }
  return "g";
}

struct SweepRow {
  double value = 0.0;
  double peak_i = 0.0;    ///< people
  double peak_day = 0.0;
  double r_window_end = 0.0;
};

struct SweepResult {
  SweepParam param = SweepParam::G;
  std::vector<SweepRow> rows;
  std::vector<Trajectory> trajectories;
};

inline Scenario with_value(Scenario sc, SweepParam param, double value) {
  switch (param) {
    case SweepParam::G: sc.law.g = value; break;
    case SweepParam::G1: sc.law.g1 = value; break;
    case SweepParam::Beta: sc.params.beta = value; break;
    case SweepParam::Omega: sc.params.omega = value; break;
  }
  return sc;
}

/// One run per value, in the given order.
inline SweepResult sweep(const Scenario& sc, SweepParam param, const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::EmptySweep, "cli", "sweep", "empty value list");
  SweepResult res;
  res.param = param;
  for (double v : values) {
    const Scenario run = with_value(sc, param, v);
    validate_scenario(run);
    Trajectory traj = simulate(run);
    const Sample& peak = traj.samples[peak_infectious_index(traj)];
    res.rows.push_back({v, peak.x.i, peak.x.t, sample_at(traj, std::min(run.window, traj.back().x.t)).x.r});
    res.trajectories.push_back(std::move(traj));
  }
  return res;
}

}  // namespace epictrl
