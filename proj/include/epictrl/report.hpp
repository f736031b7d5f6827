#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "epictrl/campaign.hpp"
#include "epictrl/equilibria.hpp"
#include "epictrl/integrate.hpp"
#include "epictrl/runner.hpp"
#include "epictrl/stability.hpp"

namespace epictrl {

namespace detail {

template <class... Args>
std::string printf_str(const char* fmt, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

inline std::string complex_str(const Complex& z) {
  if (z.imag() == 0.0) return printf_str("%.10g", z.real());
  return printf_str("%.10g%+.10gi", z.real(), z.imag());
}

}  // namespace detail

inline constexpr const char* kTrajectoryHeader = "t_days,S,E,I,R,S_pct,E_pct,I_pct,R_pct,V,effort_per_day";

/// Writes the stored samples. Every row is re-checked against the
/// conservation and positivity tolerances before it is written.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const double n = traj.params.n_total;
  const auto& tol = traj.config.tol;
  os << kTrajectoryHeader << "\n";
  for (const auto& smp : traj.samples) {
    const State& x = smp.x;
    const double lo = std::min({x.s, x.e, x.i, x.r}), hi = std::max({x.s, x.e, x.i, x.r});
    if (lo < -tol.positivity * n || hi > n + tol.positivity * n)
      throw Error(ErrorCode::PositivityViolated, "cli", "write_trajectory_csv", detail::cat("row t = ", x.t));
    if (std::abs(x.total() - n) > tol.conservation * n)
      throw Error(ErrorCode::ConservationViolated, "cli", "write_trajectory_csv", detail::cat("row t = ", x.t));
    const double k = 100.0 / n;
    os << detail::printf_str("%.6f,%.10g,%.10g,%.10g,%.10g,", x.t, x.s, x.e, x.i, x.r)
       << detail::printf_str("%.6f,%.6f,%.6f,%.6f,", x.s * k, x.e * k, x.i * k, x.r * k)
       << detail::printf_str("%.10g,%.10g\n", smp.v, smp.effort);
  }
}

inline void write_cadence_csv(std::ostream& os, const std::vector<CadenceEntry>& cadence, const char* index_name,
                              double bucket) {
  os << index_name << ",vaccines_per_day\n";
  for (const auto& c : cadence) {
    const auto idx = static_cast<long>(std::llround(c.start / bucket)) + (std::string(index_name) == "week" ? 1 : 0);
    os << idx << detail::printf_str(",%.6f\n", c.vaccines_per_day);
  }
}

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;
};

/// Self-contained 960x540 SVG line chart.
inline void write_svg_chart(std::ostream& os, const std::string& title, const std::string& y_label,
                            const std::vector<ChartSeries>& series) {
  constexpr double W = 960, H = 540, L = 80, R = 180, T = 50, B = 60;
  double x_min = INFINITY, x_max = -INFINITY, y_min = 0.0, y_max = -INFINITY;
  for (const auto& s : series) {
    for (double v : s.x) x_min = std::min(x_min, v), x_max = std::max(x_max, v);
    for (double v : s.y) y_min = std::min(y_min, v), y_max = std::max(y_max, v);
  }
  if (!(x_max > x_min)) x_max = x_min + 1.0;
  if (!(y_max > y_min)) y_max = y_min + 1.0;
  auto px = [&](double v) { return L + (v - x_min) / (x_max - x_min) * (W - L - R); };
  auto py = [&](double v) { return H - B - (v - y_min) / (y_max - y_min) * (H - T - B); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"540\" viewBox=\"0 0 960 540\">\n"
     << "<rect width=\"960\" height=\"540\" fill=\"white\"/>\n"
     << "<text x=\"480\" y=\"30\" font-family=\"sans-serif\" font-size=\"18\" text-anchor=\"middle\">" << title
     << "</text>\n";
  os << detail::printf_str("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", L, H - B,
                           W - R, H - B)
     << detail::printf_str("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", L, T, L,
                           H - B);
  for (int k = 0; k <= 5; ++k) {
    const double xv = x_min + (x_max - x_min) * k / 5.0, yv = y_min + (y_max - y_min) * k / 5.0;
    os << detail::printf_str(
              "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">%.4g</text>\n",
              px(xv), H - B + 18, xv)
       << detail::printf_str(
              "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">%.4g</text>\n",
              L - 6, py(yv) + 4, yv);
  }
  os << detail::printf_str(
            "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">t (days)</text>\n",
            (L + W - R) / 2, H - 15)
     << "<text x=\"20\" y=\"270\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 20 270)\">"
     << y_label << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < s.x.size() && j < s.y.size(); ++j)
      os << detail::printf_str("%.2f,%.2f ", px(s.x[j]), py(s.y[j]));
    os << "\"/>\n";
    const double ly = T + 20 + 20 * static_cast<double>(k);
    os << detail::printf_str("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"", W - R + 15, ly,
                             W - R + 40, ly)
       << s.color << "\" stroke-width=\"2\"/>\n"
       << detail::printf_str("<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"13\">", W - R + 46,
                             ly + 4)
       << s.label << "</text>\n";
  }
  os << "</svg>\n";
}

inline void write_population_svg(std::ostream& os, const Trajectory& traj, const std::string& title) {
  std::vector<double> t, s, e, i, r;
  const double k = 100.0 / traj.params.n_total;
  for (const auto& smp : traj.samples) {
    t.push_back(smp.x.t);
    s.push_back(smp.x.s * k);
    e.push_back(smp.x.e * k);
    i.push_back(smp.x.i * k);
    r.push_back(smp.x.r * k);
  }
  write_svg_chart(os, title, "% of N",
                  {{"S", t, s, "#1f77b4"}, {"E", t, e, "#ff7f0e"}, {"I", t, i, "#d62728"}, {"R", t, r, "#2ca02c"}});
}

inline void write_effort_svg(std::ostream& os, const Trajectory& traj, const std::string& title) {
  std::vector<double> t, eff;
  const double k = 100.0 / traj.params.n_total;
  for (const auto& smp : traj.samples) {
    t.push_back(smp.x.t);
    eff.push_back(smp.effort * k);
  }
  write_svg_chart(os, title, "mu N V(t), % of N per day", {{"effort", t, eff, "#9467bd"}});
}

inline void write_trajectory_summary(std::ostream& os, const Trajectory& traj) {
  const double k = 100.0 / traj.params.n_total;
  const Sample& peak = traj.samples[peak_infectious_index(traj)];
  const Sample& last = traj.back();
  os << "law: " << to_string(traj.law.kind);
  if (traj.law.kind != LawKind::None) os << detail::printf_str(" g=%.10g", traj.law.g);
  if (traj.law.kind == LawKind::Law2) os << detail::printf_str(" g1=%.10g", traj.law.g1);
  os << "\n"
     << detail::printf_str("peak I: %.4f%% of N at day %.2f\n", peak.x.i * k, peak.x.t)
     << detail::printf_str("final (t=%.2f): S=%.4f%% E=%.4f%% I=%.4f%% R=%.4f%%\n", last.x.t, last.x.s * k,
                           last.x.e * k, last.x.i * k, last.x.r * k)
     << detail::printf_str("V range: [%.6g, %.6g]\n", traj.v_range.v_min, traj.v_range.v_max)
     << detail::printf_str("max |S+E+I+R-N|: %.3g people\n", traj.max_conservation_error);
  if (traj.v_range.first_negative_t) os << detail::printf_str("note: V < 0 first at t=%.4f\n", *traj.v_range.first_negative_t);
  if (traj.v_range.first_above_one_t)
    os << detail::printf_str("note: V > 1 first at t=%.4f\n", *traj.v_range.first_above_one_t);
  if (traj.switch_event) os << detail::printf_str("switch: S reaches 0 at t_s=%.6f\n", traj.switch_event->t_s);
  else if (traj.law.kind == LawKind::Law2) os << "switch: none within the horizon\n";
}

inline void write_equilibria_summary(std::ostream& os, const ModelParams& p) {
  const double k = 100.0 / p.n_total;
  const auto df = disease_free(p);
  os << detail::printf_str("disease-free: S=%.10g E=0 I=0 R=0 (residual %.3g)\n", df.s, residual(p, df));
  os << detail::printf_str("reproduction ratio: %.10g\n", reproduction_ratio(p));
  if (const auto en = endemic(p)) {
    os << detail::printf_str("endemic: S=%.10g E=%.10g I=%.10g R=%.10g\n", en->s, en->e, en->i, en->r)
       << detail::printf_str("endemic %%: S=%.4f E=%.4f I=%.4f R=%.4f\n", en->s * k, en->e * k, en->i * k, en->r * k)
       << detail::printf_str("endemic residual: %.3g\n", residual(p, *en));
    if (en->degenerate) os << "endemic point is degenerate (coincides with disease-free)\n";
  } else {
    os << "endemic: none (reproduction ratio < 1)\n";
  }
}

inline void write_stability_summary(std::ostream& os, const StabilityReport& rep, double beta) {
  os << detail::printf_str("disease-free beta threshold: %.10g\n", rep.df_threshold)
     << "disease-free stable: " << (rep.df_stable ? "yes" : "no") << "\n"
     << "disease-free eigenvalues: ";
  for (const auto& z : rep.df_eigenvalues) os << detail::complex_str(z) << " ";
  os << "\nendemic exists: " << (rep.endemic_exists ? "yes" : "no") << "\n";
  if (!rep.endemic_exists) return;
  os << "endemic eigenvalues: ";
  for (const auto& z : *rep.endemic_eigenvalues) os << detail::complex_str(z) << " ";
  os << "\n";
  if (rep.hinf_ratio)
    os << detail::printf_str("hinf ratio: %.10g (1/beta = %.10g)\n", *rep.hinf_ratio, 1.0 / beta);
  else
    os << "hinf ratio: undefined (p(s) not Hurwitz)\n";
  os << "hinf condition met: " << (rep.hinf_condition_met ? "yes" : "no") << "\n"
     << "routh-hurwitz on p2: " << (rep.routh_hurwitz_p2 ? "stable" : "unstable") << "\n"
     << "verdicts consistent: " << (rep.verdict_consistent ? "yes" : "no") << "\n";
}

inline void write_campaign_summary(std::ostream& os, const CampaignOutcome& c) {
  os << detail::printf_str("vaccination-free R*: %.6f\n", c.no_vax_r_star)
     << detail::printf_str("R at window end: %.6f\n", c.vax_r_final)
     << detail::printf_str("target n: %.6f (rounded to 0.1%% of N: %.0f)\n", c.plan.target_n, c.rounded_target)
     << detail::printf_str("effort integral over %.4g days: %.6f\n", c.plan.window, c.plan.effort_integral)
     << detail::printf_str("f: %.6f (with rounded target: %.6f)\n", c.plan.f, c.f_rounded);
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& res) {
  os << "t_days";
  for (const auto& row : res.rows) os << ",I_" << to_string(res.param) << "=" << detail::printf_str("%.10g", row.value);
  os << "\n";
  std::size_t rows = 0;
  for (const auto& t : res.trajectories) rows = std::max(rows, t.samples.size());
  for (std::size_t j = 0; j < rows; ++j) {
    const auto& ref = res.trajectories.front().samples;
    os << detail::printf_str("%.6f", j < ref.size() ? ref[j].x.t : NAN);
    for (const auto& t : res.trajectories) os << (j < t.samples.size() ? detail::printf_str(",%.10g", t.samples[j].x.i) : ",");
    os << "\n";
  }
}

inline void write_sweep_summary_csv(std::ostream& os, const SweepResult& res) {
  os << to_string(res.param) << ",peak_I,peak_day,R_window_end\n";
  for (const auto& row : res.rows)
    os << detail::printf_str("%.10g,%.10g,%.6f,%.10g\n", row.value, row.peak_i, row.peak_day, row.r_window_end);
}

}  // namespace epictrl
