// epictrl: command-line front end for the SEIR vaccination-control toolkit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epictrl/epictrl.hpp"

namespace fs = std::filesystem;
using namespace epictrl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitIo = 4;

struct Options {
  std::string scenario;
  std::optional<std::string> law;
  std::optional<double> g, g1, k0, step, horizon, window, week_length;
  std::optional<std::string> g1_mode;
  std::optional<std::string> out_dir;
  bool svg = false;
  bool clamp_v = false;
  std::string sweep_param;
  std::vector<double> sweep_values;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("scenario", o.scenario, "built-in name (measles, influenza7, influenza15) or scenario file")
      ->required();
  sub->add_option("--law", o.law, "none|law1|law2");
  sub->add_option("--g", o.g, "feedback gain g, per day");
  sub->add_option("--g1", o.g1, "law-2 offset gain g1, per day");
  sub->add_option("--g1-mode", o.g1_mode, "printed|derived (derived sets g1 = mu+omega+g)");
  sub->add_option("--k0", o.k0, "law-1 gain-condition constant (>= 1)");
  sub->add_option("--step", o.step, "RK4 step, days");
  sub->add_option("--horizon", o.horizon, "simulation horizon, days");
  sub->add_option("--window", o.window, "campaign window, days");
  sub->add_option("--week-length", o.week_length, "campaign week length, days");
  sub->add_option("--out-dir", o.out_dir, "output directory (default: $EPICTRL_OUT_DIR or .)");
  sub->add_flag("--svg", o.svg, "also emit SVG charts");
  sub->add_flag("--clamp-v", o.clamp_v, "clamp V to [0, 1] (changes the closed loop)");
}

LoadedScenario configure(const Options& o) {
  LoadedScenario loaded = load_scenario(o.scenario);
  Scenario sc = loaded.scenario;
  const auto& names = builtin_names();
  const bool builtin = std::find(names.begin(), names.end(), o.scenario) != names.end();
  if (o.law) {
    const LawKind kind = parse_law_kind(*o.law);
    if (builtin) {
      const ControlLaw base = builtin_law(sc.name, kind);
      sc.law.kind = kind;
      sc.law.g = base.g;
      sc.law.g1 = base.g1;
    } else {
      sc.law.kind = kind;
    }
  }
  if (o.g) sc.law.g = *o.g;
  if (o.g1) sc.law.g1 = *o.g1;
  if (o.g1_mode) sc.g1_mode = parse_g1_mode(*o.g1_mode);
  if (o.k0) sc.law.k0 = *o.k0;
  if (o.clamp_v) sc.law.clamp_v = true;
  if (o.step) sc.integration.step = *o.step;
  if (o.window) sc.window = *o.window;
  if (o.horizon) sc.integration.horizon = *o.horizon;
  else if (sc.window > sc.integration.horizon) sc.integration.horizon = sc.window;
  if (o.week_length) sc.week_length = *o.week_length;
  if (o.svg && std::find(sc.outputs.begin(), sc.outputs.end(), "svg") == sc.outputs.end()) sc.outputs.push_back("svg");
  return validate_scenario(sc);
}

fs::path output_dir(const Options& o) {
  fs::path dir = ".";
  if (o.out_dir) dir = *o.out_dir;
  else if (const char* env = std::getenv("EPICTRL_OUT_DIR"); env && *env) dir = env;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cli", "run", detail::cat("cannot create '", dir.string(), "': ", ec.message()));
  return dir;
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cli", "run", detail::cat("cannot write '", path.string(), "'"));
  writer(out);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "cli", "run", detail::cat("write failed for '", path.string(), "'"));
  std::cout << "wrote " << path.string() << "\n";
}

bool wants(const Scenario& sc, const char* what) {
  return std::find(sc.outputs.begin(), sc.outputs.end(), what) != sc.outputs.end();
}

std::string stem(const Scenario& sc) {
  return sc.name + "_" + std::string(to_string(sc.law.kind));
}

void print_warnings(const LoadedScenario& l) {
  for (const auto& w : l.warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_simulate(const Options& o) {
  const LoadedScenario l = configure(o);
  print_warnings(l);
  const Scenario& sc = l.scenario;
  const Trajectory traj = simulate(sc);
  const fs::path dir = output_dir(o);
  if (wants(sc, "csv")) write_file(dir / (stem(sc) + ".csv"), [&](std::ostream& os) { write_trajectory_csv(os, traj); });
  if (wants(sc, "svg")) {
    write_file(dir / (stem(sc) + "_populations.svg"),
               [&](std::ostream& os) { write_population_svg(os, traj, sc.name + ": populations"); });
    if (sc.law.kind != LawKind::None)
      write_file(dir / (stem(sc) + "_effort.svg"),
                 [&](std::ostream& os) { write_effort_svg(os, traj, sc.name + ": vaccination effort"); });
  }
  if (sc.law.kind == LawKind::Law1) {
    const GainCheck gc = law1_gain_check(sc.params, sc.law.g, sc.initial.s, sc.law.k0);
    if (!gc.met)
      std::cerr << "warning: g = " << sc.law.g << " does not exceed the sufficient bound " << gc.bound
                << " (simulation still permitted)\n";
  }
  write_trajectory_summary(std::cout, traj);
  return kExitOk;
}

int cmd_equilibria(const Options& o) {
  const LoadedScenario l = configure(o);
  print_warnings(l);
  write_equilibria_summary(std::cout, l.scenario.params);
  return kExitOk;
}

int cmd_stability(const Options& o) {
  const LoadedScenario l = configure(o);
  print_warnings(l);
  write_stability_summary(std::cout, assess(l.scenario.params), l.scenario.params.beta);
  return kExitOk;
}

int cmd_campaign(const Options& o) {
  const LoadedScenario l = configure(o);
  print_warnings(l);
  const Scenario& sc = l.scenario;
  if (sc.law.kind == LawKind::None)
    throw Error(ErrorCode::ValidationError, "cli", "campaign", "a vaccination law is required (--law law1|law2)");
  const Trajectory traj = simulate(sc);
  const CampaignOutcome c = plan_campaign(sc, traj);
  const fs::path dir = output_dir(o);
  write_file(dir / (stem(sc) + "_campaign_daily.csv"),
             [&](std::ostream& os) { write_cadence_csv(os, c.plan.daily_cadence, "day", 1.0); });
  write_file(dir / (stem(sc) + "_campaign_weekly.csv"),
             [&](std::ostream& os) { write_cadence_csv(os, c.plan.weekly_cadence, "week", c.plan.week_length); });
  write_campaign_summary(std::cout, c);
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  const LoadedScenario l = configure(o);
  print_warnings(l);
  const Scenario& sc = l.scenario;
  const SweepParam param = parse_sweep_param(o.sweep_param);
  const SweepResult res = sweep(sc, param, o.sweep_values);
  const fs::path dir = output_dir(o);
  const std::string base = sc.name + "_sweep_" + std::string(to_string(param));
  write_file(dir / (base + ".csv"), [&](std::ostream& os) { write_sweep_csv(os, res); });
  write_file(dir / (base + "_summary.csv"), [&](std::ostream& os) { write_sweep_summary_csv(os, res); });
  write_sweep_summary_csv(std::cout, res);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and control analysis of the constant-population SEIR model", "epictrl"};
  app.require_subcommand(1);
  Options opts;

  auto* simulate_cmd = app.add_subcommand("simulate", "integrate the closed loop and emit a trajectory CSV");
  auto* equilibria_cmd = app.add_subcommand("equilibria", "print the vaccination-free equilibrium points");
  auto* stability_cmd = app.add_subcommand("stability", "print the local stability report");
  auto* campaign_cmd = app.add_subcommand("campaign", "derive daily and weekly vaccination cadences");
  auto* sweep_cmd = app.add_subcommand("sweep", "run one simulation per parameter value");
  for (auto* sub : {simulate_cmd, equilibria_cmd, stability_cmd, campaign_cmd, sweep_cmd}) add_common(sub, opts);
  sweep_cmd->add_option("--param", opts.sweep_param, "g|g1|beta|omega")->required();
  sweep_cmd->add_option("--values", opts.sweep_values, "comma-separated values")->delimiter(',')->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(opts);
    if (equilibria_cmd->parsed()) return cmd_equilibria(opts);
    if (stability_cmd->parsed()) return cmd_stability(opts);
    if (campaign_cmd->parsed()) return cmd_campaign(opts);
    if (sweep_cmd->parsed()) return cmd_sweep(opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.category()) {
      case ErrorCategory::Validation: return kExitValidation;
      case ErrorCategory::Invariant: return kExitInvariant;
      case ErrorCategory::Io: return kExitIo;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitValidation;
}
