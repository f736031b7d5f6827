#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "epictrl/control.hpp"
#include "epictrl/equilibria.hpp"
#include "epictrl/error.hpp"
#include "epictrl/integrate.hpp"
#include "epictrl/model.hpp"

namespace epictrl {

/// How the number of people to vaccinate is chosen for a campaign.
///  - Endpoint: R at the end of the window minus the vaccination-free R.
///  - Full:     N minus the vaccination-free R (everyone ends up immune).
///  - Explicit: `target_people` as given.
enum class TargetMode { Endpoint, Full, Explicit };

inline constexpr std::string_view to_string(TargetMode m) {
  switch (m) {
    case TargetMode::Endpoint: return "endpoint";
    case TargetMode::Full: return "full";
    case TargetMode::Explicit: return "explicit";
  }
  return "endpoint";
}

struct Scenario {
  std::string name;
  ModelParams params;
  State initial;
  ControlLaw law;
  G1Mode g1_mode = G1Mode::Printed;
  IntegrationConfig integration;
  double window = 50.0;       ///< days
  double week_length = 7.0;   ///< days
  TargetMode target_mode = TargetMode::Endpoint;
  double target_people = 0.0;
  std::vector<std::string> outputs{"csv", "summary"};

  bool operator==(const Scenario&) const = default;

  /// Law with g1 resolved according to `g1_mode`.
  ControlLaw effective_law() const {
    ControlLaw l = law;
    if (l.kind == LawKind::Law2) l.g1 = resolve_g1(params, l.g, l.g1, g1_mode);
    return l;
  }
};

struct LoadedScenario {
  Scenario scenario;
  AdmissibilityReport admissibility;
  std::vector<std::string> warnings;
};

namespace detail {

inline Scenario measles_base() {
  Scenario sc;
  sc.name = "measles";
  sc.params = {5.48e-5, 0.0, 3.288, 9.82e-2, 0.274, 1e6};
  sc.initial = {9.8e5, 1.5e4, 5000.0, 0.0, 0.0};
  sc.integration.horizon = 50.0;
  sc.window = 50.0;
  sc.target_mode = TargetMode::Full;
  return sc;
}

inline Scenario influenza_base(double immunity_days) {
  Scenario sc;
  sc.name = immunity_days == 7.0 ? "influenza7" : "influenza15";
  sc.params = {1.0 / 25550.0, 1.0 / immunity_days, 1.66, 1.0 / 2.2, 1.0 / 2.2, 1000.0};
  sc.initial = {980.0, 15.0, 5.0, 0.0, 0.0};
  sc.integration.horizon = 49.0;
  sc.window = 49.0;
  sc.target_mode = TargetMode::Endpoint;
  return sc;
}

}  // namespace detail

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"measles", "influenza7", "influenza15"};
  return names;
}

/// Gains used with each law in the reference runs of the built-in scenarios.
/// The law-2 g1 is the printed value; derive it with G1Mode::Derived.
inline ControlLaw builtin_law(const std::string& name, LawKind kind) {
  if (kind == LawKind::None) return ControlLaw::none();
  if (name == "measles") return kind == LawKind::Law1 ? ControlLaw::law1(0.25) : ControlLaw::law2(0.0999, 0.1);
  if (name == "influenza7") return kind == LawKind::Law1 ? ControlLaw::law1(0.1) : ControlLaw::law2(-0.015, 0.1297);
  if (name == "influenza15") return kind == LawKind::Law1 ? ControlLaw::law1(0.1) : ControlLaw::law2(-0.015, 0.0517);
  throw Error(ErrorCode::UnknownBuiltin, "cli", "builtin_law", name);
}

inline Scenario builtin_scenario(const std::string& name) {
  if (name == "measles") return detail::measles_base();
  if (name == "influenza7") return detail::influenza_base(7.0);
  if (name == "influenza15") return detail::influenza_base(15.0);
  throw Error(ErrorCode::UnknownBuiltin, "cli", "load_scenario", detail::cat("'", name, "'"));
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

inline LawKind parse_law_kind(const std::string& s) {
  if (s == "none") return LawKind::None;
  if (s == "law1") return LawKind::Law1;
  if (s == "law2") return LawKind::Law2;
  throw Error(ErrorCode::ParseError, "cli", "parse_law", detail::cat("law = '", s, "' (expected none|law1|law2)"));
}

inline G1Mode parse_g1_mode(const std::string& s) {
  if (s == "printed") return G1Mode::Printed;
  if (s == "derived") return G1Mode::Derived;
  throw Error(ErrorCode::ParseError, "cli", "parse_g1_mode", detail::cat("g1_mode = '", s, "' (expected printed|derived)"));
}

inline TargetMode parse_target_mode(const std::string& s) {
  if (s == "endpoint") return TargetMode::Endpoint;
  if (s == "full") return TargetMode::Full;
  if (s == "explicit") return TargetMode::Explicit;
  throw Error(ErrorCode::ParseError, "cli", "parse_target_mode",
              detail::cat("target_mode = '", s, "' (expected endpoint|full|explicit)"));
}

/// Flat `key = value` text with units in the key names; '#' starts a comment.
inline void write_scenario(std::ostream& os, const Scenario& sc) {
  using detail::fmt_double;
  const auto& p = sc.params;
  const auto& c = sc.integration;
  os << "# epictrl scenario\n"
     << "name = " << sc.name << "\n"
     << "mu_per_day = " << fmt_double(p.mu) << "\n"
     << "omega_per_day = " << fmt_double(p.omega) << "\n"
     << "beta_per_day = " << fmt_double(p.beta) << "\n"
     << "sigma_per_day = " << fmt_double(p.sigma) << "\n"
     << "gamma_per_day = " << fmt_double(p.gamma) << "\n"
     << "n_total_people = " << fmt_double(p.n_total) << "\n"
     << "s0_people = " << fmt_double(sc.initial.s) << "\n"
     << "e0_people = " << fmt_double(sc.initial.e) << "\n"
     << "i0_people = " << fmt_double(sc.initial.i) << "\n"
     << "r0_people = " << fmt_double(sc.initial.r) << "\n"
     << "law = " << to_string(sc.law.kind) << "\n"
     << "g_per_day = " << fmt_double(sc.law.g) << "\n"
     << "g1_per_day = " << fmt_double(sc.law.g1) << "\n"
     << "g1_mode = " << to_string(sc.g1_mode) << "\n"
     << "k0 = " << fmt_double(sc.law.k0) << "\n"
     << "clamp_v = " << (sc.law.clamp_v ? "true" : "false") << "\n"
     << "step_days = " << fmt_double(c.step) << "\n"
     << "horizon_days = " << fmt_double(c.horizon) << "\n"
     << "record_stride = " << c.record_stride << "\n"
     << "switch_tol_days = " << fmt_double(c.switch_tol) << "\n"
     << "positivity_tol = " << fmt_double(c.tol.positivity) << "\n"
     << "conservation_tol = " << fmt_double(c.tol.conservation) << "\n"
     << "window_days = " << fmt_double(sc.window) << "\n"
     << "week_length_days = " << fmt_double(sc.week_length) << "\n"
     << "target_mode = " << to_string(sc.target_mode) << "\n"
     << "target_people = " << fmt_double(sc.target_people) << "\n"
     << "outputs = ";
  for (std::size_t k = 0; k < sc.outputs.size(); ++k) os << (k ? "," : "") << sc.outputs[k];
  os << "\n";
}

/// Parses the key-value format. Unspecified keys keep their defaults; model
/// rates and initial populations are required.
inline Scenario parse_scenario(std::istream& in, const std::string& source = "<stream>") {
  constexpr std::string_view kMod = "cli", kOp = "load_scenario";
  Scenario sc;
  sc.name = std::filesystem::path(source).stem().string();
  std::map<std::string, int> seen;
  std::string line;
  int lineno = 0;

  auto fail = [&](const std::string& key, const std::string& why) {
    return Error(ErrorCode::ParseError, kMod, kOp, detail::cat(source, ":", lineno, ": field '", key, "': ", why));
  };
  auto num = [&](const std::string& key, const std::string& val) {
    double out = 0.0;
    const char* first = val.data();
    const char* last = val.data() + val.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) throw fail(key, detail::cat("not a number: '", val, "'"));
    return out;
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw fail(body, "expected 'key = value'");
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string val = detail::trim(body.substr(eq + 1));
    if (seen.count(key)) throw fail(key, "duplicate key");
    seen[key] = lineno;

    if (key == "name") sc.name = val;
    else if (key == "mu_per_day") sc.params.mu = num(key, val);
    else if (key == "omega_per_day") sc.params.omega = num(key, val);
    else if (key == "beta_per_day") sc.params.beta = num(key, val);
    else if (key == "sigma_per_day") sc.params.sigma = num(key, val);
    else if (key == "gamma_per_day") sc.params.gamma = num(key, val);
    else if (key == "n_total_people") sc.params.n_total = num(key, val);
    else if (key == "s0_people") sc.initial.s = num(key, val);
    else if (key == "e0_people") sc.initial.e = num(key, val);
    else if (key == "i0_people") sc.initial.i = num(key, val);
    else if (key == "r0_people") sc.initial.r = num(key, val);
    else if (key == "law") {
      try { sc.law.kind = parse_law_kind(val); } catch (const Error&) { throw fail(key, "expected none|law1|law2"); }
    }
    else if (key == "g_per_day") sc.law.g = num(key, val);
    else if (key == "g1_per_day") sc.law.g1 = num(key, val);
    else if (key == "g1_mode") {
      try { sc.g1_mode = parse_g1_mode(val); } catch (const Error&) { throw fail(key, "expected printed|derived"); }
    }
    else if (key == "k0") sc.law.k0 = num(key, val);
    else if (key == "clamp_v") {
      if (val != "true" && val != "false") throw fail(key, "expected true|false");
      sc.law.clamp_v = val == "true";
    }
    else if (key == "step_days") sc.integration.step = num(key, val);
    else if (key == "horizon_days") sc.integration.horizon = num(key, val);
    else if (key == "record_stride") {
      const double v = num(key, val);
      if (v < 1.0 || v != std::floor(v)) throw fail(key, "expected a positive integer");
      sc.integration.record_stride = static_cast<std::size_t>(v);
    }
    else if (key == "switch_tol_days") sc.integration.switch_tol = num(key, val);
    else if (key == "positivity_tol") sc.integration.tol.positivity = num(key, val);
    else if (key == "conservation_tol") sc.integration.tol.conservation = num(key, val);
    else if (key == "window_days") sc.window = num(key, val);
    else if (key == "week_length_days") sc.week_length = num(key, val);
    else if (key == "target_mode") {
      try { sc.target_mode = parse_target_mode(val); } catch (const Error&) { throw fail(key, "expected endpoint|full|explicit"); }
    }
    else if (key == "target_people") sc.target_people = num(key, val);
    else if (key == "outputs") {
      sc.outputs = detail::split_list(val);
      for (const auto& o : sc.outputs)
        if (o != "csv" && o != "svg" && o != "summary") throw fail(key, detail::cat("unknown output '", o, "'"));
    }
    else throw fail(key, "unknown key");
  }
  for (const char* required : {"mu_per_day", "omega_per_day", "beta_per_day", "sigma_per_day", "gamma_per_day",
                               "n_total_people", "s0_people", "e0_people", "i0_people", "r0_people"}) {
    if (!seen.count(required)) {
      lineno = 0;
      throw fail(required, "missing");
    }
  }
  return sc;
}

/// Validates parameters, gains and integration settings, and attaches the
/// admissibility report of the initial state as warnings.
inline LoadedScenario validate_scenario(const Scenario& sc) {
  LoadedScenario out{sc, {}, {}};
  try {
    validate_params(sc.params);
    out.warnings = validate_law(sc.params, sc.effective_law());
    validate_config(sc.integration);
    if (!(sc.window > 0.0) || !(sc.week_length > 0.0))
      throw Error(ErrorCode::InvalidConfig, "cli", "validate_scenario", "window and week_length must be positive");
    const double n = sc.params.n_total;
    if (std::abs(sc.initial.total() - n) > sc.integration.tol.conservation * n)
      throw Error(ErrorCode::InvalidConfig, "cli", "validate_scenario",
                  detail::cat("initial populations sum to ", sc.initial.total(), ", N = ", n));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ValidationError, "cli", "load_scenario", e.what());
  }
  out.admissibility = check_admissibility(sc.params, sc.initial);
  if (!out.admissibility.admissible()) {
    std::string w = "initial state is not admissible:";
    if (!out.admissibility.initial_nonneg) w += " negative initial population;";
    if (!out.admissibility.exposed_lower_ok) w += " E(0) <= (mu+gamma)/sigma I(0);";
    if (!out.admissibility.exposed_upper_ok) w += " E(0) >= beta S(0) I(0)/((mu+sigma) N);";
    if (!out.admissibility.beta_above_threshold)
      w += detail::cat(" beta <= ", out.admissibility.beta_threshold, ";");
    out.warnings.push_back(w);
  }
  if (out.admissibility.marginal) out.warnings.push_back("admissibility holds only marginally (slack < 1e-9)");
  return out;
}

/// Loads a built-in scenario by name or a scenario file by path.
inline LoadedScenario load_scenario(const std::string& name_or_path) {
  const auto& names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return validate_scenario(builtin_scenario(name_or_path));
  std::ifstream in(name_or_path);
  if (!in) {
    if (!std::filesystem::exists(name_or_path) && name_or_path.find('/') == std::string::npos &&
        name_or_path.find('.') == std::string::npos)
      throw Error(ErrorCode::UnknownBuiltin, "cli", "load_scenario",
                  detail::cat("'", name_or_path, "' is neither a built-in nor a file"));
    throw Error(ErrorCode::Io, "cli", "load_scenario", detail::cat("cannot open '", name_or_path, "'"));
  }
  return validate_scenario(parse_scenario(in, name_or_path));
}

}  // namespace epictrl
