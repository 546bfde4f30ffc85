#pragma once

// Command-line front end: subcommands simulate, equilibrium, spectrum,
// branch and verify. Options come from flags and from an optional key=value
// config file (`--config path`); flags override file values.
//
// Exit codes: 0 success, 1 acceptance failure, 2 usage error, 3 numerical
// failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "amcf/acceptance.hpp"
#include "amcf/amcf.hpp"

namespace amcf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCriterionFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;
  std::string output_dir;
  std::string config_file;

  // shared
  int n = 256;
  unsigned long seed = 12345;

  // simulate
  std::string scheme = "semi-implicit-midpoint";
  double dt = 0.01;
  double t_end = 50.0;
  double r_star = 2.0;
  int perturb_mode = 1;
  double perturb_amp = 0.01;
  double tol_equilibrium = 1e-9;
  double r_min_floor = 1e-6;
  int diag_every = 1;
  bool project_volume = false;
  std::vector<double> probe_amplitudes;
  std::string probe_amplitudes_text;

  // equilibrium / spectrum
  double B = 0.5;
  double spectrum_B = 0.0;  // spectrum defaults to the cylinder
  int k = 1;
  bool family = false;
  std::string basis = "full";
  int m = 40;
  int k_max = 10;
  std::vector<double> radii;
  std::string radii_text;

  // branch
  int ell = 1;
  double s_max = 0.2;
  int steps = 40;
  int modes = 0;

  // verify
  bool quick = false;
  bool mutate = false;
  std::vector<int> only;
  std::string only_text;
};

namespace detail {

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

inline std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

const auto kEvenGrid = CLI::Validator(
    [](std::string& v) -> std::string {
      try {
        check_grid_size(std::stoi(v));
      } catch (const std::exception&) {
        return "grid size must be an even integer >= 8";
      }
      return {};
    },
    "EVEN>=8");

// Declares every subcommand and binds its options to `cfg`.
inline void build_app(CLI::App& app, RunConfig& cfg) {
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto common = [&](CLI::App* sub) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--output-dir", cfg.output_dir, "Output directory (fallback: $AMCF_OUTPUT_DIR, then ./amcf_out)");
    sub->add_option("--config", cfg.config_file, "key=value config file; flags override its values");
  };

  auto* sim = app.add_subcommand("simulate", "Evolve r0 = r_star + amp cos(mode x) and record diagnostics");
  common(sim);
  sim->add_option("--n", cfg.n, "Grid size")->check(kEvenGrid)->capture_default_str();
  sim->add_option("--scheme", cfg.scheme, "explicit-rk4 | semi-implicit-euler | semi-implicit-midpoint")
      ->check(CLI::IsMember({"explicit-rk4", "semi-implicit-euler", "semi-implicit-midpoint"}))
      ->capture_default_str();
  sim->add_option("--dt", cfg.dt, "Time step")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--t-end", cfg.t_end, "Final time")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--r-star", cfg.r_star, "Base cylinder radius")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--perturb-mode", cfg.perturb_mode, "Wavenumber of the perturbation")
      ->check(CLI::Range(1, 1 << 20))
      ->capture_default_str();
  sim->add_option("--perturb-amp", cfg.perturb_amp, "Perturbation amplitude")->capture_default_str();
  sim->add_option("--tol-equilibrium", cfg.tol_equilibrium, "Stop when sup|G| falls below this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--r-min-floor", cfg.r_min_floor, "Positivity floor")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--diag-every", cfg.diag_every, "Steps between diagnostic records")
      ->check(CLI::Range(1, 1 << 30))
      ->capture_default_str();
  sim->add_flag("--project-volume", cfg.project_volume, "Re-project onto the initial volume after every step");
  sim->add_option("--probe-amplitudes", cfg.probe_amplitudes_text,
                  "Comma list of amplitudes; reports the largest that still converges");

  auto* eq = app.add_subcommand("equilibrium", "Generate an unduloid (or a family) and report its CMC deviation");
  common(eq);
  eq->add_option("--B", cfg.B, "Shape parameter")->check(CLI::Range(-0.99, 0.99))->capture_default_str();
  eq->add_option("--k", cfg.k, "Number of periods on [-pi, pi)")->check(CLI::Range(1, 1 << 20))->capture_default_str();
  eq->add_option("--n", cfg.n, "Grid size")->check(kEvenGrid)->capture_default_str();
  eq->add_flag("--family", cfg.family, "Emit B = -0.99 ... 0.99 (one CSV per B) instead of a single unduloid");

  auto* sp = app.add_subcommand("spectrum", "Linear spectrum at a cylinder (B = 0) or an unduloid");
  common(sp);
  sp->add_option("--r-star", cfg.r_star, "Cylinder radius (used when B = 0)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sp->add_option("--B", cfg.spectrum_B, "Unduloid shape parameter; 0 selects the cylinder")
      ->check(CLI::Range(-0.99, 0.99))
      ->capture_default_str();
  sp->add_option("--k", cfg.k, "Unduloid period count")->check(CLI::Range(1, 1 << 20))->capture_default_str();
  sp->add_option("--n", cfg.n, "Grid size")->check(kEvenGrid)->capture_default_str();
  sp->add_option("--basis", cfg.basis, "full | even")->check(CLI::IsMember({"full", "even"}))->capture_default_str();
  sp->add_option("--m", cfg.m, "Basis size")->check(CLI::Range(1, 1 << 20))->capture_default_str();
  sp->add_option("--k-max", cfg.k_max, "Largest wavenumber in closed-form tables")
      ->check(CLI::Range(1, 1 << 20))
      ->capture_default_str();
  sp->add_option("--radii", cfg.radii_text, "Comma list of radii for the r_star,k,eigenvalue table");

  auto* br = app.add_subcommand("branch", "Trace the bifurcating branch at lambda = ell");
  common(br);
  br->add_option("--ell", cfg.ell, "Branch index")->check(CLI::Range(1, 64))->capture_default_str();
  br->add_option("--s-max", cfg.s_max, "Largest kernel amplitude")->check(CLI::PositiveNumber)->capture_default_str();
  br->add_option("--steps", cfg.steps, "Points per side")->check(CLI::Range(1, 100000))->capture_default_str();
  br->add_option("--modes", cfg.modes, "Cosine modes (0: max(32, 8 ell))")->check(CLI::Range(0, 4096))->capture_default_str();
  br->add_option("--n", cfg.n, "Grid for the Kenmotsu comparison")->check(kEvenGrid)->capture_default_str();

  auto* ver = app.add_subcommand("verify", "Run the acceptance suite");
  common(ver);
  ver->add_flag("--quick", cfg.quick, "Criteria 1-6 only");
  ver->add_flag("--mutate", cfg.mutate, "Inject a sign error into f(r) (mutation test)");
  ver->add_option("--seed", cfg.seed, "Seed for randomized checks")->capture_default_str();
  ver->add_option("--only", cfg.only_text, "Comma list of criterion ids (1-12)");
}

// Reads `key = value` lines; blank lines and lines starting with '#' are
// skipped.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError("malformed line " + std::to_string(lineno) + " in '" + path + "' (expected key = value)");
    }
    std::string key = trim(t.substr(0, eq));
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    out.emplace_back(key, trim(t.substr(eq + 1)));
  }
  return out;
}

// Splits a comma list of numbers; a bad entry is a usage error naming `key`.
template <class T>
std::vector<T> parse_list(const std::string& text, const char* key) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    T value{};
    if (!CLI::detail::lexical_conversion<T, T>({item}, value)) {
      throw UsageError(std::string("invalid entry '") + item + "' for " + key);
    }
    out.push_back(value);
  }
  return out;
}

inline std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace detail

/// Parses argv (without the program name) into a validated RunConfig.
/// Throws UsageError for config-file problems and CLI::ParseError (including
/// help requests) for flag problems.
inline RunConfig parse_config(const std::vector<std::string>& args) {
  std::vector<std::string> full = args;
  if (const auto path = detail::find_config_path(args)) {
    std::string sub;
    for (const auto& a : args) {
      if (!a.empty() && a[0] != '-') {
        sub = a;
        break;
      }
    }
    RunConfig probe;
    CLI::App probe_app{"amcf"};
    detail::build_app(probe_app, probe);
    CLI::App* subcommand = sub.empty() ? nullptr : probe_app.get_subcommand_no_throw(sub);
    if (subcommand == nullptr) throw UsageError("--config requires a subcommand before it");
    std::vector<std::string> from_file;
    for (const auto& [key, value] : detail::read_config_file(*path)) {
      if (key == "config" || subcommand->get_option_no_throw("--" + key) == nullptr) {
        throw UsageError("unknown key '" + key + "' in config file '" + *path + "' for command " + sub);
      }
      from_file.push_back("--" + key + "=" + value);
    }
    full.clear();
    full.push_back(sub);
    full.insert(full.end(), from_file.begin(), from_file.end());
    bool skipped = false;
    for (const auto& a : args) {
      if (!skipped && a == sub) {
        skipped = true;
        continue;
      }
      full.push_back(a);
    }
  }
  RunConfig cfg;
  CLI::App app{"amcf: averaged mean curvature flow laboratory"};
  detail::build_app(app, cfg);
  std::vector<std::string> reversed(full.rbegin(), full.rend());
  app.parse(reversed);
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.probe_amplitudes = detail::parse_list<double>(cfg.probe_amplitudes_text, "probe-amplitudes");
  cfg.radii = detail::parse_list<double>(cfg.radii_text, "radii");
  cfg.only = detail::parse_list<int>(cfg.only_text, "only");
  for (double r : cfg.radii) {
    if (!(r > 0.0)) throw UsageError("radii entries must be positive");
  }
  for (int id : cfg.only) {
    if (id < 1 || id > 12) throw UsageError("only: criterion ids run from 1 to 12");
  }
  if (cfg.output_dir.empty()) {
    const char* env = std::getenv("AMCF_OUTPUT_DIR");
    cfg.output_dir = (env && *env) ? env : "amcf_out";
  }
  return cfg;
}

/// Configuration echo written into every output file.
inline ConfigEcho echo(const RunConfig& c) {
  ConfigEcho e{{"command", c.command}};
  auto put = [&](const char* k, const std::string& v) { e[k] = v; };
  if (c.command == "simulate") {
    put("n", std::to_string(c.n));
    put("scheme", c.scheme);
    put("dt", format_double(c.dt));
    put("t-end", format_double(c.t_end));
    put("r-star", format_double(c.r_star));
    put("perturb-mode", std::to_string(c.perturb_mode));
    put("perturb-amp", format_double(c.perturb_amp));
    put("tol-equilibrium", format_double(c.tol_equilibrium));
    put("r-min-floor", format_double(c.r_min_floor));
    put("diag-every", std::to_string(c.diag_every));
    put("project-volume", c.project_volume ? "true" : "false");
    put("probe-amplitudes", detail::join(c.probe_amplitudes));
  } else if (c.command == "equilibrium") {
    put("B", format_double(c.B));
    put("k", std::to_string(c.k));
    put("n", std::to_string(c.n));
    put("family", c.family ? "true" : "false");
  } else if (c.command == "spectrum") {
    put("r-star", format_double(c.r_star));
    put("B", format_double(c.spectrum_B));
    put("k", std::to_string(c.k));
    put("n", std::to_string(c.n));
    put("basis", c.basis);
    put("m", std::to_string(c.m));
    put("k-max", std::to_string(c.k_max));
    put("radii", detail::join(c.radii));
  } else if (c.command == "branch") {
    put("ell", std::to_string(c.ell));
    put("s-max", format_double(c.s_max));
    put("steps", std::to_string(c.steps));
    put("modes", std::to_string(c.modes));
    put("n", std::to_string(c.n));
  } else if (c.command == "verify") {
    put("quick", c.quick ? "true" : "false");
    put("mutate", c.mutate ? "true" : "false");
    put("seed", std::to_string(c.seed));
    put("only", detail::join(c.only));
  }
  return e;
}

namespace detail {

inline std::filesystem::path out_path(const RunConfig& c, const std::string& name) {
  return std::filesystem::path(c.output_dir) / name;
}

inline nlohmann::ordered_json nullable(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

inline int run_simulate(const RunConfig& c, std::ostream& out) {
  const auto scheme = parse_scheme(c.scheme);
  StepController ctrl;
  ctrl.scheme = *scheme;
  ctrl.dt = c.dt;
  ctrl.t_end = c.t_end;
  ctrl.tol_equilibrium = c.tol_equilibrium;
  ctrl.r_min_floor = c.r_min_floor;
  ctrl.diag_every = c.diag_every;
  ctrl.project_volume = c.project_volume;
  const auto r0 = ProfileFunction::sample(
      c.n, [&](double x) { return c.r_star + c.perturb_amp * std::cos(c.perturb_mode * x); });
  if (!(r0.min() > 0.0)) throw UsageError("initial profile is not positive; reduce --perturb-amp");
  const auto traj = evolve(r0, ctrl);
  const auto cfg = echo(c);

  auto os = open_output(out_path(c, "trajectory.csv"));
  write_trajectory_csv(os, traj, cfg);
  auto fs = open_output(out_path(c, "final_profile.csv"));
  write_profile_csv(fs, traj.final_profile(), cfg);

  const auto& first = traj.diagnostics.front();
  double drift = 0.0, worst_area_step = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.diagnostics.size(); ++i) {
    drift = std::max(drift, std::abs(traj.diagnostics[i].volume - first.volume) / first.volume);
    if (i) worst_area_step = std::max(worst_area_step, traj.diagnostics[i].area - traj.diagnostics[i - 1].area);
  }
  nlohmann::ordered_json j;
  j["meta"] = meta_json(cfg);
  j["termination"] = to_string(traj.termination);
  if (!traj.message.empty()) j["message"] = traj.message;
  j["steps"] = traj.steps;
  j["t_final"] = traj.times.back();
  j["eta"] = equivolume_radius(r0);
  j["max_relative_volume_drift"] = drift;
  j["largest_area_increase"] = nullable(worst_area_step);
  j["final_g_inf"] = traj.diagnostics.back().g_inf;
  j["final_min_r"] = traj.diagnostics.back().min_r;
  const double predicted = 1.0 / (c.r_star * c.r_star) - double(c.perturb_mode) * c.perturb_mode;
  j["predicted_rate"] = predicted;
  try {
    j["fitted_rate"] = fit_exponential_rate(traj, c.perturb_mode);
  } catch (const InsufficientDataError& e) {
    j["fitted_rate"] = nullptr;
    j["fit_note"] = e.what();
  }
  if (traj.termination == Termination::Converged) {
    const auto cls = classify_equilibrium(traj.final_profile(), 1e-6);
    j["final_equilibrium"] = to_string(cls.kind);
    if (cls.kind == EquilibriumKind::Cylinder) j["final_radius"] = cls.radius;
  }
  if (!c.probe_amplitudes.empty()) {
    StepController probe = ctrl;
    probe.diag_every = 1000000;
    j["probe_amplitudes"] = c.probe_amplitudes;
    j["largest_converging_amplitude"] =
        largest_converging_amplitude(c.r_star, c.perturb_mode, c.probe_amplitudes, c.n, probe);
  }
  auto js = open_output(out_path(c, "summary.json"));
  write_json(js, j);
  out << "simulate: " << to_string(traj.termination) << " after " << traj.steps << " steps (t = "
      << format_double(traj.times.back()) << "), volume drift " << drift << ", outputs in " << c.output_dir << "\n";
  return kExitOk;
}

inline std::string b_tag(double B) {
  std::ostringstream os;
  os << std::showpos << std::fixed << std::setprecision(2) << B;
  return os.str();
}

inline int run_equilibrium(const RunConfig& c, std::ostream& out) {
  const auto cfg = echo(c);
  const std::vector<double> Bs = c.family ? std::vector<double>{-0.99, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 0.99}
                                          : std::vector<double>{c.B};
  nlohmann::ordered_json report;
  report["meta"] = meta_json(cfg);
  auto& list = report["unduloids"] = nlohmann::ordered_json::array();
  for (double B : Bs) {
    const auto r = unduloid_profile(B, c.k, c.n);
    const double H = h_for(B, c.k);
    const auto Hr = mean_curvature(r);
    double cmc = 0.0;
    for (int j = 0; j < r.size(); ++j) cmc = std::max(cmc, std::abs(Hr[j] - H) / H);
    const std::string file = "undulary_k" + std::to_string(c.k) + "_B" + b_tag(B) + ".csv";
    auto os = open_output(out_path(c, file));
    ConfigEcho fcfg = cfg;
    fcfg["B"] = format_double(B);
    write_profile_csv(os, r, fcfg);
    list.push_back({{"B", B},
                    {"k", c.k},
                    {"H", H},
                    {"constraint_integral", constraint_integral(B)},
                    {"g_inf", amcf_rhs(r).sup_norm()},
                    {"max_relative_cmc_deviation", cmc},
                    {"min_r", r.min()},
                    {"max_r", r.max()},
                    {"file", file}});
    out << "equilibrium: B=" << B << " k=" << c.k << " H=" << format_double(H) << " sup|G|=" << amcf_rhs(r).sup_norm()
        << " CMC deviation " << cmc << " -> " << file << "\n";
  }
  auto js = open_output(out_path(c, "equilibrium.json"));
  write_json(js, report);
  return kExitOk;
}

inline int run_spectrum(const RunConfig& c, std::ostream& out) {
  const auto cfg = echo(c);
  const auto basis = c.basis == "even" ? SpectrumBasis::EvenZeroMean : SpectrumBasis::Full;
  nlohmann::ordered_json j;
  j["meta"] = meta_json(cfg);
  if (c.spectrum_B == 0.0) {
    const auto r = ProfileFunction::constant(c.n, c.r_star);
    const auto numeric = numeric_spectrum(r, basis, c.m);
    const auto closed = basis == SpectrumBasis::Full ? cylinder_spectrum(c.r_star, c.k_max)
                                                     : reduced_cylinder_spectrum(c.r_star, c.k_max, ReducedParity::Even);
    j["numeric"] = spectrum_json(numeric, {});
    j["numeric"].erase("meta");
    j["closed_form"] = spectrum_json(closed, {});
    j["closed_form"].erase("meta");
    j["decay_rate_prediction"] = decay_rate_prediction(c.r_star);
    j["classification"] = to_string(classify(c.r_star));
    out << "spectrum: cylinder r*=" << c.r_star << " leading numeric " << numeric.leading().real() << ", "
        << to_string(classify(c.r_star)) << "\n";
  } else {
    const auto r = unduloid_profile(c.spectrum_B, c.k, c.n);
    const auto numeric = numeric_spectrum(r, basis, c.m);
    j["numeric"] = spectrum_json(numeric, {});
    j["numeric"].erase("meta");
    out << "spectrum: unduloid B=" << c.spectrum_B << " k=" << c.k << " leading numeric " << numeric.leading().real() << "\n";
  }
  auto js = open_output(out_path(c, "spectrum.json"));
  write_json(js, j);
  if (!c.radii.empty()) {
    auto os = open_output(out_path(c, "stability_table.csv"));
    write_spectrum_table_csv(os, stability_table(c.radii, c.k_max), cfg);
  }
  return kExitOk;
}

inline int run_branch(const RunConfig& c, std::ostream& out) {
  const auto cfg = echo(c);
  const auto b = trace_branch(c.ell, c.s_max, c.steps, c.modes);
  const std::string tag = "ell" + std::to_string(c.ell);
  auto os = open_output(out_path(c, "branch_" + tag + ".csv"));
  write_branch_csv(os, b, cfg);
  nlohmann::ordered_json j;
  try {
    const auto fit = fit_pitchfork(b);
    j = pitchfork_json(b, fit, cfg);
    out << "branch: ell=" << c.ell << " lambda_ddot0 " << fit.lambda_ddot0 << " (reference " << -c.ell * c.ell * c.ell
        << "), lambda_dot0 " << fit.lambda_dot0 << "\n";
  } catch (const InsufficientDataError& e) {
    j["meta"] = meta_json(cfg);
    j["fit_error"] = e.what();
    out << "branch: ell=" << c.ell << " fit skipped: " << e.what() << "\n";
  }
  auto& matches = j["kenmotsu"] = nlohmann::ordered_json::array();
  for (const auto& p : b.points) {
    if (p.s <= 0.0) continue;
    try {
      const auto m = compare_with_kenmotsu(p, c.ell, c.n);
      matches.push_back({{"s", p.s}, {"B", m.B}, {"H", m.H}, {"distance", m.distance},
                         {"lambda_minus_H", m.lambda_minus_H}});
    } catch (const MismatchError& e) {
      matches.push_back({{"s", p.s}, {"error", e.what()}});
    }
  }
  auto js = open_output(out_path(c, "pitchfork_" + tag + ".json"));
  write_json(js, j);
  if (b.truncated) out << "branch: truncated: " << b.message << "\n";
  return kExitOk;
}

inline int run_verify(const RunConfig& c, std::ostream& out) {
  AcceptanceOptions opt;
  opt.quick = c.quick;
  opt.mutate_f = c.mutate;
  opt.seed = c.seed;
  std::vector<CriterionResult> results;
  if (c.only.empty()) {
    results = run_acceptance(opt, out);
  } else {
    for (int id : c.only) {
      results.push_back(run_criterion(id, opt));
      out << format_result(results.back()) << std::endl;
    }
  }
  int failed = 0;
  for (const auto& r : results) {
    if (!r.passed) {
      ++failed;
      out << "failing criterion: " << r.id << " (" << r.name << ")\n";
    }
  }
  out << (failed == 0 ? "all " : "") << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? kExitOk : kExitCriterionFailure;
}

}  // namespace detail

/// Executes a parsed configuration; library errors map to exit code 3.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "simulate") return detail::run_simulate(c, out);
    if (c.command == "equilibrium") return detail::run_equilibrium(c, out);
    if (c.command == "spectrum") return detail::run_spectrum(c, out);
    if (c.command == "branch") return detail::run_branch(c, out);
    if (c.command == "verify") return detail::run_verify(c, out);
    err << "unknown command " << c.command << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

inline int main_entry(int argc, const char* const* argv, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const CLI::CallForHelp&) {
    RunConfig dummy;
    CLI::App app{"amcf: averaged mean curvature flow laboratory"};
    detail::build_app(app, dummy);
    CLI::App* sub = nullptr;
    for (const auto& a : args) {
      if (auto* s = app.get_subcommand_no_throw(a)) {
        sub = s;
        break;
      }
    }
    out << (sub ? sub->help() : app.help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return run(cfg, out, err);
}

}  // namespace amcf::cli
