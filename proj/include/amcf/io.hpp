#pragma once

// CSV and JSON emission. Every CSV starts with comment lines carrying the
// tool version and the full configuration; every JSON document has a "meta"
// block with the same information.

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "amcf/bifurcation.hpp"
#include "amcf/errors.hpp"
#include "amcf/evolution.hpp"
#include "amcf/stability.hpp"
#include "amcf/torus_field.hpp"

namespace amcf {

inline constexpr const char* kVersion = "0.1.0";

/// Ordered key/value echo of the configuration that produced a file.
using ConfigEcho = std::map<std::string, std::string>;

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv_preamble(std::ostream& os, const ConfigEcho& config) {
  os << "# amcf " << kVersion << "\n";
  for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw PreconditionError("cannot open " + path.string() + " for writing");
  return os;
}

inline void write_trajectory_csv(std::ostream& os, const FlowTrajectory& traj, const ConfigEcho& config) {
  write_csv_preamble(os, config);
  os << "t,min_r,volume,area,h_avg,g_inf\n";
  for (const auto& d : traj.diagnostics) {
    os << format_double(d.t) << ',' << format_double(d.min_r) << ',' << format_double(d.volume) << ','
       << format_double(d.area) << ',' << format_double(d.h_avg) << ',' << format_double(d.g_inf) << '\n';
  }
}

/// Profile samples as `x,r`.
inline void write_profile_csv(std::ostream& os, const ProfileFunction& r, const ConfigEcho& config) {
  write_csv_preamble(os, config);
  os << "x,r\n";
  for (int j = 0; j < r.size(); ++j) os << format_double(r.x(j)) << ',' << format_double(r[j]) << '\n';
}

struct SpectrumRow {
  double r_star = 0.0;
  int k = 0;
  double eigenvalue = 0.0;
};

/// Cylinder stability table `r_star,k,eigenvalue` over a radius grid.
inline std::vector<SpectrumRow> stability_table(const std::vector<double>& radii, int k_max) {
  std::vector<SpectrumRow> rows;
  for (double r : radii) {
    rows.push_back({r, 0, 0.0});
    for (int k = 1; k <= k_max; ++k) rows.push_back({r, k, 1.0 / (r * r) - double(k) * k});
  }
  return rows;
}

inline void write_spectrum_table_csv(std::ostream& os, const std::vector<SpectrumRow>& rows,
                                     const ConfigEcho& config) {
  write_csv_preamble(os, config);
  os << "r_star,k,eigenvalue\n";
  for (const auto& row : rows) {
    os << format_double(row.r_star) << ',' << row.k << ',' << format_double(row.eigenvalue) << '\n';
  }
}

inline void write_branch_csv(std::ostream& os, const Branch& b, const ConfigEcho& config) {
  write_csv_preamble(os, config);
  os << "s,lambda,leading_eig_re,leading_eig_im";
  for (int k = 1; k <= b.modes; ++k) os << ",a_" << k;
  os << '\n';
  for (const auto& p : b.points) {
    os << format_double(p.s) << ',' << format_double(p.state.lambda) << ','
       << format_double(p.leading_eigenvalue.real()) << ',' << format_double(p.leading_eigenvalue.imag());
    for (double a : p.state.cos_coeffs) os << ',' << format_double(a);
    os << '\n';
  }
}

inline nlohmann::ordered_json meta_json(const ConfigEcho& config) {
  nlohmann::ordered_json meta;
  meta["tool"] = "amcf";
  meta["version"] = kVersion;
  meta["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) meta["config"][k] = v;
  return meta;
}

inline nlohmann::ordered_json spectrum_json(const SpectrumReport& rep, const ConfigEcho& config) {
  nlohmann::ordered_json j;
  j["meta"] = meta_json(config);
  j["operator_tag"] = rep.operator_tag;
  j["base_point"] = rep.base_point;
  auto& ev = j["eigenvalues"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    nlohmann::ordered_json e{{"re", rep.eigenvalues[i].real()}, {"im", rep.eigenvalues[i].imag()}};
    if (!rep.mode_labels.empty()) e["k"] = rep.mode_labels[i];
    ev.push_back(e);
  }
  return j;
}

inline nlohmann::ordered_json pitchfork_json(const Branch& b, const PitchforkFit& fit, const ConfigEcho& config) {
  nlohmann::ordered_json j;
  j["meta"] = meta_json(config);
  j["ell"] = b.ell;
  j["modes"] = b.modes;
  j["points"] = b.points.size();
  j["truncated"] = b.truncated;
  if (b.truncated) j["message"] = b.message;
  j["lambda0"] = fit.lambda0;
  j["lambda_dot0"] = fit.lambda_dot0;
  j["lambda_ddot0"] = fit.lambda_ddot0;
  j["lambda_ddot0_reference"] = -double(b.ell) * b.ell * b.ell;
  j["points_used"] = fit.points_used;
  return j;
}

inline void write_json(std::ostream& os, const nlohmann::ordered_json& j) { os << j.dump(2) << '\n'; }

}  // namespace amcf
