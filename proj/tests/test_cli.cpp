#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "amcf/cli.hpp"

using namespace amcf;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "amcf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation inv;
  inv.code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  inv.out = out.str();
  inv.err = err.str();
  return inv;
}

// Fresh directory under the system temp dir, removed on scope exit.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("amcf_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str(const std::string& sub = "") const { return (sub.empty() ? path : path / sub).string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("flags populate the run configuration", "[cli]") {
  const auto c = cli::parse_config({"simulate", "--n", "64", "--dt", "0.02", "--scheme", "explicit-rk4",
                                    "--r-star", "0.5", "--project-volume", "--output-dir", "x",
                                    "--probe-amplitudes", "0.01, 0.05"});
  CHECK(c.command == "simulate");
  CHECK(c.n == 64);
  CHECK(c.dt == 0.02);
  CHECK(c.scheme == "explicit-rk4");
  CHECK(c.r_star == 0.5);
  CHECK(c.project_volume);
  CHECK(c.output_dir == "x");
  REQUIRE(c.probe_amplitudes.size() == 2);
  CHECK(c.probe_amplitudes[1] == 0.05);

  const auto v = cli::parse_config({"verify", "--only", "3,7", "--quick"});
  CHECK(v.only == std::vector<int>{3, 7});
  CHECK(v.quick);

  // spectrum defaults to the cylinder, equilibrium to B = 0.5.
  CHECK(cli::parse_config({"spectrum"}).spectrum_B == 0.0);
  CHECK(cli::parse_config({"equilibrium"}).B == 0.5);
  CHECK(cli::parse_config({"spectrum", "--B", "0.2"}).spectrum_B == 0.2);
}

TEST_CASE("config file values are overridden by flags", "[cli]") {
  TempDir dir("config");
  const auto file = dir.path / "run.cfg";
  write_file(file, "# comment\nn = 64\ndt = 0.5\n\nr_star = 3\n");
  const auto c = cli::parse_config({"simulate", "--config", file.string(), "--dt", "0.25"});
  CHECK(c.n == 64);
  CHECK(c.dt == 0.25);
  CHECK(c.r_star == 3.0);
  CHECK(c.config_file == file.string());
}

TEST_CASE("unknown config keys are rejected by name", "[cli]") {
  TempDir dir("badkey");
  const auto file = dir.path / "run.cfg";
  write_file(file, "n = 64\nfrobnicate = 2\n");
  const auto inv = run_cli({"simulate", "--config", file.string()});
  CHECK(inv.code == cli::kExitUsage);
  CHECK(inv.err.find("frobnicate") != std::string::npos);

  write_file(file, "this line has no separator\n");
  CHECK(run_cli({"simulate", "--config", file.string()}).code == cli::kExitUsage);
  CHECK(run_cli({"simulate", "--config", (dir.path / "missing.cfg").string()}).code == cli::kExitUsage);
}

TEST_CASE("invalid values are usage errors", "[cli]") {
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"simulate", "--n", "7"}).code == cli::kExitUsage);
  CHECK(run_cli({"simulate", "--dt", "-1"}).code == cli::kExitUsage);
  CHECK(run_cli({"simulate", "--scheme", "leapfrog"}).code == cli::kExitUsage);
  CHECK(run_cli({"equilibrium", "--B", "1.5"}).code == cli::kExitUsage);
  CHECK(run_cli({"verify", "--only", "13"}).code == cli::kExitUsage);
  CHECK(run_cli({"spectrum", "--radii", "1,abc"}).code == cli::kExitUsage);
  CHECK(run_cli({"simulate", "--no-such-flag"}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
}

TEST_CASE("help exits cleanly", "[cli]") {
  const auto inv = run_cli({"simulate", "--help"});
  CHECK(inv.code == cli::kExitOk);
  CHECK(inv.out.find("--t-end") != std::string::npos);
}

TEST_CASE("output directory falls back to the environment", "[cli]") {
  ::setenv("AMCF_OUTPUT_DIR", "from_env", 1);
  CHECK(cli::parse_config({"equilibrium"}).output_dir == "from_env");
  CHECK(cli::parse_config({"equilibrium", "--output-dir", "flag"}).output_dir == "flag");
  ::unsetenv("AMCF_OUTPUT_DIR");
  CHECK(cli::parse_config({"equilibrium"}).output_dir == "amcf_out");
}

TEST_CASE("simulate writes its outputs", "[cli]") {
  TempDir dir("simulate");
  const auto inv = run_cli({"simulate", "--n", "32", "--t-end", "0.2", "--dt", "0.02", "--output-dir", dir.str()});
  REQUIRE(inv.code == cli::kExitOk);
  for (const char* f : {"trajectory.csv", "final_profile.csv", "summary.json"}) CHECK(fs::exists(dir.path / f));
  const auto csv = slurp(dir.path / "trajectory.csv");
  CHECK(csv.rfind("# amcf ", 0) == 0);
  CHECK(csv.find("# scheme=semi-implicit-midpoint") != std::string::npos);
  const auto json = nlohmann::json::parse(slurp(dir.path / "summary.json"));
  CHECK(json["termination"] == "reached-t-end");
  CHECK(json["max_relative_volume_drift"].get<double>() < 1e-12);
}

TEST_CASE("outputs are deterministic", "[cli]") {
  TempDir a("det_a"), b("det_b");
  for (const auto* d : {&a, &b}) {
    REQUIRE(run_cli({"simulate", "--n", "32", "--t-end", "0.1", "--dt", "0.01", "--output-dir", d->str()}).code == 0);
    REQUIRE(run_cli({"equilibrium", "--B", "0.3", "--n", "64", "--output-dir", d->str()}).code == 0);
    REQUIRE(run_cli({"spectrum", "--r-star", "2", "--n", "64", "--m", "9", "--radii", "0.5,2",
                     "--output-dir", d->str()})
                .code == 0);
  }
  const auto spec = nlohmann::json::parse(slurp(a.path / "spectrum.json"));
  CHECK(spec.contains("closed_form"));
  for (const char* f : {"trajectory.csv", "final_profile.csv", "summary.json", "undulary_k1_B+0.30.csv",
                        "equilibrium.json", "spectrum.json", "stability_table.csv"}) {
    INFO(f);
    REQUIRE(fs::exists(a.path / f));
    CHECK(slurp(a.path / f) == slurp(b.path / f));
  }
}

TEST_CASE("equilibrium family and branch outputs", "[cli]") {
  TempDir dir("family");
  REQUIRE(run_cli({"equilibrium", "--family", "--n", "64", "--output-dir", dir.str()}).code == 0);
  CHECK(fs::exists(dir.path / "undulary_k1_B-0.99.csv"));
  CHECK(fs::exists(dir.path / "undulary_k1_B+0.00.csv"));
  CHECK(fs::exists(dir.path / "undulary_k1_B+0.99.csv"));

  REQUIRE(run_cli({"branch", "--s-max", "0.1", "--steps", "5", "--n", "128", "--output-dir", dir.str()}).code == 0);
  CHECK(fs::exists(dir.path / "branch_ell1.csv"));
  const auto j = nlohmann::json::parse(slurp(dir.path / "pitchfork_ell1.json"));
  CHECK(j.contains("lambda_ddot0"));
  CHECK(j["kenmotsu"].size() == 5);
}

TEST_CASE("verify exit codes", "[cli]") {
  const auto pass = run_cli({"verify", "--only", "3"});
  CHECK(pass.code == cli::kExitOk);
  CHECK(pass.out.rfind("PASS   3", 0) == 0);

  const auto fail = run_cli({"verify", "--only", "3,7"});
  CHECK(fail.code == cli::kExitCriterionFailure);
  CHECK(fail.out.find("failing criterion: 7") != std::string::npos);
}

TEST_CASE("unwritable output directory is reported", "[cli]") {
  TempDir dir("blocked");
  write_file(dir.path / "blocker", "x");
  const auto inv = run_cli({"equilibrium", "--n", "32", "--output-dir", (dir.path / "blocker" / "sub").string()});
  CHECK(inv.code == cli::kExitNumerical);
  CHECK_FALSE(inv.err.empty());
}
