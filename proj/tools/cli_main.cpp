#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rminmax/config.hpp"
#include "rminmax/log.hpp"
#include "rminmax/runner.hpp"

namespace {

namespace fs = std::filesystem;
using rminmax::Config;

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;

int run_solve(const std::string& path) {
  Config cfg = Config::parse_file(path);
  rminmax::ExperimentResult res = rminmax::run_experiment(cfg);
  std::cout << res.summary;
  return kExitOk;
}

// Re-parses the config with a default trace output appended when the file
// declares none, so a bench sweep always leaves artifacts behind.
Config with_default_outputs(const fs::path& file, const fs::path& outdir) {
  Config probe = Config::parse_file(file.string());
  bool has_csv = probe.has("output.csv");
  bool has_plot = probe.has("output.plot");
  if (has_csv && has_plot) return probe;
  std::ifstream in(file);
  std::ostringstream text;
  text << in.rdbuf();
  std::string stem = file.stem().string();
  text << "\n";
  if (!has_csv) {
    text << "output.csv = " << (outdir / (stem + ".csv")).string() << "\n";
  }
  if (!has_plot) {
    text << "output.plot = " << (outdir / (stem + ".svg")).string() << "\n";
  }
  return Config::parse_string(text.str(), file.string());
}

int run_bench(const std::string& dir, const std::string& out) {
  if (!fs::exists(dir) || !fs::is_directory(dir)) {
    throw rminmax::ConfigError("bench: '" + dir + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".cfg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw rminmax::ConfigError("bench: no .cfg files in '" + dir + "'");
  }
  fs::create_directories(out);
  for (const auto& file : files) {
    Config cfg = with_default_outputs(file, out);
    std::cout << "=== " << file.filename().string() << "\n";
    rminmax::ExperimentResult res = rminmax::run_experiment(cfg);
    std::cout << res.summary << "\n";
  }
  std::cout << "wrote traces and plots under " << out << "\n";
  return kExitOk;
}

int run_check(const std::string& scope, const std::string& config_dir) {
  std::string dir = config_dir;
  if (dir.empty() && fs::exists("configs")) dir = "configs";
  rminmax::CheckReport rep = rminmax::validate_suite(scope, dir);
  std::cout << rep.to_text();
  return rep.all_pass() ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Benchmark driver for geodesically convex minimization and "
      "strongly-convex strongly-concave saddle problems on Hadamard "
      "manifolds"};
  app.require_subcommand(1);

  std::string solve_path;
  CLI::App* solve = app.add_subcommand(
      "solve", "Run the experiment described by one config file");
  solve->add_option("config", solve_path, "Path to a .cfg file")->required();

  std::string bench_dir;
  std::string bench_out = "bench_out";
  CLI::App* bench = app.add_subcommand(
      "bench", "Run every .cfg in a directory and write traces and plots");
  bench->add_option("dir", bench_dir, "Directory of .cfg files")->required();
  bench->add_option("--out", bench_out,
                    "Output directory for default artifacts");

  std::string check_scope = "all";
  std::string check_configs;
  CLI::App* check = app.add_subcommand(
      "check", "Run the property-check suites and report pass/fail");
  check->add_option("scope", check_scope, "geometry, solvers, or all");
  check->add_option("--configs", check_configs,
                    "Config directory for the shipped-instance check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(solve_path);
    if (bench->parsed()) return run_bench(bench_dir, bench_out);
    return run_check(check_scope, check_configs);
  } catch (const rminmax::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rminmax::GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rminmax::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitInvariant;
  }
}
