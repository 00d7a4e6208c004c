// Command-line front end: run scenarios, check rigidity, sweep, echo.

#include <glob.h>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ftiss/analysis.hpp"
#include "ftiss/errors.hpp"
#include "ftiss/io.hpp"
#include "ftiss/sim.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kInvalid = 1, kGeometryFault = 2 };

std::mutex io_mutex;

void report(std::ostream& os, const std::string& text) {
  std::lock_guard<std::mutex> lock(io_mutex);
  os << text << std::flush;
}

int run_one(const fs::path& scenario_path, const fs::path& out_dir, bool quiet) {
  const ftiss::Scenario scenario = ftiss::load_scenario(scenario_path);
  const ftiss::TrajectoryLog log = ftiss::run(scenario);

  fs::create_directories(out_dir);
  const std::string stem = scenario_path.stem().string();
  ftiss::emit_csv(log, out_dir / (stem + ".csv"));
  ftiss::emit_plot_data(log, out_dir, stem);

  const auto report_data = ftiss::rigidity_report(scenario);
  const auto consts = ftiss::ftiss_constants(
      ftiss::rigidity_matrix(report_data.desired, scenario.graph, scenario.params), scenario.graph,
      scenario.gains, scenario.params.rho);
  const std::string summary = ftiss::emit_summary(log, scenario, consts);
  std::ofstream(out_dir / (stem + "_summary.txt")) << summary;
  if (!quiet) report(std::cout, summary);
  return kOk;
}

/// Maps exceptions onto exit codes, printing the message to stderr.
template <typename F>
int guarded(const std::string& label, F&& body) {
  try {
    return body();
  } catch (const ftiss::ParseError& e) {
    report(std::cerr, label + ": parse error: " + e.what() + "\n");
    return kInvalid;
  } catch (const ftiss::ValidationError& e) {
    report(std::cerr, label + ": " + e.what() + "\n");
    return kInvalid;
  } catch (const ftiss::GeometryError& e) {
    report(std::cerr, label + ": geometry fault: " + e.what() + "\n");
    return kGeometryFault;
  } catch (const std::exception& e) {
    report(std::cerr, label + ": " + e.what() + "\n");
    return kInvalid;
  }
}

int check_rigidity(const fs::path& path) {
  const ftiss::Scenario scenario = ftiss::load_scenario(path, /*require_rigidity=*/false);
  const auto r = ftiss::rigidity_report(scenario);
  std::cout << "scenario: " << scenario.name << "\n";
  std::cout << "rank(R_E) = " << r.rank << " / required " << r.required_rank << " (d = "
            << scenario.params.dimension() << ", n = " << scenario.agent_count() << ")\n";
  std::cout << "verdict: " << (r.rigid ? "infinitesimally rigid" : "NOT rigid") << "\n";
  std::cout << "lambda+ (R_E Mbar R_E^T): "
            << (r.lambda_plus ? ftiss::format_double(*r.lambda_plus) : std::string("none")) << "\n";
  std::cout << "singular values:";
  for (Eigen::Index k = 0; k < r.singular_values.size(); ++k) {
    std::cout << " " << ftiss::format_double(r.singular_values(k));
  }
  std::cout << "\n";
  return r.rigid ? kOk : kInvalid;
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  std::vector<fs::path> out;
  if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  return out;
}

int sweep(const std::string& pattern, const fs::path& out_dir) {
  const auto paths = expand_glob(pattern);
  if (paths.empty()) {
    std::cerr << "sweep: no scenario matches " << pattern << "\n";
    return kInvalid;
  }
  std::vector<std::future<int>> jobs;
  for (const auto& p : paths) {
    jobs.push_back(std::async(std::launch::async, [p, out_dir] {
      const int code = guarded(p.string(), [&] { return run_one(p, out_dir, true); });
      if (code == kOk) report(std::cout, p.string() + ": ok\n");
      return code;
    }));
  }
  int worst = kOk;
  for (auto& j : jobs) worst = std::max(worst, j.get());
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bearing-only FTISS formation control simulator"};
  app.require_subcommand(1);

  std::string scenario_arg;
  std::string out_dir = "out";

  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write CSV/plot data");
  run_cmd->add_option("scenario", scenario_arg, "Scenario file")->required();
  run_cmd->add_option("-o,--output", out_dir, "Output directory");

  auto* rig_cmd = app.add_subcommand("check-rigidity", "Rank test of the desired formation");
  rig_cmd->add_option("scenario", scenario_arg, "Scenario file")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Run every scenario matching a glob in parallel");
  sweep_cmd->add_option("pattern", scenario_arg, "Scenario glob, e.g. 'scenarios/*.scn'")
      ->required();
  sweep_cmd->add_option("-o,--output", out_dir, "Output directory");

  auto* echo_cmd = app.add_subcommand("echo", "Validate and print the normalized scenario");
  echo_cmd->add_option("scenario", scenario_arg, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalid;
  }

  if (*run_cmd) {
    return guarded(scenario_arg, [&] { return run_one(scenario_arg, out_dir, false); });
  }
  if (*rig_cmd) return guarded(scenario_arg, [&] { return check_rigidity(scenario_arg); });
  if (*sweep_cmd) return sweep(scenario_arg, out_dir);
  if (*echo_cmd) {
    return guarded(scenario_arg, [&] {
      std::cout << ftiss::format_scenario(ftiss::load_scenario(scenario_arg));
      return static_cast<int>(kOk);
    });
  }
  return kInvalid;
}
