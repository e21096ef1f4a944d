// qfluct: run pulsed-qubit fluctuation-relation scenarios from the command line.
//
//   qfluct run <config.json> [--out DIR]     run a scenario file
//   qfluct run --preset NAME [--out DIR]     run a catalog scenario
//   qfluct presets [FILTER] [--dump NAME]    list the catalog or print one config
//   qfluct invert --target P --tau-theta T   pumping probability for a fixed point
//   qfluct check                             fast invariant suite
//
// Exit codes: 0 success, 1 other failure, 2 invalid config, 3 numerical contract violation.
// QFLUCT_OUTPUT_DIR sets the default output directory.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qfluct/channel.hpp"
#include "qfluct/errors.hpp"
#include "qfluct/oracle.hpp"
#include "qfluct/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitContract = 3;

fs::path default_output_root() {
  if (const char* env = std::getenv("QFLUCT_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "qfluct-output";
}

int run_verb(const std::string& configPath, const std::string& presetName, const std::string& outDir) {
  qfluct::ScenarioConfig config;
  if (!presetName.empty()) {
    auto found = qfluct::find_preset(presetName);
    if (!found) throw qfluct::ConfigError(fmt::format("unknown preset \"{}\"", presetName));
    config = *found;
  } else if (!configPath.empty()) {
    config = qfluct::load_scenario(configPath);
  } else {
    throw qfluct::ConfigError("run: give a config file or --preset");
  }

  fs::path dir;
  if (!outDir.empty()) {
    dir = outDir;
  } else if (config.outputDirectory) {
    dir = fs::path(*config.outputDirectory) / config.name;
  } else {
    dir = default_output_root() / config.name;
  }

  const qfluct::ResolvedScenario resolved = qfluct::resolve(config);
  const qfluct::RunSummary summary = qfluct::run_scenario(resolved, dir);
  fmt::print("{}: wrote {} files to {}\n", config.name, summary.files.size(), summary.directory.string());
  if (!summary.violations.empty()) {
    for (const auto& v : summary.violations) fmt::print(stderr, "contract violation: {}\n", v);
    return kExitContract;
  }
  return 0;
}

int presets_verb(const std::string& filter, const std::string& dump) {
  if (!dump.empty()) {
    auto found = qfluct::find_preset(dump);
    if (!found) throw qfluct::ConfigError(fmt::format("unknown preset \"{}\"", dump));
    std::cout << qfluct::scenario_to_json(*found);
    return 0;
  }
  for (const auto& e : qfluct::list_presets(filter)) {
    fmt::print("{}\n", e.summary);
  }
  return 0;
}

int invert_verb(double target, double tauTheta, double omega0, double pA) {
  const auto drive = qfluct::DriveSpec::phase_rotating(omega0, 2.0 * std::numbers::pi / tauTheta);
  const double pD = qfluct::solve_pump_for_asymptote(drive, pA, target);
  const double alpha = drive.phase().alpha();
  fmt::print("p_d = {:.12g}\n", pD);
  fmt::print("alpha = {:.12g} rad ({:.4f} deg)\n", alpha, alpha * 180.0 / std::numbers::pi);
  try {
    fmt::print("p_d (closed form, k = 1 + (1 - p_d) cos^2 alpha) = {:.12g}\n", qfluct::oracle::invert_floquet_asymptote(target, alpha));
  } catch (const qfluct::ConfigError& e) {
    fmt::print("p_d (closed form, k = 1 + (1 - p_d) cos^2 alpha) unavailable: {}\n", e.what());
  }
  return 0;
}

int check_verb() {
  int failed = 0;
  for (const auto& r : qfluct::run_invariant_checks()) {
    fmt::print("[{}] {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
    failed += r.passed ? 0 : 1;
  }
  return failed == 0 ? 0 : kExitContract;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulsed-qubit fluctuation relations: deterministic channel propagation and Monte-Carlo trajectories"};
  app.require_subcommand(1);

  std::string configPath, presetName, outDir;
  auto* run = app.add_subcommand("run", "Run a scenario and write CSV files plus a JSON manifest");
  run->add_option("config", configPath, "Scenario JSON file");
  run->add_option("--preset", presetName, "Run a catalog scenario instead of a file");
  run->add_option("--out", outDir, "Output directory (default: $QFLUCT_OUTPUT_DIR/<name>)");

  std::string filter, dump;
  auto* presets = app.add_subcommand("presets", "List catalog scenarios");
  presets->add_option("filter", filter, "Name prefix");
  presets->add_option("--dump", dump, "Print the JSON config of one preset");

  double target = 0.0;
  double tauTheta = 0.0;
  double omega0 = 2.0 * std::numbers::pi * 0.8e-3;
  double pA = 0.25;
  auto* invert = app.add_subcommand("invert", "Solve the pumping probability for a target fixed-point population");
  invert->add_option("--target", target, "Upper-level fixed-point population")->required();
  invert->add_option("--tau-theta", tauTheta, "Drive period in ns")->required();
  invert->add_option("--omega0", omega0, "Rabi frequency in rad/ns")->capture_default_str();
  invert->add_option("--pa", pA, "Absorption probability")->capture_default_str();

  auto* check = app.add_subcommand("check", "Run the fast invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return run_verb(configPath, presetName, outDir);
    if (*presets) return presets_verb(filter, dump);
    if (*invert) return invert_verb(target, tauTheta, omega0, pA);
    if (*check) return check_verb();
  } catch (const qfluct::ConfigError& e) {
    fmt::print(stderr, "invalid config: {}\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "invalid config: {}\n", e.what());
    return kExitConfig;
  } catch (const qfluct::ContractViolation& e) {
    fmt::print(stderr, "contract violation: {}\n", e.what());
    return kExitContract;
  } catch (const qfluct::DegenerateChannelError& e) {
    fmt::print(stderr, "contract violation: {}\n", e.what());
    return kExitContract;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
