#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfluct/channel.hpp"
#include "qfluct/drive.hpp"
#include "qfluct/protocol.hpp"

namespace qfluct {

enum class DriveFamily { amplitudeModulated, phaseRotating };
enum class RunMode { deterministic, montecarlo, both };

struct TfGrid {
  double start = 0.0;
  double stop = 0.0;
  int points = 1;

  std::vector<double> values() const;
};

/// A scenario as written in a JSON config file.
///
///   {
///     "name": "fig5c",
///     "description": "...",
///     "drive":    {"family": "phase_rotating", "omega0": 0.0050265, "tau_theta": 616},
///     "channel":  {"p_a": 0.25, "target_p_up_infinity": 0.138},
///     "protocol": {"tau": 616, "tf_grid": {"start": 0, "stop": 30800, "points": 51},
///                  "p_up_initial": 0.303, "gibbs_weighting": "post_weight"},
///     "mc":       {"mode": "both", "trajectories": 100000, "master_seed": 1, "workers": 0},
///     "output":   {"directory": "runs"}
///   }
///
/// The amplitude family takes "tau_a" in place of "tau_theta". The channel
/// takes either "p_d" or "target_p_up_infinity"; the protocol takes either
/// "beta" (per rad/ns) or "p_up_initial". Unknown top-level keys are ignored,
/// so a run manifest reads back as a config.
struct ScenarioConfig {
  std::string name;
  std::string description;

  DriveFamily family = DriveFamily::amplitudeModulated;
  double omega0 = 0.0;
  /// tau_a for the amplitude family, tau_theta for the phase family.
  double drivePeriod = 0.0;

  double pA = 0.0;
  std::optional<double> pD;
  std::optional<double> targetUpInfinity;

  double tau = 0.0;
  TfGrid grid;
  std::optional<double> beta;
  std::optional<double> pUpInitial;
  GibbsWeighting weighting = GibbsWeighting::postWeight;

  RunMode mode = RunMode::deterministic;
  std::uint64_t trajectories = 100000;
  std::uint64_t masterSeed = 1;
  unsigned workers = 0;

  std::optional<std::string> outputDirectory;
};

/// Throws ConfigError with a readable message on any schema violation.
ScenarioConfig parse_scenario(std::string_view json);
ScenarioConfig load_scenario(const std::filesystem::path& file);
std::string scenario_to_json(const ScenarioConfig& config);

/// A scenario with every derived parameter in place.
struct ResolvedScenario {
  ScenarioConfig config;
  DriveSpec drive;
  PulseChannelParams channel;
  ThermalContext thermal;
  bool pumpInverted = false;
  /// Fixed-point upper-level population (phase family with pulses).
  std::optional<double> pUpInfinity;
  /// Stationary population of the one-period two-level map.
  std::optional<double> pUpInfinityOnePeriod;

  ProtocolConfig protocol_at(double tf) const;
  /// beta - betaR: the exponent of the exchange relation.
  double gamma() const { return thermal.beta - thermal.betaR; }
};

ResolvedScenario resolve(const ScenarioConfig& config);

struct RunSummary {
  std::filesystem::path directory;
  std::vector<std::string> files;
  /// Numerical contracts breached during the run; empty on success.
  std::vector<std::string> violations;
};

/// Writes conditional.csv, energetics.csv, fr.csv, bloch.csv and manifest.json
/// into `directory`. Energies in the outputs are in units of omega0.
RunSummary run_scenario(const ResolvedScenario& scenario, const std::filesystem::path& directory);

struct PresetEntry {
  std::string name;
  std::string summary;
  ScenarioConfig config;
};

/// Catalog entries whose name starts with `filter` (all when empty).
std::vector<PresetEntry> list_presets(std::string_view filter = {});
std::optional<ScenarioConfig> find_preset(std::string_view name);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Fast invariant suite behind the `check` verb.
std::vector<CheckResult> run_invariant_checks();

}  // namespace qfluct
