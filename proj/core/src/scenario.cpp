#include "qfluct/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "qfluct/errors.hpp"
#include "qfluct/montecarlo.hpp"
#include "qfluct/oracle.hpp"

namespace qfluct {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kMaxTrajectories = 10'000'000;
constexpr double kStroboscopicSlack = 1e-9;

constexpr double kColumnSumTolerance = 1e-12;
constexpr double kAmplitudeFrTolerance = 1e-9;
constexpr double kFirstLawTolerance = 1e-9;  // in units of omega0
constexpr double kAsymptoteTolerance = 1e-3;

// ---- schema helpers ----------------------------------------------------------

const ordered_json& member(const ordered_json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(fmt::format("{}: missing \"{}\"", where, key));
  }
  return obj.at(key);
}

double number(const ordered_json& obj, const char* key, const std::string& where) {
  const ordered_json& v = member(obj, key, where);
  if (!v.is_number()) {
    throw ConfigError(fmt::format("{}.{}: expected a number", where, key));
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw ConfigError(fmt::format("{}.{}: not finite", where, key));
  }
  return d;
}

std::optional<double> optional_number(const ordered_json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return number(obj, key, where);
}

std::uint64_t unsigned_integer(const ordered_json& obj, const char* key, const std::string& where) {
  const ordered_json& v = member(obj, key, where);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(fmt::format("{}.{}: expected a non-negative integer", where, key));
  }
  return v.get<std::uint64_t>();
}

std::string text(const ordered_json& obj, const char* key, const std::string& where) {
  const ordered_json& v = member(obj, key, where);
  if (!v.is_string()) {
    throw ConfigError(fmt::format("{}.{}: expected a string", where, key));
  }
  return v.get<std::string>();
}

const char* family_name(DriveFamily f) {
  return f == DriveFamily::amplitudeModulated ? "amplitude_modulated" : "phase_rotating";
}

const char* mode_name(RunMode m) {
  switch (m) {
    case RunMode::deterministic: return "deterministic";
    case RunMode::montecarlo: return "montecarlo";
    case RunMode::both: return "both";
  }
  return "deterministic";
}

const char* weighting_name(GibbsWeighting w) {
  return w == GibbsWeighting::postWeight ? "post_weight" : "sample_initial";
}

ordered_json to_json_object(const ScenarioConfig& c) {
  ordered_json j;
  j["name"] = c.name;
  if (!c.description.empty()) j["description"] = c.description;

  ordered_json& drive = j["drive"];
  drive["family"] = family_name(c.family);
  drive["omega0"] = c.omega0;
  drive[c.family == DriveFamily::amplitudeModulated ? "tau_a" : "tau_theta"] = c.drivePeriod;

  ordered_json& channel = j["channel"];
  channel["p_a"] = c.pA;
  if (c.pD) channel["p_d"] = *c.pD;
  if (c.targetUpInfinity) channel["target_p_up_infinity"] = *c.targetUpInfinity;

  ordered_json& protocol = j["protocol"];
  protocol["tau"] = c.tau;
  protocol["tf_grid"] = {{"start", c.grid.start}, {"stop", c.grid.stop}, {"points", c.grid.points}};
  if (c.beta) protocol["beta"] = *c.beta;
  if (c.pUpInitial) protocol["p_up_initial"] = *c.pUpInitial;
  protocol["gibbs_weighting"] = weighting_name(c.weighting);

  j["mc"] = {{"mode", mode_name(c.mode)},
             {"trajectories", c.trajectories},
             {"master_seed", c.masterSeed},
             {"workers", c.workers}};
  if (c.outputDirectory) j["output"] = {{"directory", *c.outputDirectory}};
  return j;
}

// ---- output helpers ----------------------------------------------------------

std::string num(double v) { return fmt::format("{:.12g}", v); }

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, std::string_view header) : out_(path, std::ios::binary) {
    if (!out_) {
      throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    out_ << header << '\n';
  }

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << fields, first = false), ...);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

bool stroboscopic(double tf, double tau) {
  const double k = std::round(tf / tau);
  return std::abs(tf - k * tau) <= kStroboscopicSlack * tau;
}

}  // namespace

std::vector<double> TfGrid::values() const {
  std::vector<double> v;
  v.reserve(points);
  for (int i = 0; i < points; ++i) {
    v.push_back(points == 1 ? start : start + (stop - start) * i / (points - 1));
  }
  return v;
}

ScenarioConfig parse_scenario(std::string_view json) {
  ordered_json j;
  try {
    j = ordered_json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  ScenarioConfig c;
  c.name = text(j, "name", "config");
  if (c.name.empty()) throw ConfigError("config.name: must not be empty");
  if (j.contains("description")) c.description = text(j, "description", "config");

  const ordered_json& drive = member(j, "drive", "config");
  const std::string family = text(drive, "family", "drive");
  if (family == "amplitude_modulated") {
    c.family = DriveFamily::amplitudeModulated;
    c.drivePeriod = number(drive, "tau_a", "drive");
  } else if (family == "phase_rotating") {
    c.family = DriveFamily::phaseRotating;
    c.drivePeriod = number(drive, "tau_theta", "drive");
  } else {
    throw ConfigError(fmt::format("drive.family: unknown family \"{}\"", family));
  }
  c.omega0 = number(drive, "omega0", "drive");

  const ordered_json& channel = member(j, "channel", "config");
  c.pA = number(channel, "p_a", "channel");
  c.pD = optional_number(channel, "p_d", "channel");
  c.targetUpInfinity = optional_number(channel, "target_p_up_infinity", "channel");

  const ordered_json& protocol = member(j, "protocol", "config");
  c.tau = number(protocol, "tau", "protocol");
  const ordered_json& grid = member(protocol, "tf_grid", "protocol");
  c.grid.start = number(grid, "start", "protocol.tf_grid");
  c.grid.stop = number(grid, "stop", "protocol.tf_grid");
  const std::uint64_t points = unsigned_integer(grid, "points", "protocol.tf_grid");
  if (points < 1 || points > 100000) throw ConfigError("protocol.tf_grid.points: must lie in [1, 100000]");
  c.grid.points = static_cast<int>(points);
  c.beta = optional_number(protocol, "beta", "protocol");
  c.pUpInitial = optional_number(protocol, "p_up_initial", "protocol");
  if (protocol.contains("gibbs_weighting")) {
    const std::string w = text(protocol, "gibbs_weighting", "protocol");
    if (w == "post_weight") {
      c.weighting = GibbsWeighting::postWeight;
    } else if (w == "sample_initial") {
      c.weighting = GibbsWeighting::sampleInitial;
    } else {
      throw ConfigError(fmt::format("protocol.gibbs_weighting: unknown mode \"{}\"", w));
    }
  }

  if (j.contains("mc")) {
    const ordered_json& mc = j.at("mc");
    if (mc.contains("mode")) {
      const std::string m = text(mc, "mode", "mc");
      if (m == "deterministic") {
        c.mode = RunMode::deterministic;
      } else if (m == "montecarlo") {
        c.mode = RunMode::montecarlo;
      } else if (m == "both") {
        c.mode = RunMode::both;
      } else {
        throw ConfigError(fmt::format("mc.mode: unknown mode \"{}\"", m));
      }
    }
    if (mc.contains("trajectories")) c.trajectories = unsigned_integer(mc, "trajectories", "mc");
    if (mc.contains("master_seed")) c.masterSeed = unsigned_integer(mc, "master_seed", "mc");
    if (mc.contains("workers")) c.workers = static_cast<unsigned>(unsigned_integer(mc, "workers", "mc"));
  }
  if (j.contains("output")) {
    c.outputDirectory = text(j.at("output"), "directory", "output");
  }
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read config {}", file.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string scenario_to_json(const ScenarioConfig& config) { return to_json_object(config).dump(2) + "\n"; }

ProtocolConfig ResolvedScenario::protocol_at(double tf) const {
  ProtocolConfig p{drive, channel, config.tau, pulse_count(config.tau, tf), tf, thermal, config.weighting};
  return p;
}

ResolvedScenario resolve(const ScenarioConfig& c) {
  if (!(c.omega0 > 0.0)) throw ConfigError("drive.omega0: must be positive");
  if (!(c.drivePeriod > 0.0)) throw ConfigError("drive period: must be positive");
  if (!(c.pA >= 0.0 && c.pA <= 1.0)) throw ConfigError("channel.p_a: must lie in [0, 1]");
  if (c.pD.has_value() == c.targetUpInfinity.has_value()) {
    throw ConfigError("channel: give exactly one of \"p_d\" and \"target_p_up_infinity\"");
  }
  if (c.pD && !(*c.pD >= 0.0 && *c.pD <= 1.0)) throw ConfigError("channel.p_d: must lie in [0, 1]");
  if (!(c.tau > 0.0)) throw ConfigError("protocol.tau: must be positive");
  if (!(c.grid.start >= 0.0) || !(c.grid.stop >= c.grid.start)) {
    throw ConfigError("protocol.tf_grid: need 0 <= start <= stop");
  }
  if (c.beta.has_value() == c.pUpInitial.has_value()) {
    throw ConfigError("protocol: give exactly one of \"beta\" and \"p_up_initial\"");
  }
  if (c.trajectories < 1 || c.trajectories > kMaxTrajectories) {
    throw ConfigError(fmt::format("mc.trajectories: must lie in [1, {}]", kMaxTrajectories));
  }

  const DriveSpec drive = c.family == DriveFamily::amplitudeModulated
                              ? DriveSpec::amplitude_modulated(c.omega0, c.drivePeriod)
                              : DriveSpec::phase_rotating(c.omega0, 2.0 * std::numbers::pi / c.drivePeriod);

  double pD = c.pD.value_or(0.0);
  bool inverted = false;
  if (c.targetUpInfinity) {
    if (c.family != DriveFamily::phaseRotating) {
      throw ConfigError("channel.target_p_up_infinity: only defined for the phase-rotating drive");
    }
    pD = solve_pump_for_asymptote(drive, c.pA, *c.targetUpInfinity);
    inverted = true;
  }
  if (!(pD >= 0.0 && pD <= 1.0)) {
    throw ConfigError(fmt::format("resolved p_d = {} outside [0, 1]", pD));
  }

  ThermalContext thermal;
  if (c.beta) {
    thermal.beta = *c.beta;
  } else {
    try {
      thermal.beta = beta_for_up_population(*c.pUpInitial, drive);
    } catch (const OutOfRangeError& e) {
      throw ConfigError(fmt::format("protocol.p_up_initial: {}", e.what()));
    }
  }

  ResolvedScenario r{c, drive, PulseChannelParams(c.pA, pD), thermal, false, std::nullopt, std::nullopt};
  r.pumpInverted = inverted;
  if (c.family == DriveFamily::phaseRotating && c.pA > 0.0) {
    const ProtocolConfig base = r.protocol_at(c.tau);
    r.pUpInfinity = asymptotic_up_population(base);
    r.pUpInfinityOnePeriod = one_period_up_population(base);
    try {
      r.thermal.betaR = beta_reservoir(*r.pUpInfinity, 2.0 * drive.phase().e_theta());
    } catch (const OutOfRangeError& e) {
      throw ConfigError(fmt::format("channel: {}", e.what()));
    }
  }
  return r;
}

RunSummary run_scenario(const ResolvedScenario& s, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  RunSummary summary;
  summary.directory = directory;
  const auto violation = [&](std::string what) { summary.violations.push_back(std::move(what)); };

  const ScenarioConfig& c = s.config;
  const double w0 = c.omega0;
  const double gamma = s.gamma();
  const bool amplitude = c.family == DriveFamily::amplitudeModulated;
  const bool pulsed = c.pA > 0.0;
  const bool runDet = c.mode != RunMode::montecarlo;
  const bool runMc = c.mode != RunMode::deterministic;
  const std::vector<double> grid = c.grid.values();

  CsvFile conditional(directory / "conditional.csv",
                      "mode,t_f,N_L,p_plus_given_plus,p_plus_given_minus,stderr_plus,stderr_minus,"
                      "oracle_plus_given_plus,oracle_plus_given_minus,"
                      "dephased_plus_given_plus,dephased_plus_given_minus");
  CsvFile energetics(directory / "energetics.csv",
                     "mode,t_f,N_L,delta_e,work,heat_system,heat_reservoir,work_oracle,"
                     "heat_system_oracle,delta_f,first_law_residual");
  CsvFile fr(directory / "fr.csv", "mode,t_f,N_L,gamma,fr_value,fr_target,fr_stderr,deviation");
  CsvFile bloch(directory / "bloch.csv", "mode,t_f,N_L,initial,rx,ry,rz");

  const double p0 = initial_up_weight(s.protocol_at(0.0));
  const auto delta_f = [&](double tf) {
    return s.thermal.beta == 0.0 ? 0.0 : free_energy_delta(s.thermal.beta, s.drive, tf);
  };

  if (runDet) {
    const EigenSystem start = instantaneous_eigensystem(s.drive, 0.0);
    for (double tf : grid) {
      const ProtocolConfig pc = s.protocol_at(tf);
      const int n = pc.nPulses;
      const ConditionalMatrix cm = conditional_matrix(pc);
      const EnergyChangeDistribution dist = energy_change_distribution(cm, pc);
      const Energetics en = propagated_energetics(pc);

      std::optional<double> orUp, orDown, dephUp, dephDown, workOracle, heatOracle;
      if (amplitude) {
        orUp = oracle::population_after_n_pulses(1.0, c.pA, n);
        orDown = oracle::population_after_n_pulses(0.0, c.pA, n);
        const oracle::WorkHeatSeries series = oracle::mean_work_amplitude(pc, tf);
        workOracle = series.totalW;
        heatOracle = series.totalQ;
      } else {
        const PhaseRotating& ph = s.drive.phase();
        if (!pulsed) {
          orUp = oracle::rabi_conditional(ph.omega0, ph.theta, tf);
          orDown = 1.0 - *orUp;
        } else if (stroboscopic(tf, c.tau)) {
          const double alpha = ph.alpha();
          orUp = oracle::floquet_population_recursion(1.0, c.pA, s.channel.pD(), alpha, n).value;
          orDown = oracle::floquet_population_recursion(0.0, c.pA, s.channel.pD(), alpha, n).value;
          dephUp = oracle::dephased_floquet_recursion(1.0, c.pA, s.channel.pD(), alpha, n).value;
          dephDown = oracle::dephased_floquet_recursion(0.0, c.pA, s.channel.pD(), alpha, n).value;
          heatOracle = oracle::mean_heat_phase(pc, n);
        }
        if (stroboscopic(tf, ph.tau_theta())) workOracle = 0.0;
      }

      const double residual = amplitude ? first_law_check(dist, *workOracle, *heatOracle)
                                        : first_law_check(dist, en.work, en.heatSystem);
      const double deltaE = mean_energy_change(dist);
      const double frValue = fr_functional(dist, gamma);
      const double target = fr_target(pc);

      conditional.row("deterministic", num(tf), n, num(cm.up_given(EigenIndex::plus)),
                      num(cm.up_given(EigenIndex::minus)), "", "", opt(orUp), opt(orDown), opt(dephUp),
                      opt(dephDown));
      energetics.row("deterministic", num(tf), n, num(deltaE / w0), num(en.work / w0),
                     num(en.heatSystem / w0), num(-en.heatSystem / w0),
                     opt(workOracle ? std::optional(*workOracle / w0) : std::nullopt),
                     opt(heatOracle ? std::optional(*heatOracle / w0) : std::nullopt), num(delta_f(tf) / w0),
                     num(residual / w0));
      fr.row("deterministic", num(tf), n, num(gamma * w0), num(frValue), num(target), "",
             num(frValue - target));
      for (EigenIndex i : {EigenIndex::plus, EigenIndex::minus}) {
        const QubitState r = propagate(pc, i == EigenIndex::plus ? start.basisPlus : start.basisMinus);
        bloch.row("deterministic", num(tf), n, i == EigenIndex::plus ? "plus" : "minus", num(r.rx()),
                  num(r.ry()), num(r.rz()));
        if (r.purity_radius() > 1.0 + QubitState::kNormTolerance) {
          violation(fmt::format("t_f = {}: Bloch radius {} exceeds 1", tf, r.purity_radius()));
        }
      }

      for (int col = 0; col < 2; ++col) {
        const double sum = cm.pJgivenI[0][col] + cm.pJgivenI[1][col];
        if (std::abs(sum - 1.0) > kColumnSumTolerance) {
          violation(fmt::format("t_f = {}: conditional column {} sums to {}", tf, col, sum));
        }
      }
      if (amplitude) {
        if (std::abs(frValue - target) > kAmplitudeFrTolerance) {
          violation(fmt::format("t_f = {}: <exp(-beta dE)> = {} but Z(t_f)/Z(0) = {}", tf, frValue, target));
        }
        if (std::abs(residual) > kFirstLawTolerance * w0) {
          violation(fmt::format("t_f = {}: first-law residual {} omega0", tf, residual / w0));
        }
      }
    }
  }

  if (runMc) {
    McOptions options;
    options.workers = c.workers;
    const std::vector<EnsembleStats> stats =
        run_trajectory_sweep(s.protocol_at(c.grid.stop), grid, c.trajectories, c.masterSeed, options);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double tf = grid[k];
      const ProtocolConfig pc = s.protocol_at(tf);
      const ConditionalMatrix cm = stats[k].conditional_estimate();
      const auto se = stats[k].std_err();
      const auto col = [&](EigenIndex i, double v) {
        return stats[k].has_column(i) ? num(v) : std::string();
      };
      conditional.row("montecarlo", num(tf), pc.nPulses, col(EigenIndex::plus, cm.up_given(EigenIndex::plus)),
                      col(EigenIndex::minus, cm.up_given(EigenIndex::minus)), col(EigenIndex::plus, se[0][0]),
                      col(EigenIndex::minus, se[0][1]), "", "", "", "");
      try {
        const FrReport rep = fr_estimate_mc(stats[k], pc, gamma);
        energetics.row("montecarlo", num(tf), pc.nPulses, num(rep.meanDeltaE / w0), "", "", "", "", "",
                       num(delta_f(tf) / w0), "");
        fr.row("montecarlo", num(tf), pc.nPulses, num(gamma * w0), num(rep.frValue), num(rep.frTarget),
               num(rep.stdErr.value_or(0.0)), num(rep.frValue - rep.frTarget));
      } catch (const IncompleteEnsembleError&) {
        energetics.row("montecarlo", num(tf), pc.nPulses, "", "", "", "", "", "", num(delta_f(tf) / w0), "");
        fr.row("montecarlo", num(tf), pc.nPulses, num(gamma * w0), "", num(fr_target(pc)), "", "");
      }
    }
  }

  ordered_json manifest = to_json_object(c);
  manifest.erase("output");
  ordered_json& d = manifest["derived"];
  d["energy_unit"] = "omega0";
  d["beta"] = s.thermal.beta;
  d["beta_omega0"] = s.thermal.beta * w0;
  d["p_up_initial"] = p0;
  d["p_d"] = s.channel.pD();
  d["p_d_inverted"] = s.pumpInverted;
  if (!amplitude) {
    const PhaseRotating& ph = s.drive.phase();
    d["theta"] = ph.theta;
    d["alpha"] = ph.alpha();
    d["alpha_abs_degrees"] = std::abs(ph.alpha()) * 180.0 / std::numbers::pi;
    d["e_theta"] = ph.e_theta();
    d["k_plus_form"] = oracle::k_factor(s.channel.pD(), ph.alpha());
    const double cosA = std::cos(ph.alpha());
    d["k_dephased"] = 1.0 - (1.0 - s.channel.pD()) * cosA * cosA;
  }
  if (s.pUpInfinity) {
    d["p_up_infinity"] = *s.pUpInfinity;
    d["p_up_infinity_one_period"] = *s.pUpInfinityOnePeriod;
    d["beta_r"] = s.thermal.betaR;
    d["beta_r_gap"] = s.thermal.betaR * 2.0 * s.drive.phase().e_theta();
    d["p_up_infinity_plus_form"] = oracle::floquet_asymptote(s.channel.pD(), s.drive.phase().alpha());
  } else {
    d["beta_r"] = s.thermal.betaR;
  }
  if (c.targetUpInfinity && s.pUpInfinity) {
    const double dev = std::abs(*s.pUpInfinity - *c.targetUpInfinity);
    d["asymptote_check"] = {{"target", *c.targetUpInfinity},
                            {"fixed_point", *s.pUpInfinity},
                            {"deviation", dev},
                            {"tolerance", kAsymptoteTolerance},
                            {"passed", dev <= kAsymptoteTolerance}};
    if (dev > kAsymptoteTolerance) {
      violation(fmt::format("inverted fixed point {} misses target {}", *s.pUpInfinity, *c.targetUpInfinity));
    }
  }
  d["violations"] = summary.violations;
  manifest["build"] = {{"version", QFLUCT_VERSION}, {"format", 1}};
  {
    std::ofstream out(directory / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
  }
  summary.files = {"conditional.csv", "energetics.csv", "fr.csv", "bloch.csv", "manifest.json"};
  return summary;
}

}  // namespace qfluct
