#include <numbers>

#include <fmt/format.h>

#include "qfluct/scenario.hpp"

namespace qfluct {
namespace {

constexpr double kTauA = 616.0;
constexpr double kAmplitudeOmega0 = std::numbers::pi / kTauA;
constexpr double kPhaseOmega0 = 2.0 * std::numbers::pi * 0.8e-3;
constexpr double kDefaultAbsorption = 0.25;
constexpr int kAmplitudePulses = 12;

ScenarioConfig amplitude(const char* name, const char* description, double tau) {
  ScenarioConfig c;
  c.name = name;
  c.description = description;
  c.family = DriveFamily::amplitudeModulated;
  c.omega0 = kAmplitudeOmega0;
  c.drivePeriod = kTauA;
  c.pA = kDefaultAbsorption;
  c.pD = 0.0;
  c.tau = tau;
  // Quarter-period steps so every pulse time is on the grid.
  c.grid = {0.0, kAmplitudePulses * tau, 4 * kAmplitudePulses + 1};
  c.beta = 2.0 / kAmplitudeOmega0;
  c.mode = RunMode::both;
  return c;
}

ScenarioConfig phase(const char* name, const char* description, double tauTheta, double pUpInitial,
                     int periods) {
  ScenarioConfig c;
  c.name = name;
  c.description = description;
  c.family = DriveFamily::phaseRotating;
  c.omega0 = kPhaseOmega0;
  c.drivePeriod = tauTheta;
  c.pA = kDefaultAbsorption;
  c.tau = tauTheta;
  c.grid = {0.0, periods * tauTheta, periods + 1};
  c.pUpInitial = pUpInitial;
  c.mode = RunMode::both;
  return c;
}

std::string fmt_summary(const char* name, double pUp, double tauTheta, const char* what) {
  return fmt::format("{}: P_↑(0) = {:g}, τ_θ = {:g} ns, {}", name, pUp, tauTheta, what);
}

ScenarioConfig pumped(ScenarioConfig c, double target) {
  c.targetUpInfinity = target;
  return c;
}

std::vector<PresetEntry> catalog() {
  std::vector<PresetEntry> out;
  const auto add = [&](std::string summary, ScenarioConfig c) {
    out.push_back({c.name, std::move(summary), std::move(c)});
  };

  add("fig2a: τ = 410 ns, τ_A = 616 ns, conditional probabilities under amplitude modulation",
      amplitude("fig2a", "Conditional probabilities vs final time, amplitude-modulated drive", 410.0));
  add("fig2bcd: τ = 410 ns, τ_A = 616 ns, mean Bloch trajectories from both eigenstates",
      amplitude("fig2bcd", "Mean Bloch vectors after each pulse, amplitude-modulated drive", 410.0));
  add("fig3a: τ = 410 ns, β = 2/ω₀, mean energy change, work and heat",
      amplitude("fig3a", "First law bookkeeping, pulses out of step with the drive", 410.0));
  add("fig3b: τ = τ_A = 616 ns, β = 2/ω₀, mean energy change, work and heat",
      amplitude("fig3b", "First law bookkeeping, pulses at the drive period", kTauA));
  add("fig4a: τ = 410 ns, β = 2/ω₀, <exp(-β ΔE)> against Z(t_f)/Z(0)",
      amplitude("fig4a", "Fluctuation relation at infinite reservoir temperature", 410.0));
  add("fig4b: τ = 616 ns, β = 2/ω₀, <exp(-β ΔE)> against Z(t_f)/Z(0)",
      amplitude("fig4b", "Fluctuation relation at infinite reservoir temperature", kTauA));

  ScenarioConfig rabi = phase("fig5a", "Pulse-free Rabi oscillation in the Floquet basis", 616.0, 0.303, 4);
  rabi.pA = 0.0;
  rabi.pD = 0.0;
  rabi.grid = {0.0, 4 * 616.0, 200};
  add("fig5a: τ_θ = 616 ns, α = arctan(1/2), no pulses", rabi);

  add("fig5b: τ_θ = 1296 ns, α = π/4, P_↑^∞ = 0.276",
      pumped(phase("fig5b", "Relaxation to the channel fixed point", 1296.0, 0.509, 50), 0.276));
  add("fig5c: τ_θ = 616 ns, α = arctan(1/2), P_↑^∞ = 0.138",
      pumped(phase("fig5c", "Relaxation to the channel fixed point", 616.0, 0.303, 50), 0.138));
  add("fig5d: τ_θ = 308 ns, α = arctan(1/4), P_↑^∞ = 0.050",
      pumped(phase("fig5d", "Relaxation to the channel fixed point", 308.0, 0.126, 50), 0.050));

  struct PhaseSet {
    double tauTheta;
    double pUp;
    double target;
  };
  const PhaseSet sets[3] = {{1296.0, 0.509, 0.276}, {616.0, 0.303, 0.138}, {308.0, 0.126, 0.050}};
  const char* energyNames[3] = {"fig6a", "fig6b", "fig6c"};
  const char* frNames[3] = {"fig6d", "fig6e", "fig6f"};
  for (int i = 0; i < 3; ++i) {
    const PhaseSet& p = sets[i];
    add(fmt_summary(energyNames[i], p.pUp, p.tauTheta, "mean energy change against heat"),
        pumped(phase(energyNames[i], "Mean energy change and heat, pulses at the drive period", p.tauTheta,
                     p.pUp, 20),
               p.target));
  }
  for (int i = 0; i < 3; ++i) {
    const PhaseSet& p = sets[i];
    add(fmt_summary(frNames[i], p.pUp, p.tauTheta, "<exp(-(β - β_R) ΔE)> against 1"),
        pumped(phase(frNames[i], "Exchange fluctuation relation with an engineered reservoir", p.tauTheta,
                     p.pUp, 20),
               p.target));
  }
  return out;
}

}  // namespace

std::vector<PresetEntry> list_presets(std::string_view filter) {
  std::vector<PresetEntry> out;
  for (PresetEntry& e : catalog()) {
    if (e.name.starts_with(filter)) out.push_back(std::move(e));
  }
  return out;
}

std::optional<ScenarioConfig> find_preset(std::string_view name) {
  for (PresetEntry& e : catalog()) {
    if (e.name == name) return std::move(e.config);
  }
  return std::nullopt;
}

}  // namespace qfluct
