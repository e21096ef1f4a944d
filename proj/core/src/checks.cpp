#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qfluct/montecarlo.hpp"
#include "qfluct/oracle.hpp"
#include "qfluct/scenario.hpp"

namespace qfluct {
namespace {

struct Probe {
  double worst = 0.0;
  void see(double v) { worst = std::max(worst, std::abs(v)); }
};

CheckResult bounded(std::string name, const Probe& p, double tol) {
  return {std::move(name), p.worst <= tol, fmt::format("max deviation {:.3e} (tolerance {:.0e})", p.worst, tol)};
}

ResolvedScenario preset(std::string_view name) { return resolve(*find_preset(name)); }

}  // namespace

std::vector<CheckResult> run_invariant_checks() {
  std::vector<CheckResult> out;

  {
    Probe p;
    const DriveSpec drive = DriveSpec::phase_rotating(2.0 * std::numbers::pi * 0.8e-3, 2.0 * std::numbers::pi / 616.0);
    QubitState s(0.6, 0.0, 0.8);
    double t = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double dt = 37.0 + 13.0 * (k % 7);
      s = evolve_unitary(s, drive, t, t + dt);
      t += dt;
      p.see(s.purity_radius() - 1.0);
    }
    out.push_back(bounded("unitary segments preserve the Bloch radius", p, 1e-12));
  }

  for (const char* name : {"fig4a", "fig4b"}) {
    const ResolvedScenario s = preset(name);
    Probe fr, law, sym;
    for (double tf : s.config.grid.values()) {
      const ProtocolConfig pc = s.protocol_at(tf);
      const ConditionalMatrix cm = conditional_matrix(pc);
      const EnergyChangeDistribution dist = energy_change_distribution(cm, pc);
      fr.see(fr_functional(dist, s.thermal.beta) - fr_target(pc));
      const oracle::WorkHeatSeries series = oracle::mean_work_amplitude(pc, tf);
      law.see(first_law_check(dist, series.totalW, series.totalQ) / s.config.omega0);
      sym.see(cm.pJgivenI[0][1] - cm.pJgivenI[1][0]);
    }
    out.push_back(bounded(fmt::format("{}: <exp(-beta dE)> equals Z(t_f)/Z(0)", name), fr, 1e-9));
    out.push_back(bounded(fmt::format("{}: first law in units of omega0", name), law, 1e-9));
    out.push_back(bounded(fmt::format("{}: conditional matrix is symmetric", name), sym, 1e-12));
  }

  for (const char* name : {"fig6d", "fig6e", "fig6f"}) {
    ResolvedScenario s = preset(name);
    const ProtocolConfig one = s.protocol_at(s.config.tau);
    ThermalContext th = s.thermal;
    th.betaR = beta_reservoir(one_period_up_population(one), 2.0 * s.drive.phase().e_theta());
    const double value =
        fr_functional(energy_change_distribution(conditional_matrix(one), one), th.beta - th.betaR);
    Probe p;
    p.see(value - 1.0);
    out.push_back(bounded(fmt::format("{}: one-period exchange relation", name), p, 1e-10));
  }

  {
    const ResolvedScenario s = preset("fig5c");
    const ProtocolConfig pc = s.protocol_at(10 * s.config.tau);
    McOptions one{1, false};
    McOptions three{3, false};
    const EnsembleStats a = run_ensemble(pc, 2000, 42, one).stats;
    const EnsembleStats b = run_ensemble(pc, 2000, 42, three).stats;
    out.push_back({"Monte-Carlo tallies independent of worker count", a == b,
                   fmt::format("up counts {} / {} vs {} / {}", a.upCounts[0], a.upCounts[1], b.upCounts[0],
                               b.upCounts[1])});
  }

  {
    const ResolvedScenario s = preset("fig5c");
    Probe p;
    p.see(*s.pUpInfinity - *s.config.targetUpInfinity);
    out.push_back(bounded("pump inversion reaches the target fixed point", p, 1e-9));
  }
  return out;
}

}  // namespace qfluct
