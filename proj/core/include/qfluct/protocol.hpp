#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qfluct/channel.hpp"
#include "qfluct/drive.hpp"

namespace qfluct {

enum class GibbsWeighting {
  /// Run both eigenstate initializations and weight the columns afterwards.
  postWeight,
  /// Draw the initial eigenstate from the Gibbs distribution per trajectory.
  sampleInitial,
};

enum class EigenIndex { plus = 0, minus = 1 };

/// Number of pulses fired in [0, tf] when pulses sit at tau, 2 tau, ...
int pulse_count(double tau, double tf);

struct ProtocolConfig {
  DriveSpec drive;
  PulseChannelParams channel;
  double tau;
  int nPulses;
  double tf;
  ThermalContext thermal{};
  GibbsWeighting gibbsWeighting = GibbsWeighting::postWeight;

  /// Throws ConfigError on tau <= 0, nPulses < 0, tf < nPulses tau or non-finite temperatures.
  void validate() const;

  /// Copy with the final time moved to `newTf` and the pulse count following it.
  ProtocolConfig at_final_time(double newTf) const;
};

/// P(j | i): rows are the final outcome j, columns the initial eigenstate i.
struct ConditionalMatrix {
  std::array<std::array<double, 2>, 2> pJgivenI{};

  double operator()(EigenIndex j, EigenIndex i) const {
    return pJgivenI[static_cast<int>(j)][static_cast<int>(i)];
  }
  double up_given(EigenIndex i) const { return (*this)(EigenIndex::plus, i); }
};

struct EnergyAtom {
  double deltaE;
  double prob;
};

struct EnergyChangeDistribution {
  /// Sorted by deltaE, coincident values merged, zero-probability atoms dropped.
  std::vector<EnergyAtom> atoms;
};

struct FrReport {
  double meanDeltaE = 0.0;
  double frValue = 1.0;
  double frTarget = 1.0;
  double gamma = 0.0;
  std::optional<double> stdErr;
};

/// Deterministic propagation of `initial` from t = 0 to config.tf.
QubitState propagate(const ProtocolConfig& config, const QubitState& initial);

ConditionalMatrix conditional_matrix(const ProtocolConfig& config);

/// Upper-level Gibbs weight of the initial measurement.
double initial_up_weight(const ProtocolConfig& config);

EnergyChangeDistribution energy_change_distribution(const ConditionalMatrix& cm,
                                                    const ProtocolConfig& config);

/// Sum of prob * exp(-gamma deltaE).
double fr_functional(const EnergyChangeDistribution& dist, double gamma);

double mean_energy_change(const EnergyChangeDistribution& dist);

/// -ln(p / (1 - p)) / gap. Throws OutOfRangeError for p in {0, 1}, std::invalid_argument for gap <= 0.
double beta_reservoir(double pUpInfinity, double gap);

/// <dE> - (<W> + <Q>) with Q gained by the system.
double first_law_check(const EnergyChangeDistribution& dist, double meanW, double meanQ);

/// exp(-beta dF) = Z(tf) / Z(0); the right-hand side of every relation evaluated here.
double fr_target(const ProtocolConfig& config);

FrReport fr_report(const ConditionalMatrix& cm, const ProtocolConfig& config, double gamma);

/// Upper-level population of the exact channel fixed point (Bloch vector, coherences included).
double asymptotic_up_population(const ProtocolConfig& config);

/// Stationary upper-level population of the one-period two-level conditional matrix.
double one_period_up_population(const ProtocolConfig& config);

/// Mean work and system-gained heat of the Gibbs-weighted ensemble, obtained by
/// tracking the energy expectation through every unitary segment and pulse.
struct Energetics {
  double work = 0.0;
  double heatSystem = 0.0;
  double deltaE = 0.0;
};
Energetics propagated_energetics(const ProtocolConfig& config);

}  // namespace qfluct
