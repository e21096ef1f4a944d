#pragma once

#include <optional>
#include <utility>

#include "qfluct/bloch.hpp"
#include "qfluct/drive.hpp"
#include "qfluct/random.hpp"

namespace qfluct {

/// Laser-pulse dissipation channel. With probability pA the pulse is absorbed,
/// which measures sigma_z and then pumps |1> to |0> with probability pD.
class PulseChannelParams {
 public:
  /// Throws std::invalid_argument unless both probabilities lie in [0, 1].
  PulseChannelParams(double pA, double pD);

  double pA() const { return pA_; }
  double pD() const { return pD_; }

  bool operator==(const PulseChannelParams&) const = default;

 private:
  double pA_;
  double pD_;
};

enum class ProjectionOutcome { zero, one };

struct PulseEvent {
  bool absorbed = false;
  std::optional<ProjectionOutcome> projectionOutcome;
  std::optional<bool> pumped;
};

/// Ensemble-averaged pulse: (1 - pA) rho + pA Pump(Dephase(rho)).
QubitState apply_pulse_map(const QubitState& state, const PulseChannelParams& params);

/// One stochastic realization of a pulse. Absorbed outcomes are pure sigma_z eigenstates.
std::pair<QubitState, PulseEvent> sample_pulse(const QubitState& state,
                                               const PulseChannelParams& params,
                                               RandomStream& stream);

/// Post-pulse fixed point of one period: free evolution over [0, tau] followed by a pulse.
/// Throws DegenerateChannelError when pA = 0 or the affine system is singular.
QubitState channel_fixed_point(const DriveSpec& drive, const PulseChannelParams& params, double tau);

/// Pumping probability that places the fixed point's upper-level population at
/// `targetUp`, for a phase-rotating drive pulsed once per period.
/// Throws ConfigError when no pD in [0, 1] reaches the target.
double solve_pump_for_asymptote(const DriveSpec& drive, double pA, double targetUp);

}  // namespace qfluct
