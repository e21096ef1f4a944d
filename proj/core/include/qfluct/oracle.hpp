#pragma once

#include <limits>
#include <vector>

#include "qfluct/drive.hpp"
#include "qfluct/protocol.hpp"

// Closed-form ground truth for the pulsed two-level protocol. Heats are gained
// by the system; all quantities assume pulses at tau, 2 tau, ... and an initial
// Gibbs state of the configured inverse temperature.

namespace qfluct::oracle {

/// Upper-level population after n pulses of the amplitude-modulated protocol.
double population_after_n_pulses(double p0, double pA, int n);

struct WorkHeatSeries {
  std::vector<double> perPulseW;
  std::vector<double> perPulseQ;
  /// Work done between the last pulse and the final time.
  double tailW = 0.0;
  double totalW = 0.0;
  double totalQ = 0.0;
};

/// Work and heat up to `tf` (pulse count follows tf). Amplitude family only,
/// otherwise std::invalid_argument.
WorkHeatSeries mean_work_amplitude(const ProtocolConfig& config, double tf);

/// Work and heat over exactly `nPulses` periods. Amplitude family only.
WorkHeatSeries mean_heat_amplitude(const ProtocolConfig& config, int nPulses);

/// k = 1 + (1 - pD) cos^2(alpha). With this sign the recursion below
/// overstates the contraction; dephased_floquet_recursion has the other sign.
double k_factor(double pD, double alpha);

struct RecursionResult {
  double value;
  /// False when pA k >= 1 and the recursion no longer contracts.
  bool contractive;
};

/// P_n = P_inf + (1 - pA k)^n (P_0 - P_inf) with k from k_factor and P_inf from floquet_asymptote.
RecursionResult floquet_population_recursion(double p0, double pA, double pD, double alpha, int n);

/// Limit of floquet_population_recursion, (1 - (pD / k) cos alpha) / 2.
double floquet_asymptote(double pD, double alpha);

/// pD whose floquet_asymptote equals `target`. Throws ConfigError when outside [0, 1].
double invert_floquet_asymptote(double target, double alpha);

/// Population recursion for a pulse acting on a state diagonal in the Floquet
/// basis, with k' = 1 - (1 - pD) cos^2(alpha). Exact whenever the post-pulse
/// Floquet coherences vanish.
RecursionResult dephased_floquet_recursion(double p0, double pA, double pD, double alpha, int n);

/// Mean heat, in the k_factor form, after nPulses periods of the phase-rotating protocol.
double mean_heat_phase(const ProtocolConfig& config, int nPulses);

/// P(up | up) under the pulse-free phase-rotating drive.
double rabi_conditional(double omega0, double theta, double t);

/// <W> - dF for the closed evolution from a Gibbs state. Throws
/// std::invalid_argument unless 0 <= tf < firstPulse and the drive is amplitude-modulated.
double w_irr(double beta, const DriveSpec& drive, double tf,
             double firstPulse = std::numeric_limits<double>::infinity());

/// S(rho_0 || rho_th(tf)) / beta, an independent route to w_irr.
double w_irr_relative_entropy(double beta, const DriveSpec& drive, double tf);

}  // namespace qfluct::oracle
