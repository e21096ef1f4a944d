#pragma once

#include <numbers>
#include <variant>

#include "qfluct/bloch.hpp"

// Units throughout: hbar = 1, time in ns, angular frequency and energy in rad/ns.

namespace qfluct {

/// H(t) = omega(t)/2 sigma_x with omega(t) = omega0/2 (1 + cos^2(pi t / tauA)).
struct AmplitudeModulated {
  double omega0;
  double tauA;

  double rabi_frequency(double t) const;
};

/// H(t) = omega0/2 (sigma_x cos(theta t) + sigma_y sin(theta t)).
///
/// Over one period 2 pi / theta the evolution equals (up to a global sign) that
/// of the time-independent Floquet generator H_F = 1/2 (omega0 sigma_x - theta sigma_z).
struct PhaseRotating {
  double omega0;
  double theta;

  double tau_theta() const { return 2.0 * std::numbers::pi / theta; }
  /// Signed mixing angle, alpha = -atan(omega0 / theta), in (-pi/2, 0).
  double alpha() const;
  /// Half the Floquet gap, sqrt(omega0^2 + theta^2) / 2.
  double e_theta() const;
  /// Unit axis of H_F on the Bloch sphere; also the Bloch vector of the up state.
  Vec3 floquet_axis() const;
};

class DriveSpec {
 public:
  using Family = std::variant<AmplitudeModulated, PhaseRotating>;

  /// Throws std::invalid_argument unless omega0 > 0 and tauA > 0.
  static DriveSpec amplitude_modulated(double omega0, double tauA);
  /// Throws std::invalid_argument unless omega0 > 0 and theta > 0.
  static DriveSpec phase_rotating(double omega0, double theta);

  const Family& family() const { return family_; }
  bool is_amplitude_modulated() const { return std::holds_alternative<AmplitudeModulated>(family_); }
  bool is_phase_rotating() const { return std::holds_alternative<PhaseRotating>(family_); }
  const AmplitudeModulated& amplitude() const { return std::get<AmplitudeModulated>(family_); }
  const PhaseRotating& phase() const { return std::get<PhaseRotating>(family_); }

  double omega0() const;

 private:
  explicit DriveSpec(Family f) : family_(f) {}
  Family family_;
};

struct EigenSystem {
  double ePlus;
  double eMinus;
  QubitState basisPlus;
  QubitState basisMinus;
};

struct ThermalContext {
  double beta = 0.0;
  /// Reservoir inverse pseudo-temperature; 0 encodes infinite temperature.
  double betaR = 0.0;
};

/// Measurement eigenbasis at time t. The amplitude family uses the
/// instantaneous eigenbasis (+-x, energies +-omega(t)/2); the phase family
/// uses the Floquet basis with constant energies +-E_theta.
EigenSystem instantaneous_eigensystem(const DriveSpec& drive, double t);

/// Closed-form integral of omega(t) over [t0, t1].
double phase_integral(const AmplitudeModulated& drive, double t0, double t1);

/// Bloch image of the exact propagator U(t1, t0). Throws std::invalid_argument if t1 < t0.
Rotation propagator(const DriveSpec& drive, double t0, double t1);

QubitState evolve_unitary(const QubitState& state, const DriveSpec& drive, double t0, double t1);

/// Tr exp(-beta H(t)).
double partition_function(double beta, const DriveSpec& drive, double t);

/// Gibbs weight of the upper eigenstate at time t.
double gibbs_population(double beta, const DriveSpec& drive, double t);

/// Delta F = -ln(Z(tf)/Z(0)) / beta. Throws std::invalid_argument for beta = 0.
double free_energy_delta(double beta, const DriveSpec& drive, double tf);

/// Inverse temperature whose Gibbs state puts `pUp` on the upper level at t = 0.
double beta_for_up_population(double pUp, const DriveSpec& drive);

}  // namespace qfluct
