#include "qfluct/drive.hpp"

#include <cmath>
#include <stdexcept>

#include "qfluct/errors.hpp"

namespace qfluct {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Relative tolerance for deciding that a time sits on a drive period.
constexpr double kStroboscopicTolerance = 1e-9;

bool on_period(double t, double period) {
  const double k = std::round(t / period);
  return std::abs(t - k * period) <= kStroboscopicTolerance * period;
}

double upper_energy(const DriveSpec& drive, double t) {
  if (drive.is_amplitude_modulated()) {
    return 0.5 * drive.amplitude().rabi_frequency(t);
  }
  return drive.phase().e_theta();
}

// log(2 cosh x) without overflow for large |x|.
double log_two_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a));
}

}  // namespace

double AmplitudeModulated::rabi_frequency(double t) const {
  // Reduce onto one period first so that omega(n tauA) == omega(0) exactly.
  const double c = std::cos(std::numbers::pi * std::fmod(t, tauA) / tauA);
  return 0.5 * omega0 * (1.0 + c * c);
}

double PhaseRotating::alpha() const { return -std::atan(omega0 / theta); }

double PhaseRotating::e_theta() const { return 0.5 * std::hypot(omega0, theta); }

Vec3 PhaseRotating::floquet_axis() const {
  const double norm = std::hypot(omega0, theta);
  return {omega0 / norm, 0.0, -theta / norm};
}

DriveSpec DriveSpec::amplitude_modulated(double omega0, double tauA) {
  if (!(omega0 > 0.0) || !(tauA > 0.0) || !std::isfinite(omega0) || !std::isfinite(tauA)) {
    throw std::invalid_argument("AmplitudeModulated drive needs omega0 > 0 and tauA > 0");
  }
  return DriveSpec(AmplitudeModulated{omega0, tauA});
}

DriveSpec DriveSpec::phase_rotating(double omega0, double theta) {
  if (!(omega0 > 0.0) || !(theta > 0.0) || !std::isfinite(omega0) || !std::isfinite(theta)) {
    throw std::invalid_argument("PhaseRotating drive needs omega0 > 0 and theta > 0");
  }
  return DriveSpec(PhaseRotating{omega0, theta});
}

double DriveSpec::omega0() const {
  return std::visit([](const auto& f) { return f.omega0; }, family_);
}

EigenSystem instantaneous_eigensystem(const DriveSpec& drive, double t) {
  if (drive.is_amplitude_modulated()) {
    const double e = 0.5 * drive.amplitude().rabi_frequency(t);
    return {e, -e, unchecked_state({1, 0, 0}), unchecked_state({-1, 0, 0})};
  }
  const auto& p = drive.phase();
  const Vec3 up = p.floquet_axis();
  const double e = p.e_theta();
  return {e, -e, unchecked_state(up), unchecked_state(-up)};
}

double phase_integral(const AmplitudeModulated& drive, double t0, double t1) {
  const auto antiderivative = [&](double t) {
    return 0.5 * drive.omega0 *
           (1.5 * t + drive.tauA / (4.0 * std::numbers::pi) * std::sin(kTwoPi * t / drive.tauA));
  };
  return antiderivative(t1) - antiderivative(t0);
}

Rotation propagator(const DriveSpec& drive, double t0, double t1) {
  if (t1 < t0) {
    throw std::invalid_argument("propagator: t1 < t0");
  }
  if (drive.is_amplitude_modulated()) {
    return Rotation::about_x(phase_integral(drive.amplitude(), t0, t1));
  }
  // Rotating frame: U(t1, t0) = Rz(theta t1) exp(-i H_F (t1 - t0)) Rz(-theta t0).
  const auto& p = drive.phase();
  const Rotation floquet = Rotation::about_axis(p.floquet_axis(), 2.0 * p.e_theta() * (t1 - t0));
  const double period = p.tau_theta();
  if (on_period(t0, period) && on_period(t1, period)) {
    return floquet;
  }
  return Rotation::about_z(p.theta * t1) * floquet * Rotation::about_z(-p.theta * t0);
}

QubitState evolve_unitary(const QubitState& state, const DriveSpec& drive, double t0, double t1) {
  return propagator(drive, t0, t1).apply(state);
}

double partition_function(double beta, const DriveSpec& drive, double t) {
  return 2.0 * std::cosh(beta * upper_energy(drive, t));
}

double gibbs_population(double beta, const DriveSpec& drive, double t) {
  // e^{-bE} / (e^{-bE} + e^{bE}) = 1 / (1 + e^{2bE})
  return 1.0 / (1.0 + std::exp(2.0 * beta * upper_energy(drive, t)));
}

double free_energy_delta(double beta, const DriveSpec& drive, double tf) {
  if (beta == 0.0) {
    throw std::invalid_argument("free_energy_delta: undefined at beta = 0");
  }
  const double e0 = upper_energy(drive, 0.0);
  const double ef = upper_energy(drive, tf);
  if (ef == e0) {
    return 0.0;
  }
  return -(log_two_cosh(beta * ef) - log_two_cosh(beta * e0)) / beta;
}

double beta_for_up_population(double pUp, const DriveSpec& drive) {
  if (!(pUp > 0.0 && pUp < 1.0)) {
    throw OutOfRangeError("beta_for_up_population: population must lie in (0, 1)");
  }
  return std::log((1.0 - pUp) / pUp) / (2.0 * upper_energy(drive, 0.0));
}

}  // namespace qfluct
