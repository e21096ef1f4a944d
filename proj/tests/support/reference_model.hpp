#pragma once

// Independent density-matrix model used as ground truth by the tests.
// Nothing here calls into the library under test: Hamiltonians are written out
// as 2x2 matrices, time evolution is integrated numerically and pulses act as
// explicit Kraus-style maps on rho.

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ref {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

Mat2 sigma_x();
Mat2 sigma_y();
Mat2 sigma_z();
Mat2 identity();

/// rho = (I + r.sigma)/2 and back.
Mat2 from_bloch(double rx, double ry, double rz);
Eigen::Vector3d to_bloch(const Mat2& rho);

struct AmplitudeDrive {
  double omega0;
  double tauA;
  double omega(double t) const;
  Mat2 hamiltonian(double t) const;
};

struct PhaseDrive {
  double omega0;
  double theta;
  Mat2 hamiltonian(double t) const;
  /// Stroboscopic generator, H_F = (omega0 sigma_x - theta sigma_z) / 2.
  Mat2 floquet_generator() const;
};

/// U(t1, t0) of a time-dependent Hamiltonian, integrated with classical RK4
/// on the Schroedinger equation using `steps` uniform steps.
Mat2 integrate_propagator(const std::function<Mat2(double)>& h, double t0, double t1, int steps);

/// exp(-i H t) via Eigen's matrix exponential.
Mat2 expm_evolution(const Mat2& h, double t);

/// Eigenprojector onto the upper eigenvalue of a Hermitian 2x2 matrix, and that eigenvalue.
struct UpperLevel {
  double energy;
  Mat2 projector;
};
UpperLevel upper_level(const Mat2& h);

/// Absorbed branch: measure sigma_z, then move pD of the |1> population to |0>.
Mat2 pulse(const Mat2& rho, double pA, double pD);

/// Integral of omega(t) by composite Simpson with `n` (even) panels.
double simpson_phase(const AmplitudeDrive& d, double t0, double t1, int n);

/// Iterates rho -> pulse(U rho U^dag) until successive Bloch vectors agree to `tol`.
Mat2 iterate_fixed_point(const Mat2& periodU, double pA, double pD, double tol, int maxIter);

/// Pulsed protocol in density-matrix form. `unitary(t0, t1)` supplies the
/// free evolution; `energy(t)` the operator whose eigenbasis is measured.
struct Protocol {
  std::function<Mat2(double, double)> unitary;
  std::function<Mat2(double)> energy;
  double tau;
  double pA;
  double pD;
};

int pulses_before(double tau, double tf);
Mat2 propagate(const Protocol& p, const Mat2& rho0, double tf);

/// {P(+|+), P(+|-)} at tf.
std::array<double, 2> up_given(const Protocol& p, double tf);

/// Amplitude drive: commuting Hamiltonians, so U = exp(-i sigma_x Phi / 2)
/// with Phi integrated numerically.
Protocol amplitude_protocol(const AmplitudeDrive& d, double tau, double pA, double pD);

/// Phase drive: lab-frame Hamiltonian integrated by RK4 (`stepsPerNs` steps
/// per ns), measured in the eigenbasis of the stroboscopic generator.
Protocol phase_protocol(const PhaseDrive& d, double tau, double pA, double pD, double stepsPerNs);

}  // namespace ref
