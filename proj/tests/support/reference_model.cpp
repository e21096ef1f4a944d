#include "reference_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace ref {

namespace {
const cd I(0.0, 1.0);
}

Mat2 sigma_x() { Mat2 m; m << 0, 1, 1, 0; return m; }
Mat2 sigma_y() { Mat2 m; m << 0, -I, I, 0; return m; }
Mat2 sigma_z() { Mat2 m; m << 1, 0, 0, -1; return m; }
Mat2 identity() { return Mat2::Identity(); }

Mat2 from_bloch(double rx, double ry, double rz) {
  return 0.5 * (identity() + rx * sigma_x() + ry * sigma_y() + rz * sigma_z());
}

Eigen::Vector3d to_bloch(const Mat2& rho) {
  return {(rho * sigma_x()).trace().real(), (rho * sigma_y()).trace().real(),
          (rho * sigma_z()).trace().real()};
}

double AmplitudeDrive::omega(double t) const {
  const double c = std::cos(std::numbers::pi * t / tauA);
  return 0.5 * omega0 * (1.0 + c * c);
}

Mat2 AmplitudeDrive::hamiltonian(double t) const { return 0.5 * omega(t) * sigma_x(); }

Mat2 PhaseDrive::hamiltonian(double t) const {
  return 0.5 * omega0 * (std::cos(theta * t) * sigma_x() + std::sin(theta * t) * sigma_y());
}

Mat2 PhaseDrive::floquet_generator() const { return 0.5 * (omega0 * sigma_x() - theta * sigma_z()); }

Mat2 integrate_propagator(const std::function<Mat2(double)>& h, double t0, double t1, int steps) {
  Mat2 u = identity();
  if (steps <= 0 || t1 == t0) return u;
  const double dt = (t1 - t0) / steps;
  const auto f = [&](double t, const Mat2& x) -> Mat2 { return -I * h(t) * x; };
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * dt;
    const Mat2 k1 = f(t, u);
    const Mat2 k2 = f(t + 0.5 * dt, u + 0.5 * dt * k1);
    const Mat2 k3 = f(t + 0.5 * dt, u + 0.5 * dt * k2);
    const Mat2 k4 = f(t + dt, u + dt * k3);
    u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

Mat2 expm_evolution(const Mat2& h, double t) {
  const Mat2 a = -I * t * h;
  return a.exp();
}

UpperLevel upper_level(const Mat2& h) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(h);
  const Eigen::Vector2cd v = es.eigenvectors().col(1);
  return {es.eigenvalues()(1), v * v.adjoint()};
}

Mat2 pulse(const Mat2& rho, double pA, double pD) {
  const double p0 = rho(0, 0).real();
  const double p1 = rho(1, 1).real();
  Mat2 absorbed = Mat2::Zero();
  absorbed(0, 0) = p0 + pD * p1;
  absorbed(1, 1) = (1.0 - pD) * p1;
  return (1.0 - pA) * rho + pA * absorbed;
}

double simpson_phase(const AmplitudeDrive& d, double t0, double t1, int n) {
  if (t1 == t0) return 0.0;
  const double h = (t1 - t0) / n;
  double s = d.omega(t0) + d.omega(t1);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * d.omega(t0 + k * h);
  return s * h / 3.0;
}

Mat2 iterate_fixed_point(const Mat2& periodU, double pA, double pD, double tol, int maxIter) {
  Mat2 rho = 0.5 * identity();
  for (int k = 0; k < maxIter; ++k) {
    const Mat2 next = pulse(periodU * rho * periodU.adjoint(), pA, pD);
    const double change = (to_bloch(next) - to_bloch(rho)).norm();
    rho = next;
    if (change < tol) break;
  }
  return rho;
}

int pulses_before(double tau, double tf) { return static_cast<int>(std::floor(tf / tau + 1e-9)); }

Mat2 propagate(const Protocol& p, const Mat2& rho0, double tf) {
  Mat2 rho = rho0;
  double t = 0.0;
  const int n = pulses_before(p.tau, tf);
  for (int k = 1; k <= n; ++k) {
    const Mat2 u = p.unitary(t, k * p.tau);
    rho = pulse(u * rho * u.adjoint(), p.pA, p.pD);
    t = k * p.tau;
  }
  if (tf > t) {
    const Mat2 u = p.unitary(t, tf);
    rho = u * rho * u.adjoint();
  }
  return rho;
}

std::array<double, 2> up_given(const Protocol& p, double tf) {
  const Mat2 up0 = upper_level(p.energy(0.0)).projector;
  const Mat2 down0 = identity() - up0;
  const Mat2 upF = upper_level(p.energy(tf)).projector;
  return {(upF * propagate(p, up0, tf)).trace().real(), (upF * propagate(p, down0, tf)).trace().real()};
}

Protocol amplitude_protocol(const AmplitudeDrive& d, double tau, double pA, double pD) {
  return {[d](double t0, double t1) {
            const double phi = simpson_phase(d, t0, t1, 2000);
            return expm_evolution(0.5 * sigma_x(), phi);
          },
          [d](double t) { return d.hamiltonian(t); }, tau, pA, pD};
}

Protocol phase_protocol(const PhaseDrive& d, double tau, double pA, double pD, double stepsPerNs) {
  return {[d, stepsPerNs](double t0, double t1) {
            const int steps = std::max(1, static_cast<int>(std::ceil((t1 - t0) * stepsPerNs)));
            return integrate_propagator([d](double t) { return d.hamiltonian(t); }, t0, t1, steps);
          },
          [d](double) { return d.floquet_generator(); }, tau, pA, pD};
}

}  // namespace ref
