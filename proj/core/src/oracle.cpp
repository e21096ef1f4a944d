#include "qfluct/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "qfluct/errors.hpp"

namespace qfluct::oracle {
namespace {

const AmplitudeModulated& require_amplitude(const DriveSpec& drive, const char* who) {
  if (!drive.is_amplitude_modulated()) {
    throw std::invalid_argument(fmt::format("{}: needs the amplitude-modulated drive", who));
  }
  return drive.amplitude();
}

WorkHeatSeries amplitude_series(const ProtocolConfig& config, int n, double tf) {
  const AmplitudeModulated& d = require_amplitude(config.drive, "amplitude work/heat");
  const double pA = config.channel.pA();
  const double p0 = initial_up_weight(config);
  const double bias = 1.0 - 2.0 * p0;

  WorkHeatSeries s;
  double survive = 1.0;  // (1 - pA)^(k - 1)
  for (int k = 1; k <= n; ++k) {
    const double wPrev = d.rabi_frequency((k - 1) * config.tau);
    const double wNow = d.rabi_frequency(k * config.tau);
    s.perPulseW.push_back(0.5 * (wPrev - wNow) * survive * bias);
    s.perPulseQ.push_back(0.5 * wNow * pA * survive * bias);
    s.totalW += s.perPulseW.back();
    s.totalQ += s.perPulseQ.back();
    survive *= 1.0 - pA;
  }
  const double pN = population_after_n_pulses(p0, pA, n);
  s.tailW = 0.5 * (2.0 * pN - 1.0) * (d.rabi_frequency(tf) - d.rabi_frequency(n * config.tau));
  s.totalW += s.tailW;
  return s;
}

RecursionResult linear_recursion(double p0, double rate, double limit, int n) {
  const double decay = std::pow(1.0 - rate, n);
  return {decay * p0 + (1.0 - decay) * limit, std::abs(1.0 - rate) < 1.0};
}

}  // namespace

double population_after_n_pulses(double p0, double pA, int n) {
  if (n == 0) return p0;
  return 0.5 * (1.0 - std::pow(1.0 - pA, n) * (1.0 - 2.0 * p0));
}

WorkHeatSeries mean_work_amplitude(const ProtocolConfig& config, double tf) {
  return amplitude_series(config, pulse_count(config.tau, tf), tf);
}

WorkHeatSeries mean_heat_amplitude(const ProtocolConfig& config, int nPulses) {
  return amplitude_series(config, nPulses, nPulses * config.tau);
}

double k_factor(double pD, double alpha) {
  const double c = std::cos(alpha);
  return 1.0 + (1.0 - pD) * c * c;
}

RecursionResult floquet_population_recursion(double p0, double pA, double pD, double alpha, int n) {
  const double k = k_factor(pD, alpha);
  if (n == 0) return {p0, pA * k < 1.0};
  RecursionResult r = linear_recursion(p0, pA * k, floquet_asymptote(pD, alpha), n);
  r.contractive = pA * k < 1.0;
  return r;
}

double floquet_asymptote(double pD, double alpha) {
  return 0.5 * (1.0 - pD / k_factor(pD, alpha) * std::cos(alpha));
}

double invert_floquet_asymptote(double target, double alpha) {
  // (1 - 2P) k = pD c with k = 1 + (1 - pD) c^2 is linear in pD.
  const double c = std::cos(alpha);
  const double s = 1.0 - 2.0 * target;
  const double pD = s * (1.0 + c * c) / (c * (1.0 + s * c));
  if (!(pD >= 0.0 && pD <= 1.0)) {
    throw ConfigError(fmt::format("asymptote {} needs pD = {} outside [0, 1]", target, pD));
  }
  return pD;
}

RecursionResult dephased_floquet_recursion(double p0, double pA, double pD, double alpha, int n) {
  const double c = std::cos(alpha);
  const double kPrime = 1.0 - (1.0 - pD) * c * c;
  if (n == 0) return {p0, pA * kPrime > 0.0};
  if (kPrime == 0.0) return {p0, false};
  return linear_recursion(p0, pA * kPrime, 0.5 * (1.0 - pD * c / kPrime), n);
}

double mean_heat_phase(const ProtocolConfig& config, int nPulses) {
  if (!config.drive.is_phase_rotating()) {
    throw std::invalid_argument("mean_heat_phase: needs the phase-rotating drive");
  }
  if (nPulses == 0) return 0.0;
  const PhaseRotating& p = config.drive.phase();
  const double alpha = p.alpha();
  const double pD = config.channel.pD();
  const double k = k_factor(pD, alpha);
  const double p0 = initial_up_weight(config);
  return p.e_theta() * (1.0 - std::pow(1.0 - config.channel.pA() * k, nPulses)) *
         (1.0 - pD / k * std::cos(alpha) - 2.0 * p0);
}

double rabi_conditional(double omega0, double theta, double t) {
  const double s = std::sin(0.5 * theta * t);
  return 1.0 - omega0 * omega0 / (omega0 * omega0 + theta * theta) * s * s;
}

double w_irr(double beta, const DriveSpec& drive, double tf, double firstPulse) {
  const AmplitudeModulated& d = require_amplitude(drive, "w_irr");
  if (!(tf >= 0.0) || tf >= firstPulse) {
    throw std::invalid_argument(fmt::format("w_irr: tf = {} outside the pulse-free window", tf));
  }
  // The sigma_x rotation keeps the Gibbs populations, so only the spectrum moves.
  const double p0 = gibbs_population(beta, drive, 0.0);
  const double work = 0.5 * (d.rabi_frequency(tf) - d.rabi_frequency(0.0)) * (2.0 * p0 - 1.0);
  if (beta == 0.0) return work;
  return work - free_energy_delta(beta, drive, tf);
}

double w_irr_relative_entropy(double beta, const DriveSpec& drive, double tf) {
  require_amplitude(drive, "w_irr_relative_entropy");
  if (beta == 0.0) {
    throw std::invalid_argument("w_irr_relative_entropy: undefined at beta = 0");
  }
  const double p = gibbs_population(beta, drive, 0.0);
  const double q = gibbs_population(beta, drive, tf);
  const auto term = [](double a, double b) { return a > 0.0 ? a * std::log(a / b) : 0.0; };
  return (term(p, q) + term(1.0 - p, 1.0 - q)) / beta;
}

}  // namespace qfluct::oracle
