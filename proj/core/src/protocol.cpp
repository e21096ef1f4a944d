#include "qfluct/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "qfluct/errors.hpp"

namespace qfluct {
namespace {

constexpr double kPulseTimeSlack = 1e-9;
constexpr double kMergeTolerance = 1e-12;

const QubitState& basis(const EigenSystem& es, EigenIndex i) {
  return i == EigenIndex::plus ? es.basisPlus : es.basisMinus;
}

double energy(const EigenSystem& es, EigenIndex i) {
  return i == EigenIndex::plus ? es.ePlus : es.eMinus;
}

double energy_expectation(const DriveSpec& drive, double t, const QubitState& s) {
  const EigenSystem es = instantaneous_eigensystem(drive, t);
  return es.ePlus * s.bloch().dot(es.basisPlus.bloch());
}

QubitState gibbs_mixture(const ProtocolConfig& config) {
  const EigenSystem es = instantaneous_eigensystem(config.drive, 0.0);
  const double pUp = initial_up_weight(config);
  return unchecked_state(es.basisPlus.bloch() * (2.0 * pUp - 1.0));
}

}  // namespace

int pulse_count(double tau, double tf) {
  return static_cast<int>(std::floor(tf / tau + kPulseTimeSlack));
}

void ProtocolConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ConfigError(fmt::format("interpulse time must be positive (got {})", tau));
  }
  if (nPulses < 0) {
    throw ConfigError(fmt::format("pulse count must be non-negative (got {})", nPulses));
  }
  if (!std::isfinite(tf) || tf < nPulses * tau * (1.0 - kPulseTimeSlack)) {
    throw ConfigError(fmt::format("final time {} precedes pulse {} at {}", tf, nPulses, nPulses * tau));
  }
  if (!std::isfinite(thermal.beta) || !std::isfinite(thermal.betaR)) {
    throw ConfigError("inverse temperatures must be finite");
  }
}

ProtocolConfig ProtocolConfig::at_final_time(double newTf) const {
  ProtocolConfig c = *this;
  c.tf = newTf;
  c.nPulses = pulse_count(tau, newTf);
  return c;
}

QubitState propagate(const ProtocolConfig& config, const QubitState& initial) {
  QubitState s = initial;
  double t = 0.0;
  for (int k = 1; k <= config.nPulses; ++k) {
    const double tk = k * config.tau;
    s = apply_pulse_map(evolve_unitary(s, config.drive, t, tk), config.channel);
    t = tk;
  }
  return evolve_unitary(s, config.drive, t, std::max(t, config.tf));
}

ConditionalMatrix conditional_matrix(const ProtocolConfig& config) {
  const EigenSystem start = instantaneous_eigensystem(config.drive, 0.0);
  const EigenSystem end = instantaneous_eigensystem(config.drive, config.tf);
  ConditionalMatrix cm;
  for (EigenIndex i : {EigenIndex::plus, EigenIndex::minus}) {
    const QubitState out = propagate(config, basis(start, i));
    const double up = std::clamp(out.overlap(end.basisPlus), 0.0, 1.0);
    const int col = static_cast<int>(i);
    cm.pJgivenI[0][col] = up;
    cm.pJgivenI[1][col] = 1.0 - up;
  }
  return cm;
}

double initial_up_weight(const ProtocolConfig& config) {
  return gibbs_population(config.thermal.beta, config.drive, 0.0);
}

EnergyChangeDistribution energy_change_distribution(const ConditionalMatrix& cm,
                                                    const ProtocolConfig& config) {
  const EigenSystem start = instantaneous_eigensystem(config.drive, 0.0);
  const EigenSystem end = instantaneous_eigensystem(config.drive, config.tf);
  const double pUp = initial_up_weight(config);
  const double weights[2] = {pUp, 1.0 - pUp};

  std::vector<EnergyAtom> raw;
  for (EigenIndex i : {EigenIndex::plus, EigenIndex::minus}) {
    for (EigenIndex j : {EigenIndex::plus, EigenIndex::minus}) {
      const double prob = cm(j, i) * weights[static_cast<int>(i)];
      if (prob > 0.0) {
        raw.push_back({energy(end, j) - energy(start, i), prob});
      }
    }
  }
  std::sort(raw.begin(), raw.end(), [](const EnergyAtom& a, const EnergyAtom& b) {
    return a.deltaE < b.deltaE;
  });

  const double tol = kMergeTolerance * config.drive.omega0();
  EnergyChangeDistribution dist;
  for (const EnergyAtom& a : raw) {
    if (!dist.atoms.empty() && std::abs(a.deltaE - dist.atoms.back().deltaE) <= tol) {
      dist.atoms.back().prob += a.prob;
    } else {
      dist.atoms.push_back(a);
    }
  }
  return dist;
}

double fr_functional(const EnergyChangeDistribution& dist, double gamma) {
  double sum = 0.0;
  for (const EnergyAtom& a : dist.atoms) {
    sum += a.prob * std::exp(-gamma * a.deltaE);
  }
  return sum;
}

double mean_energy_change(const EnergyChangeDistribution& dist) {
  double sum = 0.0;
  for (const EnergyAtom& a : dist.atoms) {
    sum += a.prob * a.deltaE;
  }
  return sum;
}

double beta_reservoir(double pUpInfinity, double gap) {
  if (!(gap > 0.0)) {
    throw std::invalid_argument(fmt::format("beta_reservoir: gap must be positive (got {})", gap));
  }
  if (!(pUpInfinity > 0.0 && pUpInfinity < 1.0)) {
    throw OutOfRangeError(
        fmt::format("beta_reservoir: population {} gives no finite pseudo-temperature", pUpInfinity));
  }
  return -std::log(pUpInfinity / (1.0 - pUpInfinity)) / gap;
}

double first_law_check(const EnergyChangeDistribution& dist, double meanW, double meanQ) {
  return mean_energy_change(dist) - (meanW + meanQ);
}

double fr_target(const ProtocolConfig& config) {
  const double beta = config.thermal.beta;
  return partition_function(beta, config.drive, config.tf) / partition_function(beta, config.drive, 0.0);
}

FrReport fr_report(const ConditionalMatrix& cm, const ProtocolConfig& config, double gamma) {
  const EnergyChangeDistribution dist = energy_change_distribution(cm, config);
  FrReport r;
  r.meanDeltaE = mean_energy_change(dist);
  r.frValue = fr_functional(dist, gamma);
  r.frTarget = fr_target(config);
  r.gamma = gamma;
  return r;
}

double asymptotic_up_population(const ProtocolConfig& config) {
  const QubitState fixed = channel_fixed_point(config.drive, config.channel, config.tau);
  return fixed.overlap(instantaneous_eigensystem(config.drive, config.tau).basisPlus);
}

double one_period_up_population(const ProtocolConfig& config) {
  ProtocolConfig one = config;
  one.nPulses = 1;
  one.tf = config.tau;
  const ConditionalMatrix m = conditional_matrix(one);
  const double leave = m(EigenIndex::minus, EigenIndex::plus);
  const double enter = m(EigenIndex::plus, EigenIndex::minus);
  if (leave + enter <= 0.0) {
    throw DegenerateChannelError("one-period map leaves both levels invariant");
  }
  return enter / (leave + enter);
}

Energetics propagated_energetics(const ProtocolConfig& config) {
  Energetics e;
  QubitState s = gibbs_mixture(config);
  const double e0 = energy_expectation(config.drive, 0.0, s);
  double t = 0.0;
  double before = e0;
  const auto unitary_to = [&](double t1) {
    s = evolve_unitary(s, config.drive, t, t1);
    const double after = energy_expectation(config.drive, t1, s);
    e.work += after - before;
    before = after;
    t = t1;
  };
  for (int k = 1; k <= config.nPulses; ++k) {
    unitary_to(k * config.tau);
    s = apply_pulse_map(s, config.channel);
    const double after = energy_expectation(config.drive, t, s);
    e.heatSystem += after - before;
    before = after;
  }
  unitary_to(std::max(t, config.tf));
  e.deltaE = before - e0;
  return e;
}

}  // namespace qfluct
