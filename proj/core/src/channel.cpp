#include "qfluct/channel.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "qfluct/errors.hpp"

namespace qfluct {
namespace {

constexpr double kSingularDeterminant = 1e-14;

using Mat3 = std::array<std::array<double, 3>, 3>;

double det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Cramer's rule; the systems here are 3x3 and well conditioned whenever pA > 0.
Vec3 solve3(const Mat3& m, const Vec3& b, double det) {
  auto replaced = [&](int col) {
    Mat3 c = m;
    const double rhs[3] = {b.x, b.y, b.z};
    for (int r = 0; r < 3; ++r) c[r][col] = rhs[r];
    return det3(c) / det;
  };
  return {replaced(0), replaced(1), replaced(2)};
}

}  // namespace

PulseChannelParams::PulseChannelParams(double pA, double pD) : pA_(pA), pD_(pD) {
  if (!(pA >= 0.0 && pA <= 1.0) || !(pD >= 0.0 && pD <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("pulse channel probabilities must lie in [0, 1] (pA = {}, pD = {})", pA, pD));
  }
}

QubitState apply_pulse_map(const QubitState& state, const PulseChannelParams& params) {
  const double pA = params.pA();
  const Vec3& r = state.bloch();
  const double pumpedZ = r.z + params.pD() * (1.0 - r.z);
  return unchecked_state({(1.0 - pA) * r.x, (1.0 - pA) * r.y, (1.0 - pA) * r.z + pA * pumpedZ});
}

std::pair<QubitState, PulseEvent> sample_pulse(const QubitState& state,
                                               const PulseChannelParams& params,
                                               RandomStream& stream) {
  PulseEvent event;
  if (!stream.bernoulli(params.pA())) {
    return {state, event};
  }
  event.absorbed = true;
  const bool zero = stream.bernoulli(0.5 * (1.0 + state.rz()));
  event.projectionOutcome = zero ? ProjectionOutcome::zero : ProjectionOutcome::one;
  if (zero) {
    event.pumped = false;
    return {QubitState::ground(), event};
  }
  const bool pumped = stream.bernoulli(params.pD());
  event.pumped = pumped;
  return {pumped ? QubitState::ground() : QubitState::excited(), event};
}

QubitState channel_fixed_point(const DriveSpec& drive, const PulseChannelParams& params, double tau) {
  if (params.pA() == 0.0) {
    throw DegenerateChannelError("channel_fixed_point: pA = 0 leaves every coherent orbit invariant");
  }
  const Rotation u = propagator(drive, 0.0, tau);
  const auto period = [&](const Vec3& r) {
    return apply_pulse_map(unchecked_state(u.apply(r)), params).bloch();
  };
  // The period map is affine, T(r) = A r + b. Solve (I - A) r = b.
  const Vec3 b = period({0, 0, 0});
  const Vec3 cols[3] = {period({1, 0, 0}) - b, period({0, 1, 0}) - b, period({0, 0, 1}) - b};
  Mat3 m{};
  for (int c = 0; c < 3; ++c) {
    const double v[3] = {cols[c].x, cols[c].y, cols[c].z};
    for (int r = 0; r < 3; ++r) m[r][c] = (r == c ? 1.0 : 0.0) - v[r];
  }
  const double det = det3(m);
  if (std::abs(det) < kSingularDeterminant) {
    throw DegenerateChannelError(fmt::format("channel_fixed_point: singular period map (det = {})", det));
  }
  const Vec3 fixed = solve3(m, b, det);
  const Vec3 residual = period(fixed) - fixed;
  if (residual.norm() > 1e-10) {
    throw ContractViolation(fmt::format("channel_fixed_point: residual {} after solve", residual.norm()));
  }
  return unchecked_state(fixed);
}

double solve_pump_for_asymptote(const DriveSpec& drive, double pA, double targetUp) {
  if (!drive.is_phase_rotating()) {
    throw ConfigError("pump inversion needs a phase-rotating drive");
  }
  if (!(pA > 0.0 && pA <= 1.0)) {
    throw ConfigError(fmt::format("pump inversion needs 0 < pA <= 1 (got {})", pA));
  }
  if (!(targetUp > 0.0 && targetUp < 1.0)) {
    throw ConfigError(fmt::format("target population {} outside (0, 1)", targetUp));
  }
  const auto& p = drive.phase();
  const QubitState up = unchecked_state(p.floquet_axis());
  const double tau = p.tau_theta();
  const auto gap = [&](double pD) {
    return channel_fixed_point(drive, PulseChannelParams(pA, pD), tau).overlap(up) - targetUp;
  };
  const double lo = gap(0.0);
  const double hi = gap(1.0);
  if (lo == 0.0) return 0.0;
  if (hi == 0.0) return 1.0;
  if ((lo > 0.0) == (hi > 0.0)) {
    throw ConfigError(fmt::format(
        "target population {} unreachable at pA = {}: fixed point spans [{:.6f}, {:.6f}] over pD in [0, 1]",
        targetUp, pA, std::min(lo, hi) + targetUp, std::max(lo, hi) + targetUp));
  }
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(gap, 0.0, 1.0, lo, hi,
                                                        boost::math::tools::eps_tolerance<double>(50),
                                                        iterations);
  return 0.5 * (a + b);
}

}  // namespace qfluct
