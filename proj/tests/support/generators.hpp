#pragma once

// Small hand-rolled generators for property tests. Each case gets its own
// engine seeded from (suite seed, case index) so a failure message names a
// case that can be replayed alone.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "qfluct/bloch.hpp"
#include "qfluct/channel.hpp"
#include "qfluct/drive.hpp"

namespace gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double probability() { return uniform(0.0, 1.0); }

  qfluct::Vec3 unit_vector() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * std::numbers::pi);
    const double s = std::sqrt(1.0 - z * z);
    return {s * std::cos(phi), s * std::sin(phi), z};
  }

  /// Uniform in the Bloch ball, with a third of the draws on the surface.
  qfluct::QubitState state() {
    const double r = integer(0, 2) == 0 ? 1.0 : std::cbrt(probability());
    return qfluct::unchecked_state(unit_vector() * r);
  }

  qfluct::PulseChannelParams channel() { return {probability(), probability()}; }

  qfluct::DriveSpec amplitude_drive() {
    const double tauA = uniform(100.0, 2000.0);
    return qfluct::DriveSpec::amplitude_modulated(uniform(0.2, 3.0) * std::numbers::pi / tauA, tauA);
  }

  qfluct::DriveSpec phase_drive() {
    const double tauTheta = uniform(100.0, 2000.0);
    return qfluct::DriveSpec::phase_rotating(uniform(0.5e-3, 2e-2), 2.0 * std::numbers::pi / tauTheta);
  }

  qfluct::DriveSpec drive() { return integer(0, 1) == 0 ? amplitude_drive() : phase_drive(); }

 private:
  std::mt19937_64 rng_;
};

/// Runs `body(gen)` for `cases` independent cases.
template <typename Body>
void for_all(int cases, std::uint64_t seed, Body body) {
  for (int i = 0; i < cases; ++i) {
    SCOPED_TRACE("property case " + std::to_string(i) + " (seed " + std::to_string(seed) + ")");
    Gen g(seed * 1000003ULL + static_cast<std::uint64_t>(i));
    body(g);
    if (::testing::Test::HasFatalFailure()) return;
  }
}

}  // namespace gen
