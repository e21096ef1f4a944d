#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qfluct/errors.hpp"
#include "qfluct/oracle.hpp"
#include "qfluct/protocol.hpp"
#include "reference_model.hpp"

using namespace qfluct;
using std::numbers::pi;

namespace {

constexpr double kTauA = 616.0;
constexpr double kOmegaA = pi / kTauA;
const double kPhaseOmega0 = 2 * pi * 0.8e-3;
const double kP0 = 1.0 / (1.0 + std::exp(2.0));

ProtocolConfig amplitude_config(double tau, double pA, double tf, double beta = 2.0 / kOmegaA) {
  return ProtocolConfig{DriveSpec::amplitude_modulated(kOmegaA, kTauA), {pA, 0.0}, tau, pulse_count(tau, tf),
                        tf, {beta, 0.0}};
}

}  // namespace

TEST(PopulationAfterNPulses, Examples) {
  EXPECT_EQ(oracle::population_after_n_pulses(0.123, 0.4, 0), 0.123);
  EXPECT_DOUBLE_EQ(oracle::population_after_n_pulses(0.9, 1.0, 1), 0.5);
  EXPECT_NEAR(oracle::population_after_n_pulses(kP0, 0.5, 2), 0.404800730505529389, 1e-15);
}

TEST(MeanWorkAmplitude, SynchronizedPulsesDoNoWorkPerPeriod) {
  const auto s = oracle::mean_work_amplitude(amplitude_config(kTauA, 0.25, 12 * kTauA), 12 * kTauA);
  ASSERT_EQ(s.perPulseW.size(), 12u);
  for (double w : s.perPulseW) EXPECT_NEAR(w, 0.0, 1e-18);
  EXPECT_NEAR(s.tailW, 0.0, 1e-18);
}

TEST(MeanWorkAmplitude, InfiniteTemperatureGivesNoWork) {
  for (double tf : {100.0, 1234.5, 4000.0}) {
    EXPECT_EQ(oracle::mean_work_amplitude(amplitude_config(410, 0.3, tf, 0.0), tf).totalW, 0.0);
  }
}

TEST(MeanWorkAmplitude, FirstPulseWork) {
  const auto s = oracle::mean_work_amplitude(amplitude_config(410, 0.25, 410), 410);
  ASSERT_EQ(s.perPulseW.size(), 1u);
  EXPECT_NEAR(s.perPulseW[0] / kOmegaA, 0.143358424019503925, 1e-14);
}

TEST(MeanWorkAmplitude, RejectsPhaseDrive) {
  ProtocolConfig c{DriveSpec::phase_rotating(0.005, 0.01), {0.25, 0.0}, 616, 1, 616, {}};
  EXPECT_THROW(oracle::mean_work_amplitude(c, 616), std::invalid_argument);
  EXPECT_THROW(oracle::mean_heat_amplitude(c, 1), std::invalid_argument);
}

TEST(MeanWorkAmplitude, TotalsEqualSums) {
  const auto s = oracle::mean_work_amplitude(amplitude_config(333, 0.2, 3900), 3900);
  double w = s.tailW, q = 0.0;
  for (double v : s.perPulseW) w += v;
  for (double v : s.perPulseQ) q += v;
  EXPECT_NEAR(s.totalW, w, 1e-12 * kOmegaA);
  EXPECT_NEAR(s.totalQ, q, 1e-12 * kOmegaA);
}

TEST(MeanHeatAmplitude, Examples) {
  EXPECT_EQ(oracle::mean_heat_amplitude(amplitude_config(410, 0.25, 0), 0).totalQ, 0.0);
  const ProtocolConfig c = amplitude_config(410, 1.0, 410);
  const double omega410 = ref::AmplitudeDrive{kOmegaA, kTauA}.omega(410);
  EXPECT_NEAR(oracle::mean_heat_amplitude(c, 1).totalQ, 0.5 * omega410 * (1 - 2 * kP0), 1e-15);
}

TEST(MeanHeatAmplitude, GeometricDecayRecoversAbsorption) {
  for (double pA : {0.05, 0.25, 0.6, 0.93}) {
    const ProtocolConfig c = amplitude_config(410, pA, 0);
    const auto s = oracle::mean_heat_amplitude(c, 10);
    const ref::AmplitudeDrive d{kOmegaA, kTauA};
    for (int n = 1; n < 10; ++n) {
      const double ratio = (s.perPulseQ[n] / d.omega((n + 1) * 410.0)) / (s.perPulseQ[n - 1] / d.omega(n * 410.0));
      EXPECT_NEAR(1.0 - ratio, pA, 1e-12);
    }
  }
}

TEST(KFactor, Examples) {
  EXPECT_DOUBLE_EQ(oracle::k_factor(1.0, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(oracle::k_factor(0.0, 0.0), 2.0);
  EXPECT_NEAR(oracle::k_factor(0.5, -pi / 4), 1.25, 1e-15);
}

TEST(FloquetRecursion, Examples) {
  EXPECT_EQ(oracle::floquet_population_recursion(0.3, 0.25, 0.4, -0.5, 0).value, 0.3);
  const double alpha = -pi / 4;
  const double limit = oracle::floquet_asymptote(0.4, alpha);
  EXPECT_NEAR(oracle::floquet_population_recursion(0.3, 0.25, 0.4, alpha, 1000000).value, limit, 1e-12);
  EXPECT_NEAR(limit, 0.5 * (1 - 0.4 / oracle::k_factor(0.4, alpha) * std::cos(alpha)), 1e-15);
}

TEST(FloquetRecursion, InversionReproducesTarget) {
  const double alpha = -pi / 4;
  const double pD = oracle::invert_floquet_asymptote(0.276, alpha);
  EXPECT_GE(pD, 0.0);
  EXPECT_LE(pD, 1.0);
  EXPECT_NEAR(oracle::floquet_population_recursion(0.9, 0.25, pD, alpha, 100000).value, 0.276, 1e-9);
  EXPECT_THROW(oracle::invert_floquet_asymptote(0.001, -0.1), ConfigError);
  EXPECT_THROW(oracle::invert_floquet_asymptote(0.6, -0.1), ConfigError);
}

TEST(FloquetRecursion, FlagsNonContractiveRegime) {
  EXPECT_TRUE(oracle::floquet_population_recursion(0.2, 0.25, 0.3, -0.4, 5).contractive);
  EXPECT_FALSE(oracle::floquet_population_recursion(0.2, 0.9, 0.0, 0.0, 5).contractive);
}

TEST(DephasedRecursion, OneStepMatchesPulseOnFloquetDiagonalState) {
  const ref::PhaseDrive rd{kPhaseOmega0, 2 * pi / 616};
  const ref::Mat2 up = ref::upper_level(rd.floquet_generator()).projector;
  const ref::Mat2 down = ref::identity() - up;
  const double alpha = -std::atan(rd.omega0 / rd.theta);
  for (double p : {0.0, 0.2, 0.7, 1.0}) {
    for (double pA : {0.1, 0.5, 1.0}) {
      for (double pD : {0.0, 0.3, 1.0}) {
        const ref::Mat2 rho = ref::pulse(p * up + (1 - p) * down, pA, pD);
        EXPECT_NEAR(oracle::dephased_floquet_recursion(p, pA, pD, alpha, 1).value, (up * rho).trace().real(), 1e-14);
      }
    }
  }
}

TEST(MeanHeatPhase, Examples) {
  ProtocolConfig c{DriveSpec::phase_rotating(kPhaseOmega0, 2 * pi / 616), {0.25, 0.45}, 616, 0, 0, {}};
  c.thermal.beta = beta_for_up_population(0.303, c.drive);
  EXPECT_EQ(oracle::mean_heat_phase(c, 0), 0.0);

  const double alpha = c.drive.phase().alpha();
  const double eTheta = c.drive.phase().e_theta();
  const double limit = oracle::floquet_asymptote(0.45, alpha);
  EXPECT_NEAR(oracle::mean_heat_phase(c, 1000000), 2 * eTheta * (limit - 0.303), 1e-15);
  for (int n : {1, 5, 17}) {
    const double pn = oracle::floquet_population_recursion(0.303, 0.25, 0.45, alpha, n).value;
    EXPECT_NEAR(oracle::mean_heat_phase(c, n), 2 * eTheta * (pn - 0.303), 1e-15);
  }

  c.thermal.beta = beta_for_up_population(limit, c.drive);
  for (int n : {1, 10, 50}) EXPECT_NEAR(oracle::mean_heat_phase(c, n), 0.0, 1e-17);

  ProtocolConfig wrong{DriveSpec::amplitude_modulated(kOmegaA, kTauA), {0.25, 0.0}, 616, 1, 616, {}};
  EXPECT_THROW(oracle::mean_heat_phase(wrong, 1), std::invalid_argument);
}

TEST(RabiConditional, Examples) {
  const double th = 2 * pi / 616;
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(oracle::rabi_conditional(kPhaseOmega0, th, n * 616.0), 1.0, 1e-15);
  EXPECT_NEAR(oracle::rabi_conditional(th, th, pi / th), 0.5, 1e-15);
  for (double t : {10.0, 300.0, 999.0}) EXPECT_NEAR(oracle::rabi_conditional(1e-6, 1.0, t), 1.0, 1e-11);
}

TEST(RabiConditional, MatchesIntegratedPulseFreeDynamics) {
  const ref::PhaseDrive rd{kPhaseOmega0, 2 * pi / 616};
  const ref::Protocol p = ref::phase_protocol(rd, 1e12, 0.0, 0.0, 2.0);
  for (double t = 0; t <= 1300; t += 130) {
    EXPECT_NEAR(oracle::rabi_conditional(rd.omega0, rd.theta, t), ref::up_given(p, t)[0], 1e-9);
  }
}

TEST(WIrr, Examples) {
  const DriveSpec d = DriveSpec::amplitude_modulated(kOmegaA, kTauA);
  const double beta = 2.0 / kOmegaA;
  EXPECT_NEAR(oracle::w_irr(beta, d, 0.0), 0.0, 1e-18);
  EXPECT_NEAR(oracle::w_irr(beta, d, kTauA), 0.0, 1e-15);
  const double half = oracle::w_irr(beta, d, kTauA / 2);
  EXPECT_GT(half, 0.0);
  EXPECT_NEAR(half / kOmegaA, 0.0335653772265663908, 1e-13);
  EXPECT_NEAR(half, oracle::w_irr_relative_entropy(beta, d, kTauA / 2), 1e-10);
}

TEST(WIrr, NonNegativeInsidePulseFreeWindow) {
  const DriveSpec d = DriveSpec::amplitude_modulated(kOmegaA, kTauA);
  for (double beta : {0.5 / kOmegaA, 2.0 / kOmegaA, 10.0 / kOmegaA}) {
    for (int i = 1; i <= 100; ++i) {
      const double tf = kTauA * i / 101.0;
      EXPECT_GE(oracle::w_irr(beta, d, tf, kTauA), -1e-12 * kOmegaA);
      EXPECT_NEAR(oracle::w_irr(beta, d, tf, kTauA), oracle::w_irr_relative_entropy(beta, d, tf), 1e-12 * kOmegaA);
    }
  }
}

TEST(WIrr, RejectsTimesAfterFirstPulse) {
  const DriveSpec d = DriveSpec::amplitude_modulated(kOmegaA, kTauA);
  EXPECT_THROW(oracle::w_irr(1.0, d, 410.0, 410.0), std::invalid_argument);
  EXPECT_THROW(oracle::w_irr(1.0, DriveSpec::phase_rotating(0.1, 0.1), 1.0), std::invalid_argument);
}
