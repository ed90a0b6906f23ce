// Copyright 2026 The spinsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "reference.hpp"
#include "spinsq/dynamics.hpp"
#include "spinsq/estimators.hpp"

using namespace spinsq;

namespace {

const ProbePulse kV = make_pulse(PolarizationMode::linear_v, 2e8, 2e-6);
const ProbePulse kH = make_pulse(PolarizationMode::linear_h, 2e8, 2e-6);
const ProbePulse kCirc = make_pulse(PolarizationMode::circular_plus, 1e6, 2e-6);
constexpr double kInf = std::numeric_limits<double>::infinity();

CollectiveSpinState tilted_state() {
    CollectiveSpinState s = make_css(8.5e5);
    s.mean = Vec3(3.0e5, 1.2e4, -3.0e3);
    s.cov << 50.0, 5.0, -2.0,
             5.0, 1.5e5, 3.0e3,
             -2.0, 3.0e3, 1.1e5;
    return s;
}

void expect_state_near(const CollectiveSpinState &a, const CollectiveSpinState &b, double rel) {
    const double scale_m = std::max(1.0, b.mean.norm());
    const double scale_c = std::max(1.0, b.cov.norm());
    EXPECT_LE((a.mean - b.mean).norm(), rel * scale_m);
    EXPECT_LE((a.cov - b.cov).norm(), rel * scale_c);
}

}  // namespace

TEST(ProbeRotation, ZeroTensorCouplingIsIdentity) {
    Couplings c;
    c.kappa2 = 0.0;
    const auto s = tilted_state();
    const auto out = probe_rotation_update(s, kV, c);
    EXPECT_EQ(out.mean, s.mean);
    EXPECT_EQ(out.cov, s.cov);
}

TEST(ProbeRotation, PairCancelsToMachinePrecision) {
    const auto s = tilted_state();
    const auto out = probe_rotation_update(probe_rotation_update(s, kV, Couplings{}), kH, Couplings{});
    expect_state_near(out, s, 1e-12);
}

TEST(ProbeRotation, QuarterTurn) {
    Couplings c;
    c.kappa2 = (std::numbers::pi / 2) / kV.sx();
    CollectiveSpinState s = make_css(1000.0, 1.0);
    s.mean = Vec3(400.0, 0.0, 30.0);
    const auto out = probe_rotation_update(s, kV, c);
    EXPECT_NEAR(out.mean[kTx], 400.0, 1e-12);
    EXPECT_NEAR(out.mean[kTy], -30.0, 1e-9);
    EXPECT_NEAR(out.mean[kFz], 0.0, 1e-9);
    EXPECT_NEAR(std::hypot(out.ty(), out.fz()), 30.0, 1e-12);
}

TEST(ProbeRotation, CircularRejected) {
    EXPECT_THROW(probe_rotation_update(make_css(10.0), kCirc, Couplings{}), std::invalid_argument);
}

TEST(Decoherence, DefaultScaleFactor) {
    const auto s = make_css(8.5e5);
    const auto out = apply_decoherence(s, DecoherenceParams{});
    EXPECT_NEAR(out.tx() / s.tx(), ref::kContrast, 1e-12);
    EXPECT_NEAR(out.tx() / s.tx(), 0.876, 5e-4);
}

TEST(Decoherence, ZeroIsIdentity) {
    const auto s = tilted_state();
    DecoherenceParams d;
    d.eta_sc = d.eta_dep = 0.0;
    const auto out = apply_decoherence(s, d);
    EXPECT_EQ(out.mean, s.mean);
    EXPECT_EQ(out.cov, s.cov);
}

TEST(Decoherence, FullLossEmptiesState) {
    DecoherenceParams d;
    d.eta_sc = 1.0;
    const auto out = apply_decoherence(tilted_state(), d);
    EXPECT_EQ(out.mean.norm(), 0.0);
    EXPECT_EQ(out.cov.norm(), 0.0);
}

TEST(Decoherence, ScatteringOnlyFloor) {
    // eta_sc = 0.093 alone on a CSS: T_y variance becomes 0.907 * Tx/2.
    const auto s = make_css(8.5e5);
    const auto out = apply_loss(s, 1.0 - 0.093);
    EXPECT_NEAR(out.cov(kTy, kTy), 0.4535 * s.tx(), 1e-9 * s.tx());
    EXPECT_NEAR(out.cov(kTy, kTy), out.tx() / 2.0, 1e-9 * s.tx());
}

TEST(Decoherence, MatchesSubsetEnumeration) {
    // Eight spins with correlated transverse components, single-spin variance 1/4.
    constexpr int m = 8;
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(m, m, -0.02);
    c.diagonal().setConstant(0.25);
    const double var_total = c.sum();
    CollectiveSpinState s;
    s.n_eff = m;
    s.mean = Vec3(m / 2.0, 0.0, 0.0);
    s.cov = Vec3(0.0, var_total, var_total).asDiagonal();
    for (double p : {0.1, 0.5, 0.876162, 0.99}) {
        const auto out = apply_loss(s, p);
        EXPECT_NEAR(out.cov(kTy, kTy), ref::thinned_sum_variance(c, p), 1e-12) << "p = " << p;
        EXPECT_NEAR(out.tx(), p * m / 2.0, 1e-12);
    }
}

TEST(Decoherence, RejectsOutOfRange) {
    EXPECT_THROW(apply_loss(make_css(10.0), 1.5), std::invalid_argument);
    EXPECT_THROW(apply_loss(make_css(10.0), -0.1), std::invalid_argument);
}

TEST(SinglePulseScattering, ComposesToPairValue) {
    const double e1 = single_pulse_scattering(0.093);
    EXPECT_NEAR((1.0 - e1) * (1.0 - e1), 0.907, 1e-15);
}

TEST(FreePrecession, ZeroSplittingIsIdentity) {
    FieldEnvironment env;
    env.delta_e_hz = 0.0;
    const auto s = tilted_state();
    EXPECT_EQ(free_precession(s, env).mean, s.mean);
}

TEST(FreePrecession, DefaultAngle) {
    const auto out = free_precession(make_css(8.5e5), FieldEnvironment{});
    EXPECT_NEAR(std::atan2(out.ty(), out.tx()), ref::kLarmorAngle, 1e-14);
    EXPECT_NEAR(out.ty() / out.tx(), ref::kTanLarmor, 1e-13);
    EXPECT_NEAR(out.ty() / out.tx(), 0.0914, 1e-4);
}

TEST(FreePrecession, HalfTurn) {
    FieldEnvironment env;
    env.precession_time = 1e-3;
    env.delta_e_hz = 500.0;  // alpha = pi
    CollectiveSpinState s = make_css(100.0, 1.0);
    s.mean[kFz] = 3.0;
    const auto out = free_precession(s, env);
    EXPECT_NEAR(out.tx(), -50.0, 1e-12);
    EXPECT_NEAR(out.ty(), 0.0, 1e-12);
    EXPECT_EQ(out.fz(), 3.0);
}

TEST(FreePrecession, CoherenceDecay) {
    FieldEnvironment env;
    env.delta_e_hz = 0.0;
    const auto out = free_precession(make_css(1e5, 1.0), env, 290e-6);
    const double x = 5e-6 / 290e-6;
    EXPECT_NEAR(out.tx(), 5e4 * std::exp(-x * x), 1e-9);
}

TEST(Readout, TechnicalNoiseFactor) {
    NoiseModel n;
    EXPECT_NEAR(n.noise_factor(), ref::kTechFactor, 1e-15);
    n.technical_db = -std::numeric_limits<double>::infinity();
    EXPECT_EQ(n.noise_factor(), 1.0);
    n.include_shot_noise = false;
    EXPECT_EQ(n.noise_factor(), 0.0);
}

TEST(Readout, PairSignalToNoiseIsZeta) {
    // The pair read-out variance makes Var(CSS)/Var(RO) = kappa1^2 N_L Tx.
    NoiseModel n;
    n.technical_db = -std::numeric_limits<double>::infinity();
    const double tx = 3.7e5;
    const double r = readout_noise_variance(2e8, 2, Couplings{}, n);
    EXPECT_NEAR((tx / 2.0) / r, ref::kZeta370k, 1e-6);
    EXPECT_NEAR(readout_noise_variance(2e8, 1, Couplings{}, n), 2.0 * r, 1e-9 * r);
    n.zeta_photons = ZetaPhotons::per_pair;
    EXPECT_NEAR(readout_noise_variance(2e8, 2, Couplings{}, n), r / 2.0, 1e-9 * r);
}

TEST(Readout, BrightProbeLimitAndErrors) {
    EXPECT_LT(readout_noise_variance(1e30, 2, Couplings{}, NoiseModel{}), 1e-15);
    EXPECT_THROW(readout_noise_variance(2e8, 3, Couplings{}, NoiseModel{}), std::invalid_argument);
    EXPECT_THROW(readout_noise_variance(0.0, 2, Couplings{}, NoiseModel{}), std::invalid_argument);
}

TEST(Conditioning, MatchesSchurComplement) {
    const auto s = tilted_state();
    for (double theta : {0.0, ref::kTheta, 1.2}) {
        for (double r : {0.0, 10.0, 1.15e5, 1e9}) {
            const double phi = 812.5;
            const auto out = condition_on_outcome(s, theta, phi, r);
            const Vec3 u = mixed_direction(theta);
            const Mat3 ref_cov = ref::schur_posterior(s.cov, u, r);
            const Vec3 ref_mean = ref::schur_posterior_mean(s.mean, s.cov, u, r, phi);
            EXPECT_LE((out.cov - ref_cov).norm(), 1e-9 * s.cov.norm());
            EXPECT_LE((out.mean - ref_mean).norm(), 1e-9 * s.mean.norm());
        }
    }
}

TEST(Conditioning, UninformativeAndPerfect) {
    const auto s = tilted_state();
    const auto none = condition_on_outcome(s, ref::kTheta, 123.0, kInf);
    EXPECT_EQ(none.mean, s.mean);
    EXPECT_EQ(none.cov, s.cov);
    const auto perfect = condition_on_outcome(s, ref::kTheta, 123.0, 0.0);
    EXPECT_NEAR(mixed_variable_stats(perfect, ref::kTheta).variance, 0.0, 1e-9 * s.cov.norm());
    EXPECT_NEAR(mixed_variable_stats(perfect, ref::kTheta).mean, 123.0, 1e-9);
}

TEST(QndPair, BackActionCancelledAndConditioned) {
    NoiseModel noise;
    DecoherenceParams d;
    d.eta_sc = 0.0;
    const auto s = make_css(8.5e5);
    const auto r = qnd_pair_measurement(s, kV, kH, Couplings{}, noise, d, 0.0);
    const double rv = readout_noise_variance(2e8, 2, Couplings{}, noise);
    EXPECT_DOUBLE_EQ(r.outcome.readout_variance, rv);
    EXPECT_EQ(r.outcome.kind, MeasurementKind::qnd_pair);
    // With z = 0 the outcome is the prior mean, and the posterior is the Kalman update.
    EXPECT_EQ(r.outcome.phi, 0.0);
    const double v = s.tx() / 2.0;
    EXPECT_NEAR(mixed_variable_stats(r.state, ref::kTheta).variance, v * rv / (v + rv), 1e-9 * v);
    EXPECT_NEAR(r.state.tx(), s.tx(), 1e-9);
}

TEST(QndPair, RejectsMismatchedPulses) {
    const auto s = make_css(1e5);
    const auto weak_h = make_pulse(PolarizationMode::linear_h, 1e8, 2e-6);
    EXPECT_THROW(qnd_pair_measurement(s, kV, weak_h, Couplings{}, NoiseModel{}, DecoherenceParams{}, 0.0),
                 std::invalid_argument);
    EXPECT_THROW(qnd_pair_measurement(s, kH, kV, Couplings{}, NoiseModel{}, DecoherenceParams{}, 0.0),
                 std::invalid_argument);
}

TEST(QndPair, ScatteringShrinksAlignment) {
    const auto s = make_css(8.5e5);
    const auto r = qnd_pair_measurement(s, kV, kH, Couplings{}, NoiseModel{}, DecoherenceParams{}, 0.3);
    EXPECT_NEAR(r.state.tx() / s.tx(), 0.907, 1e-12);
}

TEST(Aoc, UnbiasedOnZeroMean) {
    const auto s = make_css(8.5e5);
    std::vector<double> phis;
    Rng rng(42);
    for (int i = 0; i < 20000; ++i) {
        phis.push_back(aoc_measurement(s, kV, Couplings{}, NoiseModel{}, DecoherenceParams{}, rng).outcome.phi);
    }
    const double se = std::sqrt(sample_variance(phis) / phis.size());
    EXPECT_LT(std::abs(sample_mean(phis)), 4.0 * se);
}

TEST(Aoc, PureFaradayLimit) {
    Couplings c;
    c.kappa2 = 0.0;
    CollectiveSpinState s = make_css(1e5);
    s.mean[kFz] = 250.0;
    const auto r = aoc_measurement(s, kV, c, NoiseModel{}, DecoherenceParams{}, 0.0);
    EXPECT_EQ(r.outcome.phi, 250.0);
    EXPECT_EQ(r.outcome.kind, MeasurementKind::aoc_single);
}

TEST(Aoc, AlignmentSignalScale) {
    // ty = 0.033 Tx, fz = 0: the mean signal is sin(theta) * ty.
    CollectiveSpinState s = make_css(8.22e5);
    s.mean[kTy] = 0.033 * s.tx();
    const auto r = aoc_measurement(s, kV, Couplings{}, NoiseModel{}, DecoherenceParams{}, 0.0);
    EXPECT_NEAR(r.outcome.phi, std::sin(ref::kTheta) * 0.033 * s.tx(), 1e-9 * s.tx());
}

TEST(Aoc, CircularRejected) {
    EXPECT_THROW(aoc_measurement(make_css(10.0), kCirc, Couplings{}, NoiseModel{}, DecoherenceParams{}, 0.0),
                 std::invalid_argument);
}

TEST(Dispersive, MeanRotation) {
    CollectiveSpinState s = make_css(1e6, 1.0);
    s.mean[kTx] = 3.4e5;
    const auto out = dispersive_alignment_signal(s, kCirc, Couplings{}, NoiseModel{}, 0.0);
    EXPECT_NEAR(out.phi, 0.0153, 1e-12);
    EXPECT_EQ(out.kind, MeasurementKind::dispersive);
    EXPECT_NEAR(out.readout_variance, ref::kTechFactor / 4e6, 1e-18);
    EXPECT_EQ(dispersive_alignment_signal(empty_ensemble(), kCirc, Couplings{}, NoiseModel{}, 0.0).phi, 0.0);
    EXPECT_THROW(dispersive_alignment_signal(s, kV, Couplings{}, NoiseModel{}, 0.0), std::invalid_argument);
}
