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

// Randomized property checks. Generators are seeded so failures reproduce.

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "reference.hpp"
#include "spinsq/dynamics.hpp"
#include "spinsq/estimators.hpp"
#include "spinsq/experiments.hpp"
#include "spinsq/oracle.hpp"

using namespace spinsq;

namespace {

class Gen {
   public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(eng_); }
    double normal() { return std::normal_distribution<double>()(eng_); }

    CollectiveSpinState state() {
        auto s = make_css(log_uniform(10.0, 1e6), uniform(0.1, 1.0));
        const double tx = s.tx();
        Mat3 a;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                a(i, j) = normal();
            }
        }
        Mat3 extra = 0.1 * tx * a * a.transpose() / 9.0;
        s.cov += 0.5 * (extra + extra.transpose());
        s.mean = Vec3(tx * uniform(0.5, 1.0), tx * uniform(-0.1, 0.1), tx * uniform(-0.1, 0.1));
        return s;
    }

    Couplings couplings() {
        Couplings c;
        c.kappa1 = log_uniform(1e-9, 1e-6);
        c.kappa2 = c.kappa1 * uniform(0.0, 0.5);
        return c;
    }

    NoiseModel noise() {
        NoiseModel n;
        n.technical_db = uniform(-40.0, 5.0);
        n.include_shot_noise = pick(4) != 0;
        return n;
    }

    DecoherenceParams decoherence() {
        DecoherenceParams d;
        d.eta_sc = uniform(0.0, 0.5);
        d.eta_dep = uniform(0.0, 0.5);
        return d;
    }

   private:
    std::mt19937_64 eng_;
};

double min_eigen(const Mat3 &m) { return Eigen::SelfAdjointEigenSolver<Mat3>(m).eigenvalues().minCoeff(); }

std::vector<double> col(const std::vector<TrialRecord> &r, double TrialRecord::*f) {
    std::vector<double> out;
    for (const auto &x : r) {
        out.push_back(x.*f);
    }
    return out;
}

}  // namespace

TEST(Property, CovariancePsdAfterRandomChains) {
    Gen g(2024);
    for (int chain = 0; chain < 1000; ++chain) {
        auto s = g.state();
        const auto c = g.couplings();
        const double photons = g.log_uniform(1e4, 1e10);
        const auto v = make_pulse(PolarizationMode::linear_v, photons, 1e-6);
        const auto h = make_pulse(PolarizationMode::linear_h, photons, 1e-6);
        const auto noise = g.noise();
        const auto deco = g.decoherence();
        const int steps = 1 + g.pick(12);
        for (int k = 0; k < steps; ++k) {
            switch (g.pick(6)) {
                case 0:
                    s = probe_rotation_update(s, g.pick(2) ? v : h, c);
                    break;
                case 1:
                    s = apply_loss(s, g.uniform(0.0, 1.0));
                    break;
                case 2: {
                    FieldEnvironment env;
                    env.delta_e_hz = g.uniform(-1e5, 1e5);
                    s = free_precession(s, env, g.pick(2) ? std::optional<double>(g.uniform(1e-6, 1e-3))
                                                          : std::nullopt);
                    break;
                }
                case 3:
                    s = condition_on_outcome(s, g.uniform(0.0, 1.5), g.normal() * 1e3, g.log_uniform(1e-3, 1e9));
                    break;
                case 4:
                    s = qnd_pair_measurement(s, v, h, c, noise, deco, g.normal()).state;
                    break;
                default:
                    s = aoc_measurement(s, v, c, noise, deco, g.normal()).state;
                    break;
            }
            const double scale = std::max(1.0, std::abs(s.cov.trace()));
            ASSERT_TRUE(s.cov.allFinite()) << "chain " << chain;
            ASSERT_EQ(s.cov, s.cov.transpose()) << "chain " << chain;
            ASSERT_GE(min_eigen(s.cov), -1e-9 * scale) << "chain " << chain << " step " << k;
        }
    }
}

TEST(Property, PairBackActionCancels) {
    Gen g(7);
    for (int i = 0; i < 500; ++i) {
        const auto s = g.state();
        const auto c = g.couplings();
        const double photons = g.log_uniform(1e4, 1e10);
        const auto v = make_pulse(PolarizationMode::linear_v, photons, 1e-6);
        const auto h = make_pulse(PolarizationMode::linear_h, photons, 1e-6);
        const auto out = probe_rotation_update(probe_rotation_update(s, v, c), h, c);
        EXPECT_LE((out.mean - s.mean).norm(), 1e-12 * s.mean.norm());
        EXPECT_LE((out.cov - s.cov).norm(), 1e-12 * s.cov.norm());
    }
}

TEST(Property, ConditioningNeverIncreasesVariance) {
    Gen g(8);
    for (int i = 0; i < 1000; ++i) {
        const auto s = g.state();
        const double theta = g.uniform(0.0, 1.5);
        const double r1 = g.log_uniform(1e-3, 1e8);
        const double r2 = r1 * g.uniform(1.0, 100.0);
        const auto tight = condition_on_outcome(s, theta, g.normal(), r1);
        const auto loose = condition_on_outcome(s, theta, g.normal(), r2);
        // Posterior covariance does not depend on the outcome and shrinks with more information.
        const double tol = 1e-9 * s.cov.norm();
        EXPECT_GE(min_eigen(s.cov - loose.cov), -tol);
        EXPECT_GE(min_eigen(loose.cov - tight.cov), -tol);
        EXPECT_LE(mixed_variable_stats(tight, theta).variance, mixed_variable_stats(loose, theta).variance + tol);
    }
}

TEST(Property, LawOfTotalVariance) {
    // Var(T) = E[Var(T | phi)] + Var(E[T | phi]) for the measured mixed variable.
    const auto s = make_css(8.5e5);
    const double theta = ref::kTheta;
    const double r = readout_noise_variance(2e8, 2, Couplings{}, NoiseModel{});
    Rng rng(31);
    const std::size_t n = 10000;
    std::vector<double> post_means(n);
    double post_var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto m = measure_mixed(s, theta, r, MeasurementKind::qnd_pair, rng.normal());
        const auto st = mixed_variable_stats(m.state, theta);
        post_means[i] = st.mean;
        post_var = st.variance;
    }
    const auto between = variance_estimate(post_means);
    const double prior = mixed_variable_stats(s, theta).variance;
    EXPECT_NEAR(post_var + between.value, prior, 3.0 * between.error);
}

TEST(Property, SequentialPairCorrelation) {
    // Two pulse pairs, no decoherence: corr(phi1, phi2) = zeta / (1 + zeta).
    ExperimentConfig c;
    c.mc.trials = 10000;
    c.mc.seed = 12;
    c.decoherence.eta_sc = 0.0;
    c.decoherence.eta_dep = 0.0;
    c.noise.technical_db = -std::numeric_limits<double>::infinity();
    const auto rec = run_squeezing_sequence(c);
    const auto p1 = col(rec, &TrialRecord::phi1);
    const auto p2 = col(rec, &TrialRecord::phi2);
    const double rho = sample_covariance(p1, p2) / std::sqrt(sample_variance(p1) * sample_variance(p2));
    const double z = zeta(c.couplings, c.probe.photons_per_pulse, 3.825e5);
    const double expected = z / (1.0 + z);
    const double se = (1.0 - expected * expected) / std::sqrt(double(p1.size()));
    EXPECT_NEAR(rho, expected, 3.0 * se);
    // Oracle equivalence for the conditional variance at the same point.
    const double ro = readout_noise_variance(2e8, 2, c.couplings, c.noise);
    const auto vc = conditional_variance(p1, p2, ro);
    EXPECT_NEAR(vc.value, predicted_conditional_var(3.825e5, z), 3.0 * vc.error);
}

TEST(Property, ConditionalVarianceIdentity) {
    Gen g(13);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 3 + static_cast<std::size_t>(g.pick(200));
        std::vector<double> a(n), b(n);
        const double mix = g.uniform(-2.0, 2.0);
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = g.normal() * g.uniform(0.5, 2.0);
            b[k] = mix * a[k] + g.normal();
        }
        const double r = g.uniform(0.0, 1.0);
        const double va = sample_variance(a), vb = sample_variance(b), cab = sample_covariance(a, b);
        const double rho2 = cab * cab / (va * vb);
        const double lhs = conditional_variance(a, b, r).value;
        EXPECT_NEAR(lhs, (1.0 - rho2) * vb - r, 1e-10 * (vb + 1.0));
        EXPECT_NEAR(chi_estimator(a, b), cab / va, 1e-12 * (1.0 + std::abs(cab / va)));
    }
}

TEST(Property, ChiOffsetAndScale) {
    Gen g(14);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> a(50), b(50);
        for (std::size_t k = 0; k < a.size(); ++k) {
            a[k] = g.normal();
            b[k] = 0.7 * a[k] + g.normal();
        }
        const double chi = chi_estimator(a, b);
        const double oa = g.uniform(-1e3, 1e3), ob = g.uniform(-1e3, 1e3), s = g.uniform(0.1, 10.0);
        std::vector<double> a2(a), b2(b);
        for (std::size_t k = 0; k < a.size(); ++k) {
            a2[k] += oa;
            b2[k] = s * b2[k] + ob;
        }
        EXPECT_NEAR(chi_estimator(a2, b2), s * chi, 1e-9 * (1.0 + s * std::abs(chi)));
    }
}

TEST(Property, DecibelRoundTrip) {
    Gen g(15);
    for (int i = 0; i < 1000; ++i) {
        const double x = g.log_uniform(1e-12, 1e12);
        EXPECT_NEAR(db_inv(db(x)) / x, 1.0, 1e-12);
        const double d = g.uniform(-100.0, 100.0);
        EXPECT_NEAR(db(db_inv(d)), d, 1e-11);
    }
}

TEST(Property, CrossProtocolFirstMeasurement) {
    // phi1 is the same first measurement of a fresh CSS in both protocols.
    ExperimentConfig c;
    c.mc.trials = 10000;
    c.mc.seed = 3;
    const auto a = variance_estimate(col(run_squeezing_sequence(c), &TrialRecord::phi1));
    const auto b = variance_estimate(col(run_independent_preparations(c), &TrialRecord::phi1));
    EXPECT_NEAR(a.value, b.value, 3.0 * std::hypot(a.error, b.error));
}

TEST(Property, SummariesInvariantToExecution) {
    ExperimentConfig c;
    c.mc.trials = 500;
    c.sweep.steps = 5;
    const auto ctx = summary_context(c);
    const auto serial = summarize(run_trap_loss_sweep(c, SweepProtocol::squeezing, Execution::serial), ctx);
    for (int threads : {2, 5}) {
        c.mc.threads = threads;
        const auto par = summarize(run_trap_loss_sweep(c, SweepProtocol::squeezing, Execution::parallel), ctx);
        ASSERT_EQ(par.bins.size(), serial.bins.size());
        for (std::size_t i = 0; i < par.bins.size(); ++i) {
            EXPECT_EQ(par.bins[i].var_cond->value, serial.bins[i].var_cond->value);
            EXPECT_EQ(*par.bins[i].chi, *serial.bins[i].chi);
        }
        EXPECT_EQ(par.fit_phi1->a1, serial.fit_phi1->a1);
        EXPECT_EQ(par.fit_phi2->a2, serial.fit_phi2->a2);
    }
}
