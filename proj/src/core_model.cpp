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

#include "spinsq/core_model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinsq {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void Couplings::validate() const {
    if (!positive_finite(kappa1) || !positive_finite(kappa2) || !positive_finite(kappa2_aux)) {
        throw std::invalid_argument("couplings must be positive and finite");
    }
    if (!(kappa2 < kappa1)) {
        throw std::invalid_argument("couplings: kappa2 must be smaller than kappa1");
    }
}

void CollectiveSpinState::validate() const {
    if (!std::isfinite(n_eff) || n_eff < 0.0) {
        throw std::invalid_argument("state: n_eff must be finite and non-negative");
    }
    if (!mean.allFinite() || !cov.allFinite()) {
        throw std::invalid_argument("state: non-finite moments");
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (cov(i, j) != cov(j, i)) {
                throw std::invalid_argument("state: covariance not symmetric");
            }
        }
    }
    const double trace = cov.trace();
    const double min_eig = Eigen::SelfAdjointEigenSolver<Mat3>(cov, Eigen::EigenvaluesOnly).eigenvalues()[0];
    if (min_eig < -1e-9 * std::abs(trace)) {
        throw std::invalid_argument("state: covariance not positive semidefinite (min eigenvalue " +
                                    std::to_string(min_eig) + ")");
    }
    const double bound = n_eff / 2.0 + 1e-9 * n_eff;
    if (mean.cwiseAbs().maxCoeff() > bound) {
        throw std::invalid_argument("state: mean exceeds n_eff/2");
    }
}

void ProbePulse::validate() const {
    if (!positive_finite(photons) || !positive_finite(duration)) {
        throw std::invalid_argument("pulse: photons and duration must be positive");
    }
    const double half = photons / 2.0;
    if (stokes_mean.squaredNorm() > half * half * (1.0 + 1e-9)) {
        throw std::invalid_argument("pulse: Stokes vector longer than photons/2");
    }
    const bool aligned = (mode == PolarizationMode::linear_v && stokes_mean[0] == half) ||
                         (mode == PolarizationMode::linear_h && stokes_mean[0] == -half) ||
                         (mode == PolarizationMode::circular_plus && stokes_mean[2] == half);
    if (!aligned) {
        throw std::invalid_argument("pulse: Stokes vector inconsistent with polarization mode");
    }
}

ProbePulse make_pulse(PolarizationMode mode, double photons, double duration) {
    ProbePulse p;
    p.photons = photons;
    p.duration = duration;
    p.mode = mode;
    switch (mode) {
        case PolarizationMode::linear_v:
            p.stokes_mean = Vec3(photons / 2.0, 0.0, 0.0);
            break;
        case PolarizationMode::linear_h:
            p.stokes_mean = Vec3(-photons / 2.0, 0.0, 0.0);
            break;
        case PolarizationMode::circular_plus:
            p.stokes_mean = Vec3(0.0, 0.0, photons / 2.0);
            break;
    }
    p.validate();
    return p;
}

void DecoherenceParams::validate() const {
    if (!(eta_sc >= 0.0 && eta_sc < 1.0) || !(eta_dep >= 0.0 && eta_dep < 1.0)) {
        throw std::invalid_argument("decoherence: eta_sc and eta_dep must lie in [0, 1)");
    }
    if (!positive_finite(tau_c)) {
        throw std::invalid_argument("decoherence: tau_c must be positive");
    }
}

void FieldEnvironment::validate() const {
    if (!positive_finite(precession_time)) {
        throw std::invalid_argument("field: precession time must be positive");
    }
    if (!std::isfinite(delta_e_hz)) {
        throw std::invalid_argument("field: Zeeman splitting must be finite");
    }
}

CollectiveSpinState make_css(double n_atoms, double eff_factor) {
    if (!positive_finite(n_atoms)) {
        throw std::invalid_argument("make_css: atom number must be positive");
    }
    if (!(eff_factor > 0.0 && eff_factor <= 1.0)) {
        throw std::invalid_argument("make_css: eff_factor must lie in (0, 1]");
    }
    CollectiveSpinState s;
    s.n_eff = eff_factor * n_atoms;
    s.mean = Vec3(s.n_eff / 2.0, 0.0, 0.0);
    // Var(T_x) = 0: the mean-direction variable only enters at second order.
    s.cov = Vec3(0.0, s.n_eff / 4.0, s.n_eff / 4.0).asDiagonal();
    return s;
}

CollectiveSpinState empty_ensemble() { return CollectiveSpinState{}; }

double mixing_angle(const Couplings &couplings, const ProbePulse &pulse) {
    if (!pulse.is_linear()) {
        throw std::invalid_argument("mixing_angle: circular pulse has no mixing angle");
    }
    return std::atan(couplings.kappa2 * std::abs(pulse.sx()) / 2.0);
}

Vec3 mixed_direction(double theta) { return Vec3(0.0, std::sin(theta), std::cos(theta)); }

MixedStats mixed_variable_stats(const CollectiveSpinState &state, double theta) {
    const Vec3 u = mixed_direction(theta);
    return {u.dot(state.mean), std::max(0.0, u.dot(state.cov * u))};
}

}  // namespace spinsq
