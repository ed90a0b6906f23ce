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

#ifndef SPINSQ_CORE_MODEL_HPP
#define SPINSQ_CORE_MODEL_HPP

#include <Eigen/Core>

namespace spinsq {

// Component order of CollectiveSpinState::mean and ::cov.
inline constexpr int kTx = 0;
inline constexpr int kTy = 1;
inline constexpr int kFz = 2;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Atom-light coupling constants, radians per spin.
struct Couplings {
    double kappa1 = 1.47e-7;      // vector (Faraday) coupling of the linear probe
    double kappa2 = 7.54e-9;      // tensor coupling of the linear probe
    double kappa2_aux = 0.9e-7;   // tensor coupling of the circular calibration probe

    /// Strict check used for configured couplings: all positive and finite, kappa2 < kappa1.
    void validate() const;
};

/// Gaussian description of the collective alignment/orientation moments
/// (T_x, T_y, F_z). Covariance is stored exactly symmetric.
struct CollectiveSpinState {
    Vec3 mean = Vec3::Zero();
    Mat3 cov = Mat3::Zero();
    double n_eff = 0.0;

    double tx() const { return mean[kTx]; }
    double ty() const { return mean[kTy]; }
    double fz() const { return mean[kFz]; }

    /// Throws std::invalid_argument on asymmetric / non-PSD covariance or
    /// means exceeding n_eff/2.
    void validate() const;
};

enum class PolarizationMode { linear_v, linear_h, circular_plus };

/// Pulse-integrated Stokes vector of one probe pulse, in photon units.
struct ProbePulse {
    Vec3 stokes_mean = Vec3::Zero();
    double photons = 0.0;
    double duration = 0.0;  // seconds
    PolarizationMode mode = PolarizationMode::linear_v;

    bool is_linear() const { return mode != PolarizationMode::circular_plus; }
    double sx() const { return stokes_mean[0]; }
    double sz() const { return stokes_mean[2]; }

    void validate() const;
};

/// Fully polarized pulse of the requested mode.
ProbePulse make_pulse(PolarizationMode mode, double photons, double duration);

struct DecoherenceParams {
    double eta_sc = 0.093;    // depolarization by probe scattering, per QND pulse pair
    double eta_dep = 0.034;   // dephasing per inter-measurement interval
    double tau_c = 290e-6;    // spin coherence time, seconds

    void validate() const;
    /// Surviving alignment fraction (1 - eta_sc)(1 - eta_dep).
    double contrast() const { return (1.0 - eta_sc) * (1.0 - eta_dep); }
};

struct FieldEnvironment {
    double delta_e_hz = 2900.0;       // m = +-1 Zeeman splitting / h
    double precession_time = 5e-6;    // seconds

    void validate() const;
};

inline constexpr double kDefaultEffFactor = 0.9;

/// Coherent spin state of n_atoms * eff_factor effective atoms aligned along T_x.
CollectiveSpinState make_css(double n_atoms, double eff_factor = kDefaultEffFactor);

/// State with no atoms; used for read-out-only (empty trap) repetitions.
CollectiveSpinState empty_ensemble();

/// Mixing angle of the measured alignment-orientation variable,
/// theta = atan(kappa2 |S_x| / 2). Requires a linear pulse.
double mixing_angle(const Couplings &couplings, const ProbePulse &pulse);

/// Unit vector selecting the mixed variable F_z cos(theta) + T_y sin(theta).
Vec3 mixed_direction(double theta);

struct MixedStats {
    double mean = 0.0;
    double variance = 0.0;
};

MixedStats mixed_variable_stats(const CollectiveSpinState &state, double theta);

}  // namespace spinsq

#endif
