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

#include "spinsq/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace spinsq {

namespace {

void symmetrize(Mat3 &m) { m = 0.5 * (m + m.transpose()).eval(); }

CollectiveSpinState rotate(const CollectiveSpinState &state, const Mat3 &r) {
    CollectiveSpinState out = state;
    out.mean = r * state.mean;
    out.cov = r * state.cov * r.transpose();
    symmetrize(out.cov);
    return out;
}

void require_linear(const ProbePulse &pulse, const char *op) {
    if (!pulse.is_linear()) {
        throw std::invalid_argument(std::string(op) + ": requires a linearly polarized pulse");
    }
}

}  // namespace

double NoiseModel::technical_ratio() const {
    if (std::isinf(technical_db) && technical_db < 0) {
        return 0.0;
    }
    return std::pow(10.0, technical_db / 10.0);
}

double NoiseModel::noise_factor() const { return (include_shot_noise ? 1.0 : 0.0) + technical_ratio(); }

void NoiseModel::validate() const {
    if (std::isnan(technical_db) || technical_db == std::numeric_limits<double>::infinity()) {
        throw std::invalid_argument("noise: technical_db must be a number or -inf");
    }
}

CollectiveSpinState probe_rotation_update(const CollectiveSpinState &state, const ProbePulse &pulse,
                                          const Couplings &couplings) {
    require_linear(pulse, "probe_rotation_update");
    const double alpha = couplings.kappa2 * pulse.sx();
    if (alpha == 0.0) {
        return state;
    }
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    Mat3 r;
    // d/dt T_y = -k2 S_x F_z, d/dt F_z = +k2 S_x T_y
    r << 1.0, 0.0, 0.0,
         0.0, c, -s,
         0.0, s, c;
    return rotate(state, r);
}

CollectiveSpinState apply_loss(const CollectiveSpinState &state, double surviving) {
    if (!(surviving >= 0.0 && surviving <= 1.0)) {
        throw std::invalid_argument("apply_loss: surviving fraction must lie in [0, 1]");
    }
    if (surviving == 1.0) {
        return state;
    }
    const double p = surviving;
    const double alignment = std::hypot(state.tx(), state.ty());
    const double floor = p * (1.0 - p) * alignment / 2.0;
    CollectiveSpinState out = state;
    out.mean = p * state.mean;
    out.cov = p * p * state.cov;
    out.cov(kTy, kTy) += floor;
    out.cov(kFz, kFz) += floor;
    return out;
}

CollectiveSpinState apply_decoherence(const CollectiveSpinState &state, const DecoherenceParams &params) {
    return apply_loss(state, params.contrast());
}

double single_pulse_scattering(double eta_sc_pair) { return 1.0 - std::sqrt(1.0 - eta_sc_pair); }

CollectiveSpinState free_precession(const CollectiveSpinState &state, const FieldEnvironment &env,
                                    std::optional<double> coherence_time) {
    const double alpha = 2.0 * std::numbers::pi * env.delta_e_hz * env.precession_time;
    CollectiveSpinState out = state;
    if (alpha != 0.0) {
        const double c = std::cos(alpha);
        const double s = std::sin(alpha);
        Mat3 r;
        r << c, -s, 0.0,
             s, c, 0.0,
             0.0, 0.0, 1.0;
        out = rotate(state, r);
    }
    if (coherence_time) {
        const double x = env.precession_time / *coherence_time;
        const double decay = std::exp(-x * x);
        out.mean[kTx] *= decay;
        out.mean[kTy] *= decay;
    }
    return out;
}

double readout_noise_variance(double pulse_photons, int n_pulses, const Couplings &couplings,
                              const NoiseModel &noise) {
    if (n_pulses != 1 && n_pulses != 2) {
        throw std::invalid_argument("readout_noise_variance: n_pulses must be 1 or 2");
    }
    if (!(pulse_photons > 0.0)) {
        throw std::invalid_argument("readout_noise_variance: photon number must be positive");
    }
    const double zeta_photons = noise.zeta_photons == ZetaPhotons::per_pair ? 2.0 * pulse_photons : pulse_photons;
    // Gain g = n kappa1 N_L / 2 maps S_y to phi; shot noise of n pulses is n N_L / 4.
    const double k1 = couplings.kappa1;
    return noise.noise_factor() / (n_pulses * k1 * k1 * zeta_photons);
}

CollectiveSpinState condition_on_outcome(const CollectiveSpinState &state, double theta, double phi,
                                         double readout_variance) {
    if (std::isinf(readout_variance)) {
        return state;
    }
    const Vec3 u = mixed_direction(theta);
    const Vec3 cov_u = state.cov * u;
    const double innovation_var = u.dot(cov_u) + readout_variance;
    if (!(innovation_var > 0.0)) {
        return state;
    }
    const Vec3 gain = cov_u / innovation_var;
    CollectiveSpinState out = state;
    out.mean += gain * (phi - u.dot(state.mean));
    // Joseph form: stays PSD and leaves no residual along u when R = 0.
    const Mat3 keep = Mat3::Identity() - gain * u.transpose();
    out.cov = keep * state.cov * keep.transpose() + readout_variance * gain * gain.transpose();
    symmetrize(out.cov);
    return out;
}

MeasurementResult measure_mixed(const CollectiveSpinState &state, double theta, double readout_variance,
                                MeasurementKind kind, double unit_normal) {
    if (!(readout_variance >= 0.0)) {
        throw std::invalid_argument("measure_mixed: read-out variance must be non-negative");
    }
    const MixedStats prior = mixed_variable_stats(state, theta);
    const double phi = prior.mean + std::sqrt(prior.variance + readout_variance) * unit_normal;
    return {{phi, readout_variance, kind}, condition_on_outcome(state, theta, phi, readout_variance)};
}

MeasurementResult qnd_pair_measurement(const CollectiveSpinState &state, const ProbePulse &pulse_v,
                                       const ProbePulse &pulse_h, const Couplings &couplings,
                                       const NoiseModel &noise, const DecoherenceParams &params,
                                       double unit_normal) {
    if (pulse_v.mode != PolarizationMode::linear_v || pulse_h.mode != PolarizationMode::linear_h) {
        throw std::invalid_argument("qnd_pair_measurement: expects a linear_v pulse followed by a linear_h pulse");
    }
    if (pulse_v.photons != pulse_h.photons) {
        throw std::invalid_argument("qnd_pair_measurement: pulses must carry equal photon numbers");
    }
    const double theta = mixing_angle(couplings, pulse_v);
    const double readout = readout_noise_variance(pulse_v.photons, 2, couplings, noise);
    MeasurementResult r = measure_mixed(state, theta, readout, MeasurementKind::qnd_pair, unit_normal);
    // The h pulse undoes the T_y <-> F_z rotation of the v pulse.
    r.state = probe_rotation_update(r.state, pulse_v, couplings);
    r.state = probe_rotation_update(r.state, pulse_h, couplings);
    r.state = apply_loss(r.state, 1.0 - params.eta_sc);
    return r;
}

MeasurementResult qnd_pair_measurement(const CollectiveSpinState &state, const ProbePulse &pulse_v,
                                       const ProbePulse &pulse_h, const Couplings &couplings,
                                       const NoiseModel &noise, const DecoherenceParams &params, Rng &rng) {
    return qnd_pair_measurement(state, pulse_v, pulse_h, couplings, noise, params, rng.normal());
}

MeasurementResult aoc_measurement(const CollectiveSpinState &state, const ProbePulse &pulse,
                                  const Couplings &couplings, const NoiseModel &noise,
                                  const DecoherenceParams &params, double unit_normal) {
    require_linear(pulse, "aoc_measurement");
    const double theta = mixing_angle(couplings, pulse);
    const double readout = readout_noise_variance(pulse.photons, 1, couplings, noise);
    MeasurementResult r = measure_mixed(state, theta, readout, MeasurementKind::aoc_single, unit_normal);
    r.state = probe_rotation_update(r.state, pulse, couplings);
    r.state = apply_loss(r.state, 1.0 - single_pulse_scattering(params.eta_sc));
    return r;
}

MeasurementResult aoc_measurement(const CollectiveSpinState &state, const ProbePulse &pulse,
                                  const Couplings &couplings, const NoiseModel &noise,
                                  const DecoherenceParams &params, Rng &rng) {
    return aoc_measurement(state, pulse, couplings, noise, params, rng.normal());
}

MeasurementOutcome dispersive_alignment_signal(const CollectiveSpinState &state, const ProbePulse &pulse,
                                               const Couplings &couplings, const NoiseModel &noise,
                                               double unit_normal) {
    if (pulse.mode != PolarizationMode::circular_plus) {
        throw std::invalid_argument("dispersive_alignment_signal: requires a circular_plus pulse");
    }
    const double n = pulse.photons;
    // S_y shift in photon units; shot noise Var(S_y) = N_L / 4.
    const double delta_sy = couplings.kappa2_aux * pulse.sz() * state.tx();
    const double sy_variance = noise.noise_factor() * n / 4.0;
    const double sy = delta_sy + std::sqrt(sy_variance) * unit_normal;
    return {sy / n, sy_variance / (n * n), MeasurementKind::dispersive};
}

MeasurementOutcome dispersive_alignment_signal(const CollectiveSpinState &state, const ProbePulse &pulse,
                                               const Couplings &couplings, const NoiseModel &noise, Rng &rng) {
    return dispersive_alignment_signal(state, pulse, couplings, noise, rng.normal());
}

}  // namespace spinsq
