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

#ifndef SPINSQ_DYNAMICS_HPP
#define SPINSQ_DYNAMICS_HPP

#include <optional>

#include "spinsq/core_model.hpp"
#include "spinsq/random.hpp"

namespace spinsq {

enum class MeasurementKind { dispersive, aoc_single, qnd_pair };

/// One polarimeter result. For the mixed-variable measurements `phi` is the
/// scaled rotation, normalized so that <phi> = <T-mixed> and the atomic part
/// of Var(phi) is Var(T-mixed); `readout_variance` is Var(phi_RO) in the same
/// units. For dispersive shots `phi` is a rotation angle in radians.
struct MeasurementOutcome {
    double phi = 0.0;
    double readout_variance = 0.0;
    MeasurementKind kind = MeasurementKind::qnd_pair;
};

/// Which photon number enters zeta = kappa1^2 N_L T_x.
enum class ZetaPhotons { per_pulse, per_pair };

struct NoiseModel {
    double technical_db = -19.0;  // technical read-out noise relative to light shot noise
    bool include_shot_noise = true;
    ZetaPhotons zeta_photons = ZetaPhotons::per_pulse;

    /// Technical noise power relative to shot noise; 0 for technical_db = -inf.
    double technical_ratio() const;
    /// Read-out noise power in units of the shot-noise level.
    double noise_factor() const;
    void validate() const;
};

struct MeasurementResult {
    MeasurementOutcome outcome;
    CollectiveSpinState state;
};

/// Rotation of (T_y, F_z) by alpha = kappa2 * S_x caused by a linear pulse.
CollectiveSpinState probe_rotation_update(const CollectiveSpinState &state, const ProbePulse &pulse,
                                          const Couplings &couplings);

/// Binomial thinning of the atomic moments: a fraction `surviving` keeps its
/// state and correlations, the rest stops contributing to the measured
/// variables. Means scale by `surviving`; the (T_y, F_z) covariance becomes
/// p^2 cov + p(1 - p) |T_perp| / 2 with |T_perp| the input alignment length,
/// so a coherent state stays at the projection-noise level of its reduced
/// alignment.
CollectiveSpinState apply_loss(const CollectiveSpinState &state, double surviving);

/// apply_loss with surviving fraction (1 - eta_sc)(1 - eta_dep).
CollectiveSpinState apply_decoherence(const CollectiveSpinState &state, const DecoherenceParams &params);

/// Depolarization by one pulse when eta_sc is quoted per pulse pair.
double single_pulse_scattering(double eta_sc_pair);

/// Larmor rotation T_x -> T_y by 2 pi (dE/h) T. With a coherence time the
/// transverse alignment means also decay by exp(-(T/tau_c)^2).
CollectiveSpinState free_precession(const CollectiveSpinState &state, const FieldEnvironment &env,
                                    std::optional<double> coherence_time = std::nullopt);

/// Var(phi_RO) of an n_pulses (1 or 2) measurement with pulse_photons per
/// pulse. The gain is fixed so that for shot noise alone a coherent state
/// gives (T_x/2) / Var(phi_RO) = zeta for a pulse pair.
double readout_noise_variance(double pulse_photons, int n_pulses, const Couplings &couplings,
                              const NoiseModel &noise);

/// Gaussian conditioning on an outcome phi = T-mixed(theta) + noise.
CollectiveSpinState condition_on_outcome(const CollectiveSpinState &state, double theta, double phi,
                                         double readout_variance);

/// Draws phi from N(<T-mixed>, Var(T-mixed) + readout_variance) using the
/// given standard-normal deviate and returns it with the conditional state.
MeasurementResult measure_mixed(const CollectiveSpinState &state, double theta, double readout_variance,
                                MeasurementKind kind, double unit_normal);

/// Back-action-free pulse pair (linear_v then linear_h). Scattering of one
/// pair (params.eta_sc) is applied after conditioning; eta_dep is ignored.
MeasurementResult qnd_pair_measurement(const CollectiveSpinState &state, const ProbePulse &pulse_v,
                                       const ProbePulse &pulse_h, const Couplings &couplings,
                                       const NoiseModel &noise, const DecoherenceParams &params,
                                       double unit_normal);
MeasurementResult qnd_pair_measurement(const CollectiveSpinState &state, const ProbePulse &pulse_v,
                                       const ProbePulse &pulse_h, const Couplings &couplings,
                                       const NoiseModel &noise, const DecoherenceParams &params, Rng &rng);

/// Single linear pulse alignment-to-orientation measurement. The state keeps
/// the uncancelled probe rotation and one pulse worth of scattering.
MeasurementResult aoc_measurement(const CollectiveSpinState &state, const ProbePulse &pulse,
                                  const Couplings &couplings, const NoiseModel &noise,
                                  const DecoherenceParams &params, double unit_normal);
MeasurementResult aoc_measurement(const CollectiveSpinState &state, const ProbePulse &pulse,
                                  const Couplings &couplings, const NoiseModel &noise,
                                  const DecoherenceParams &params, Rng &rng);

/// Circular-probe measurement of T_x. phi is the polarization rotation
/// kappa2_aux S_z T_x / N_L in radians (S_y change divided by N_L), with the
/// matching shot-noise variance. No state update.
MeasurementOutcome dispersive_alignment_signal(const CollectiveSpinState &state, const ProbePulse &pulse,
                                               const Couplings &couplings, const NoiseModel &noise,
                                               double unit_normal);
MeasurementOutcome dispersive_alignment_signal(const CollectiveSpinState &state, const ProbePulse &pulse,
                                               const Couplings &couplings, const NoiseModel &noise, Rng &rng);

}  // namespace spinsq

#endif
