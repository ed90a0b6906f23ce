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

#ifndef SPINSQ_ORACLE_HPP
#define SPINSQ_ORACLE_HPP

#include "spinsq/core_model.hpp"

namespace spinsq {

/// mu_B / h in Hz/T.
inline constexpr double kBohrMagnetonOverH = 1.39962e10;
/// |g_F| of the f = 1 ground state.
inline constexpr double kDefaultGFactor = 0.5;

struct OraclePrediction {
    double tx = 0.0;
    double zeta = 0.0;
    double var_conditional = 0.0;  // (Tx/2)/(1 + zeta)
    double var_second = 0.0;       // contrast * Tx/2
    double sensitivity_e_over_h = 0.0;  // Hz/sqrt(Hz), projection-noise-limited CSS
    double field_sensitivity = 0.0;     // T sqrt(cm^3)/sqrt(Hz)
};

/// zeta = kappa1^2 N_L Tx.
double zeta(const Couplings &couplings, double n_photons, double tx);

/// (Tx/2) / (1 + zeta).
double predicted_conditional_var(double tx, double zeta);

/// Conditional variance of the second of two pulse-pair measurements when a
/// fraction 1 - contrast of the atoms is lost in between:
/// p V (1 + (1 - p) V/R) / (1 + V/R), V = Tx/2, R = read-out variance.
/// Reduces to predicted_conditional_var for contrast = 1.
double predicted_conditional_var_with_loss(double tx, double readout_variance, double contrast);

/// dE/h = delta_T / (kappa2 S_x T_x sqrt(time)).
double predicted_sensitivity(double delta_t, const Couplings &couplings, double sx, double tx, double time);

/// delta B = (dE/h) / (2 g mu_B/h) * sqrt(volume), from dE = 2 g mu_B B for m = +-1.
double field_sensitivity(double delta_e_h, double volume_cm3, double g_factor = kDefaultGFactor);

}  // namespace spinsq

#endif
