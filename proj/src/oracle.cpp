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

#include "spinsq/oracle.hpp"

#include <cmath>

namespace spinsq {

double zeta(const Couplings &couplings, double n_photons, double tx) {
    return couplings.kappa1 * couplings.kappa1 * n_photons * tx;
}

double predicted_conditional_var(double tx, double zeta) { return (tx / 2.0) / (1.0 + zeta); }

double predicted_conditional_var_with_loss(double tx, double readout_variance, double contrast) {
    const double v = tx / 2.0;
    const double p = contrast;
    if (readout_variance == 0.0) {
        return p * (1.0 - p) * v;
    }
    const double snr = v / readout_variance;
    return p * v * (1.0 + (1.0 - p) * snr) / (1.0 + snr);
}

double predicted_sensitivity(double delta_t, const Couplings &couplings, double sx, double tx, double time) {
    return delta_t / (couplings.kappa2 * sx * tx * std::sqrt(time));
}

double field_sensitivity(double delta_e_h, double volume_cm3, double g_factor) {
    return delta_e_h / (2.0 * g_factor * kBohrMagnetonOverH) * std::sqrt(volume_cm3);
}

}  // namespace spinsq
