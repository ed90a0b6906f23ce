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

#ifndef SPINSQ_ESTIMATORS_HPP
#define SPINSQ_ESTIMATORS_HPP

#include <span>

namespace spinsq {

/// A point estimate with its 1-sigma standard error.
struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// Var = a1 Tx + a2 Tx^2 with Tx and Var expressed in units of `tx_unit`
/// spins, i.e. Var/u = a1 (Tx/u) + a2 (Tx/u)^2. a1 does not depend on u.
struct NoiseScalingFit {
    double a1 = 0.0;
    double a2 = 0.0;
    double a1_err = 0.0;
    double a2_err = 0.0;
    double tx_unit = 1e5;

    /// Model variance (spin^2) at tx.
    double operator()(double tx) const { return a1 * tx + a2 * tx * tx / tx_unit; }
};

struct SqueezingReport {
    double tx = 0.0;
    double var_phi1 = 0.0;
    double var_phi2 = 0.0;
    double var_conditional = 0.0;
    double chi = 0.0;
    double var_readout = 0.0;
    double noise_reduction_db = 0.0;
    double contrast = 1.0;
    double xi2_m = 0.0;
    bool entanglement_witness = false;
};

double sample_mean(std::span<const double> x);
/// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> x);
double sample_covariance(std::span<const double> x, std::span<const double> y);

/// Sample variance with Gaussian standard error Var sqrt(2/(n-1)).
Estimate variance_estimate(std::span<const double> x);

/// chi = cov(phi1, phi2) / Var(phi1). Needs n >= 3 and Var(phi1) > 0.
double chi_estimator(std::span<const double> phi1, std::span<const double> phi2);

/// Var(phi2 - chi phi1) - var_readout. Not clamped: estimator noise can make
/// it slightly negative. The error combines the Gaussian variance error with
/// `var_readout_err`.
Estimate conditional_variance(std::span<const double> phi1, std::span<const double> phi2, double var_readout,
                              double var_readout_err = 0.0);

/// Weighted least squares of Var = a1 Tx + a2 Tx^2 (no constant term).
/// Weights are 1/err^2 when `variance_errs` is non-empty, else uniform with
/// the residual scale used for the coefficient errors.
NoiseScalingFit quadratic_noise_fit(std::span<const double> tx_values, std::span<const double> variances,
                                    std::span<const double> variance_errs, double tx_unit = 1e5);

/// Wineland parameter (var_out / var_css_in) / contrast^2.
double wineland_xi2(double var_out, double var_css_in, double contrast);

/// xi^2 < 1 for a noise reduction (dB relative to the input projection noise)
/// and contrast T_x(out)/T_x(in).
bool entanglement_witness(double noise_reduction_db, double contrast);

double db(double ratio);
double db_inv(double decibels);

}  // namespace spinsq

#endif
