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

#include "spinsq/estimators.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spinsq/errors.hpp"

namespace spinsq {

namespace {

void require_pairs(std::span<const double> x, std::span<const double> y, const char *op) {
    if (x.size() != y.size()) {
        throw DegenerateInput(std::string(op) + ": sample vectors differ in length");
    }
    if (x.size() < 3) {
        throw DegenerateInput(std::string(op) + ": need at least 3 samples");
    }
}

}  // namespace

double sample_mean(std::span<const double> x) {
    if (x.empty()) {
        throw DegenerateInput("sample_mean: empty sample");
    }
    double s = 0.0;
    for (double v : x) {
        s += v;
    }
    return s / static_cast<double>(x.size());
}

double sample_covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DegenerateInput("sample_covariance: need two equal-length samples of size >= 2");
    }
    const double mx = sample_mean(x);
    const double my = sample_mean(y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += (x[i] - mx) * (y[i] - my);
    }
    return s / static_cast<double>(x.size() - 1);
}

double sample_variance(std::span<const double> x) { return sample_covariance(x, x); }

Estimate variance_estimate(std::span<const double> x) {
    const double v = sample_variance(x);
    return {v, v * std::sqrt(2.0 / static_cast<double>(x.size() - 1))};
}

double chi_estimator(std::span<const double> phi1, std::span<const double> phi2) {
    require_pairs(phi1, phi2, "chi_estimator");
    const double v1 = sample_variance(phi1);
    if (!(v1 > 0.0)) {
        throw DegenerateInput("chi_estimator: zero variance in the first measurement");
    }
    return sample_covariance(phi1, phi2) / v1;
}

Estimate conditional_variance(std::span<const double> phi1, std::span<const double> phi2, double var_readout,
                              double var_readout_err) {
    if (!(var_readout >= 0.0)) {
        throw std::invalid_argument("conditional_variance: read-out variance must be non-negative");
    }
    const double chi = chi_estimator(phi1, phi2);
    std::vector<double> residual(phi1.size());
    for (std::size_t i = 0; i < phi1.size(); ++i) {
        residual[i] = phi2[i] - chi * phi1[i];
    }
    const Estimate r = variance_estimate(residual);
    return {r.value - var_readout, std::hypot(r.error, var_readout_err)};
}

NoiseScalingFit quadratic_noise_fit(std::span<const double> tx_values, std::span<const double> variances,
                                    std::span<const double> variance_errs, double tx_unit) {
    const std::size_t n = tx_values.size();
    if (n < 3 || variances.size() != n || (!variance_errs.empty() && variance_errs.size() != n)) {
        throw DegenerateInput("quadratic_noise_fit: need >= 3 points with matching lengths");
    }
    if (!(tx_unit > 0.0)) {
        throw std::invalid_argument("quadratic_noise_fit: tx_unit must be positive");
    }
    const bool weighted = !variance_errs.empty();
    Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
    Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(tx_values[i] > 0.0)) {
            throw DegenerateInput("quadratic_noise_fit: Tx values must be positive");
        }
        double w = 1.0;
        if (weighted) {
            if (!(variance_errs[i] > 0.0)) {
                throw DegenerateInput("quadratic_noise_fit: errors must be positive");
            }
            const double e = variance_errs[i] / tx_unit;
            w = 1.0 / (e * e);
        }
        const double x = tx_values[i] / tx_unit;
        const Eigen::Vector2d row(x, x * x);
        normal += w * row * row.transpose();
        rhs += w * row * (variances[i] / tx_unit);
    }
    // Relative determinant test; exact for distinct positive abscissae.
    const double det = normal.determinant();
    if (!(std::abs(det) > 1e-12 * normal(0, 0) * normal(1, 1))) {
        throw DegenerateInput("quadratic_noise_fit: singular design (need distinct Tx values)");
    }
    const Eigen::Matrix2d cov_unscaled = normal.inverse();
    const Eigen::Vector2d a = cov_unscaled * rhs;

    Eigen::Matrix2d cov = cov_unscaled;
    if (!weighted) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = tx_values[i] / tx_unit;
            const double r = variances[i] / tx_unit - (a[0] * x + a[1] * x * x);
            rss += r * r;
        }
        cov *= rss / static_cast<double>(n - 2);
    }
    NoiseScalingFit fit;
    fit.a1 = a[0];
    fit.a2 = a[1];
    fit.a1_err = std::sqrt(std::max(0.0, cov(0, 0)));
    fit.a2_err = std::sqrt(std::max(0.0, cov(1, 1)));
    fit.tx_unit = tx_unit;
    return fit;
}

double wineland_xi2(double var_out, double var_css_in, double contrast) {
    if (!(var_out > 0.0) || !(var_css_in > 0.0)) {
        throw std::invalid_argument("wineland_xi2: variances must be positive");
    }
    if (!(contrast > 0.0 && contrast <= 1.0)) {
        throw std::invalid_argument("wineland_xi2: contrast must lie in (0, 1]");
    }
    return (var_out / var_css_in) / (contrast * contrast);
}

bool entanglement_witness(double noise_reduction_db, double contrast) {
    return wineland_xi2(db_inv(noise_reduction_db), 1.0, contrast) < 1.0;
}

double db(double ratio) {
    if (!(ratio > 0.0)) {
        throw std::invalid_argument("db: ratio must be positive");
    }
    return 10.0 * std::log10(ratio);
}

double db_inv(double decibels) { return std::pow(10.0, decibels / 10.0); }

}  // namespace spinsq
