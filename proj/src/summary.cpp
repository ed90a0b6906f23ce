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

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "spinsq/errors.hpp"
#include "spinsq/experiments.hpp"

namespace spinsq {

namespace {

Estimate minus(const Estimate &e, const Estimate &readout) {
    return {e.value - readout.value, std::hypot(e.error, readout.error)};
}

Estimate sensitivity(double noise_variance, std::size_t n, double tx, const SummaryContext &ctx) {
    const double s = std::sqrt(noise_variance) / (ctx.kappa2_sx * tx * std::sqrt(ctx.precession_time));
    return {s, s / std::sqrt(2.0 * static_cast<double>(n - 1))};
}

struct Columns {
    std::vector<double> phi1, phi2, tx_out;        // pulse-pair rows
    std::vector<double> css_aoc;                    // Ramsey CSS arm
    std::vector<double> sq_phi1, sq_aoc;            // Ramsey squeezed arm
    std::size_t n = 0;
};

void require_rows(std::size_t rows, double tx) {
    if (rows < 3) {
        throw DegenerateInput("summarize: fewer than 3 records in the bin at tx = " + std::to_string(tx));
    }
}

}  // namespace

std::optional<double> BinSummary::improvement() const {
    if (!sens_css || !sens_sq) {
        return std::nullopt;
    }
    return 1.0 - sens_sq->value / sens_css->value;
}

SummaryContext summary_context(const ExperimentConfig &config) {
    SummaryContext ctx;
    ctx.kappa2_sx = config.couplings.kappa2 * config.probe.photons_per_pulse / 2.0;
    ctx.precession_time = config.field.precession_time;
    return ctx;
}

RunSummary summarize(std::span<const TrialRecord> records, const SummaryContext &context) {
    if (records.empty()) {
        throw DegenerateInput("summarize: no records");
    }
    std::map<double, Columns> bins;
    for (const auto &r : records) {
        Columns &c = bins[r.tx_in];
        ++c.n;
        const bool has1 = std::isfinite(r.phi1);
        if (has1 && std::isfinite(r.phi2)) {
            c.phi1.push_back(r.phi1);
            c.phi2.push_back(r.phi2);
            c.tx_out.push_back(r.tx_out);
        } else if (std::isfinite(r.phi_aoc)) {
            if (has1) {
                c.sq_phi1.push_back(r.phi1);
                c.sq_aoc.push_back(r.phi_aoc);
            } else {
                c.css_aoc.push_back(r.phi_aoc);
            }
        }
    }

    RunSummary out;
    if (context.readout_variance) {
        out.readout = Estimate{*context.readout_variance, 0.0};
    } else if (auto it = bins.find(0.0); it != bins.end()) {
        const Columns &c = it->second;
        require_rows(c.phi1.size(), 0.0);
        // phi1 and phi2 of an empty trap are independent read-out samples.
        const double v = 0.5 * (sample_variance(c.phi1) + sample_variance(c.phi2));
        out.readout = Estimate{v, v * std::sqrt(2.0 / (2.0 * static_cast<double>(c.phi1.size() - 1)))};
    }
    const Estimate readout = out.readout.value_or(Estimate{});

    for (const auto &[tx, c] : bins) {
        if (tx == 0.0) {
            continue;
        }
        require_rows(c.n, tx);
        BinSummary b;
        b.tx = tx;
        b.n = c.n;
        if (!c.phi1.empty()) {
            require_rows(c.phi1.size(), tx);
            b.var_phi1 = minus(variance_estimate(c.phi1), readout);
            b.var_phi2 = minus(variance_estimate(c.phi2), readout);
            b.chi = chi_estimator(c.phi1, c.phi2);
            b.var_cond = conditional_variance(c.phi1, c.phi2, readout.value, readout.error);
            b.contrast = std::min(1.0, sample_mean(c.tx_out) / tx);
            if (b.var_cond->value > 0.0 && *b.contrast > 0.0) {
                b.xi2_m = wineland_xi2(b.var_cond->value, tx / 2.0, *b.contrast);
            }
        }
        if (!c.css_aoc.empty()) {
            require_rows(c.css_aoc.size(), tx);
            b.sens_css = sensitivity(sample_variance(c.css_aoc), c.css_aoc.size(), tx, context);
        }
        if (!c.sq_aoc.empty()) {
            require_rows(c.sq_aoc.size(), tx);
            // Read-out noise is deliberately not subtracted here.
            const double residual = conditional_variance(c.sq_phi1, c.sq_aoc, 0.0).value;
            b.sens_sq = sensitivity(residual, c.sq_aoc.size(), tx, context);
        }
        out.bins.push_back(b);
    }

    std::vector<double> tx, v1, e1, v2, e2;
    for (const auto &b : out.bins) {
        if (b.var_phi1) {
            tx.push_back(b.tx);
            v1.push_back(b.var_phi1->value);
            e1.push_back(b.var_phi1->error);
            v2.push_back(b.var_phi2->value);
            e2.push_back(b.var_phi2->error);
        }
    }
    if (tx.size() >= 3) {
        out.fit_phi1 = quadratic_noise_fit(tx, v1, e1, context.tx_unit);
        out.fit_phi2 = quadratic_noise_fit(tx, v2, e2, context.tx_unit);
    }

    for (auto it = out.bins.rbegin(); it != out.bins.rend(); ++it) {
        if (!it->var_phi1) {
            continue;
        }
        SqueezingReport rep;
        rep.tx = it->tx;
        rep.var_phi1 = it->var_phi1->value;
        rep.var_phi2 = it->var_phi2->value;
        rep.var_conditional = it->var_cond->value;
        rep.chi = *it->chi;
        rep.var_readout = readout.value;
        rep.contrast = *it->contrast;
        if (rep.var_conditional > 0.0) {
            rep.noise_reduction_db = db(rep.var_conditional / (it->tx / 2.0));
            rep.xi2_m = it->xi2_m.value_or(kMissing);
            rep.entanglement_witness = rep.contrast > 0.0 && entanglement_witness(rep.noise_reduction_db, rep.contrast);
        } else {
            rep.noise_reduction_db = -std::numeric_limits<double>::infinity();
            rep.xi2_m = kMissing;
        }
        out.report = rep;
        break;
    }
    return out;
}

}  // namespace spinsq
