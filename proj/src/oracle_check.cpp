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

#include <cmath>

#include "spinsq/cli.hpp"

namespace spinsq {

OraclePrediction predict(const ExperimentConfig &config, double tx) {
    OraclePrediction p;
    p.tx = tx;
    p.zeta = zeta(config.couplings, config.probe.photons_per_pulse, tx);
    p.var_conditional = predicted_conditional_var(tx, p.zeta);
    p.var_second = config.decoherence.contrast() * tx / 2.0;
    p.sensitivity_e_over_h = predicted_sensitivity(std::sqrt(tx / 2.0), config.couplings,
                                                   config.probe.photons_per_pulse / 2.0, tx,
                                                   config.field.precession_time);
    p.field_sensitivity = field_sensitivity(p.sensitivity_e_over_h, config.geometry.volume_cm3,
                                            config.geometry.g_factor);
    return p;
}

OracleCheckReport oracle_check(const ExperimentConfig &config, Execution exec) {
    config.validate();
    OracleCheckReport report;
    report.readout_variance =
        readout_noise_variance(config.probe.photons_per_pulse, 2, config.couplings, config.noise);

    std::optional<RunSummary> simulated;
    if (config.mc.trials > 0) {
        const auto records = run_trap_loss_sweep(config, SweepProtocol::squeezing, exec);
        simulated = summarize(records, summary_context(config));
    }

    for (double atoms : sweep_atom_counts(config)) {
        const double tx = config.tx_for(atoms);
        OracleCheckRow row;
        row.theory = predict(config, tx);
        row.predicted_db = db(row.theory.var_conditional / (tx / 2.0));
        row.var_cond_with_loss =
            predicted_conditional_var_with_loss(tx, report.readout_variance, config.decoherence.contrast());
        if (simulated) {
            for (const auto &b : simulated->bins) {
                if (b.tx == tx && b.var_cond) {
                    row.simulated = *b.var_cond;
                    row.z_score = (b.var_cond->value - row.var_cond_with_loss) / b.var_cond->error;
                }
            }
        }
        report.rows.push_back(row);
    }
    return report;
}

std::string oracle_check_csv(const OracleCheckReport &report) {
    std::string out =
        "tx,zeta,var_cond_pred,var_cond_pred_db,var_cond_pred_loss,sens_e_over_h,field_sens,var_cond_sim,var_cond_sim_err,z\n";
    for (const auto &r : report.rows) {
        const auto &t = r.theory;
        out += format_number(t.tx) + "," + format_number(t.zeta) + "," + format_number(t.var_conditional) + "," +
               format_number(r.predicted_db) + "," + format_number(r.var_cond_with_loss) + "," +
               format_number(t.sensitivity_e_over_h) + "," + format_number(t.field_sensitivity) + "," +
               (r.simulated ? format_number(r.simulated->value) : "") + "," +
               (r.simulated ? format_number(r.simulated->error) : "") + "," + (r.z_score ? format_number(*r.z_score) : "") +
               "\n";
    }
    return out;
}

}  // namespace spinsq
