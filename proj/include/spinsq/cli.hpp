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

#ifndef SPINSQ_CLI_HPP
#define SPINSQ_CLI_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spinsq/experiments.hpp"
#include "spinsq/oracle.hpp"

namespace spinsq {

// Configuration ---------------------------------------------------------------
//
// Flat "dotted.key = value" lines; '#' starts a comment. Every key is
// optional and unknown keys are rejected.

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path &path);
/// Fully resolved config in the same format (round-trips through parse_config).
std::string config_to_text(const ExperimentConfig &config);
/// Every key parse_config accepts, in canonical order.
std::vector<std::string> config_keys();

// CSV ---------------------------------------------------------------------------

inline const std::vector<std::string> kTrialColumns = {"trial_id", "tx_in", "phi1", "phi2",
                                                       "phi_aoc", "tx_out", "seed_stream_id"};
inline const std::vector<std::string> kSummaryColumns = {
    "tx", "var_phi1", "var_phi1_err", "var_phi2", "var_phi2_err", "chi", "var_cond",
    "var_cond_err", "xi2_m", "sens_css", "sens_sq", "kind"};

/// %.17g; NaN is written as an empty field.
std::string format_number(double v);

void write_trials_csv(std::span<const TrialRecord> records, const std::filesystem::path &path);
std::vector<TrialRecord> read_trials_csv(const std::filesystem::path &path);
std::string trials_csv(std::span<const TrialRecord> records);
std::vector<TrialRecord> parse_trials_csv(std::string_view text);

/// One kind=bin row per tx, then kind=readout, then kind=fit rows. Fit rows
/// carry the polynomial power (1 or 2) in `tx`, the phi1 coefficient and
/// error in var_phi1/var_phi1_err and the phi2 ones in var_phi2/var_phi2_err.
std::string summary_csv(const RunSummary &summary);
void write_summary_csv(const RunSummary &summary, const std::filesystem::path &path);

// Oracle cross-check ----------------------------------------------------------------

struct OracleCheckRow {
    OraclePrediction theory;
    double predicted_db = 0.0;         // var_conditional vs Tx/2
    double var_cond_with_loss = 0.0;   // same configuration's loss and read-out
    std::optional<Estimate> simulated;  // read-out-subtracted conditional variance
    std::optional<double> z_score;      // against var_cond_with_loss
};

struct OracleCheckReport {
    std::vector<OracleCheckRow> rows;  // one per trap-loss step, descending tx
    double readout_variance = 0.0;
};

OraclePrediction predict(const ExperimentConfig &config, double tx);

/// Theory table over the trap-loss grid. With mc.trials > 0 a squeezing
/// sweep is simulated and each row gets the Monte Carlo conditional variance
/// and its z-score.
OracleCheckReport oracle_check(const ExperimentConfig &config, Execution exec = Execution::parallel);
std::string oracle_check_csv(const OracleCheckReport &report);

}  // namespace spinsq

#endif
