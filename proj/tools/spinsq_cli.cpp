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

// spinsq: QND spin-squeezing and AOC magnetometry simulator.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "spinsq/cli.hpp"
#include "spinsq/errors.hpp"

namespace fs = std::filesystem;
using namespace spinsq;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::string input;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    bool csv = false;
    bool quiet = false;
};

ExperimentConfig resolve(const Options &opt) {
    ExperimentConfig config = opt.config_path.empty() ? parse_config("") : load_config(opt.config_path);
    if (opt.seed) {
        config.mc.seed = *opt.seed;
    }
    if (opt.trials) {
        config.mc.trials = *opt.trials;
    }
    return config;
}

fs::path prepare_out(const Options &opt, const ExperimentConfig &config) {
    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    std::ofstream(dir / "config.resolved") << config_to_text(config);
    return dir;
}

void print_report(const RunSummary &s) {
    if (s.readout) {
        std::printf("read-out variance       %.6g +- %.2g\n", s.readout->value, s.readout->error);
    }
    for (const auto &f : {std::pair{"phi1", s.fit_phi1}, std::pair{"phi2", s.fit_phi2}}) {
        if (f.second) {
            std::printf("fit %s: a1 = %.4f(%.4f)  a2 = %.4f(%.4f)  [Tx in units of %.0e]\n", f.first, f.second->a1,
                        f.second->a1_err, f.second->a2, f.second->a2_err, f.second->tx_unit);
        }
    }
    if (s.report) {
        const auto &r = *s.report;
        std::printf("Tx = %.4g: Var(phi1) = %.5g, Var(phi2) = %.5g, chi = %.4f\n", r.tx, r.var_phi1, r.var_phi2, r.chi);
        std::printf("  conditional variance %.5g (%.2f dB vs Tx/2), contrast %.4f\n", r.var_conditional,
                    r.noise_reduction_db, r.contrast);
        std::printf("  xi^2_m = %.4f (%.2f dB), entanglement witness: %s\n", r.xi2_m,
                    std::isfinite(r.xi2_m) && r.xi2_m > 0 ? db(r.xi2_m) : NAN, r.entanglement_witness ? "yes" : "no");
    }
    bool header = false;
    for (const auto &b : s.bins) {
        if (auto gain = b.improvement()) {
            if (!header) {
                std::printf("%12s %14s %14s %10s\n", "Tx", "dE/h CSS", "dE/h squeezed", "gain");
                header = true;
            }
            std::printf("%12.5g %14.6g %14.6g %9.2f%%\n", b.tx, b.sens_css->value, b.sens_sq->value, 100.0 * *gain);
        }
    }
}

void emit(const Options &opt, const ExperimentConfig &config, const std::vector<TrialRecord> &records,
          const RunSummary &summary) {
    if (!opt.quiet) {
        print_report(summary);
    }
    if (opt.csv) {
        const fs::path dir = prepare_out(opt, config);
        write_trials_csv(records, dir / "trials.csv");
        write_summary_csv(summary, dir / "summary.csv");
    }
}

int cmd_simulate(const Options &opt) {
    const auto config = resolve(opt);
    const BinSpec bins[] = {{TrialKind::squeezing, config.atoms.count, 0}, {TrialKind::readout_only, 0.0, 1}};
    const auto records = run_bins(config, bins);
    const auto summary = summarize(records, summary_context(config));
    emit(opt, config, records, summary);
    if (!opt.quiet && config.mc.trials >= 3) {
        const auto cal = run_dispersive_calibration(config);
        std::printf("dispersive calibration: Tx = %.5g +- %.2g (nominal %.5g, %zu shots)\n", cal.tx_estimate.value,
                    cal.tx_estimate.error, cal.tx_nominal, cal.shots);
    }
    return 0;
}

int cmd_sweep(const Options &opt, SweepProtocol protocol) {
    const auto config = resolve(opt);
    const auto records = run_trap_loss_sweep(config, protocol);
    const auto summary = summarize(records, summary_context(config));
    emit(opt, config, records, summary);
    return 0;
}

int cmd_oracle_check(const Options &opt) {
    const auto config = resolve(opt);
    const auto report = oracle_check(config);
    if (!opt.quiet) {
        std::printf("read-out variance (pulse pair) %.6g\n", report.readout_variance);
        std::printf("%12s %8s %12s %8s %12s %12s %12s %12s %7s\n", "Tx", "zeta", "Var(T|phi)", "dB", "with loss",
                    "dE/h", "dB [fT]", "simulated", "z");
        for (const auto &r : report.rows) {
            std::printf("%12.5g %8.4f %12.5g %8.3f %12.5g %12.5g %12.5g %12.5g %7.2f\n", r.theory.tx, r.theory.zeta,
                        r.theory.var_conditional, r.predicted_db, r.var_cond_with_loss, r.theory.sensitivity_e_over_h,
                        r.theory.field_sensitivity * 1e15, r.simulated ? r.simulated->value : NAN,
                        r.z_score.value_or(NAN));
        }
    }
    if (opt.csv) {
        const fs::path dir = prepare_out(opt, config);
        std::ofstream(dir / "oracle.csv") << oracle_check_csv(report);
    }
    return 0;
}

int cmd_analyze(const Options &opt) {
    const auto config = resolve(opt);
    const auto records = read_trials_csv(opt.input);
    const auto summary = summarize(records, summary_context(config));
    if (!opt.quiet) {
        print_report(summary);
    }
    if (opt.csv) {
        write_summary_csv(summary, prepare_out(opt, config) / "summary.csv");
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"QND spin squeezing and alignment-to-orientation magnetometry simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--config", opt.config_path, "Config file (flat dotted keys)")->check(CLI::ExistingFile);
    app.add_option("--out", opt.out_dir, "Output directory for CSV files");
    app.add_option("--seed", opt.seed, "Override mc.seed");
    app.add_option("--trials", opt.trials, "Override mc.trials");
    app.add_flag("--csv", opt.csv, "Write CSV files into --out");
    app.add_flag("--quiet", opt.quiet, "Suppress the text report");

    auto *simulate = app.add_subcommand("simulate", "Squeezing sequence at atoms.count plus an empty-trap bin");
    auto *sweep = app.add_subcommand("sweep", "Squeezing sequence over the trap-loss sweep");
    auto *ramsey = app.add_subcommand("ramsey", "CSS and squeezed Ramsey AOC arms over the trap-loss sweep");
    auto *oracle = app.add_subcommand("oracle-check", "Closed-form predictions vs Monte Carlo over the sweep grid");
    auto *analyze = app.add_subcommand("analyze", "Summarize an existing trials.csv");
    analyze->add_option("--input", opt.input, "trials.csv to analyze")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*simulate) {
            return cmd_simulate(opt);
        }
        if (*sweep) {
            return cmd_sweep(opt, SweepProtocol::squeezing);
        }
        if (*ramsey) {
            return cmd_sweep(opt, SweepProtocol::ramsey);
        }
        if (*oracle) {
            return cmd_oracle_check(opt);
        }
        if (*analyze) {
            return cmd_analyze(opt);
        }
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
