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

#ifndef SPINSQ_EXPERIMENTS_HPP
#define SPINSQ_EXPERIMENTS_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "spinsq/core_model.hpp"
#include "spinsq/dynamics.hpp"
#include "spinsq/estimators.hpp"
#include "spinsq/trial_engine.hpp"

namespace spinsq {

struct AtomsConfig {
    double count = 8.5e5;
    double eff_factor = kDefaultEffFactor;
};

struct ProbeConfig {
    double photons_per_pulse = 2e8;
    double duration_us = 2.0;  // bookkeeping only
    double spacing_us = 5.0;   // bookkeeping only
};

struct DispersiveConfig {
    double photons = 1e6;
};

/// Measured values that replace the model in the squeezed Ramsey arm.
struct RamseyOverrides {
    /// Conditional variance of the prepared state at the read-out pulse,
    /// relative to the input projection noise T_x/2.
    std::optional<double> noise_reduction_db;
    /// T_x at the read-out pulse over T_x of the input state.
    std::optional<double> contrast;
};

struct SweepConfig {
    double loss_factor = 0.85;
    int steps = 20;
    bool readout_bin = true;
};

struct McConfig {
    std::size_t trials = 2000;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct GeometryConfig {
    double volume_cm3 = 3.7e-6;
    double g_factor = 0.5;
};

/// Everything a simulation run needs. Defaults are the experimental values.
struct ExperimentConfig {
    AtomsConfig atoms;
    Couplings couplings;
    ProbeConfig probe;
    DispersiveConfig dispersive;
    NoiseModel noise;
    DecoherenceParams decoherence;
    FieldEnvironment field;
    RamseyOverrides ramsey;
    SweepConfig sweep;
    McConfig mc;
    GeometryConfig geometry;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    ProbePulse pulse_v() const;
    ProbePulse pulse_h() const;
    ProbePulse dispersive_pulse() const;
    /// Alignment of a freshly prepared state with `atoms` atoms.
    double tx_for(double atoms) const { return atoms * this->atoms.eff_factor / 2.0; }
};

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// One repetition of a protocol. Absent outcomes are NaN.
struct TrialRecord {
    std::uint64_t trial_id = 0;
    double tx_in = 0.0;
    double phi1 = kMissing;
    double phi2 = kMissing;
    double phi_aoc = kMissing;
    double tx_out = 0.0;  // alignment length when the last outcome was taken
    std::uint64_t seed_stream_id = 0;
};

enum class TrialKind { readout_only, independent_preparations, squeezing, ramsey_css, ramsey_squeezed };

/// A group of trials at one nominal atom number.
struct BinSpec {
    TrialKind kind = TrialKind::squeezing;
    double atoms = 0.0;
    std::uint32_t bin_index = 0;
};

/// Runs config.mc.trials trials for every bin, in order. Trial i of bin b
/// draws from stream (b << 32 | i); the two Ramsey arms of one bin share
/// streams so their comparison uses common random numbers.
std::vector<TrialRecord> run_bins(const ExperimentConfig &config, std::span<const BinSpec> bins,
                                  Execution exec = Execution::parallel);

std::vector<TrialRecord> run_readout_only(const ExperimentConfig &config, Execution exec = Execution::parallel);
std::vector<TrialRecord> run_independent_preparations(const ExperimentConfig &config,
                                                      Execution exec = Execution::parallel);
std::vector<TrialRecord> run_squeezing_sequence(const ExperimentConfig &config, Execution exec = Execution::parallel);
/// Single Ramsey arm at config.atoms.count; with `squeezed` a QND pair
/// prepares the state before the precession.
std::vector<TrialRecord> run_aoc_ramsey(const ExperimentConfig &config, bool squeezed,
                                        Execution exec = Execution::parallel);

enum class SweepProtocol { squeezing, independent_preparations, ramsey };

/// Atom numbers count * loss^k, k = 0 .. steps-1.
std::vector<double> sweep_atom_counts(const ExperimentConfig &config);

/// One bin per trap-loss step, followed by an empty-trap bin when
/// sweep.readout_bin is set. The Ramsey protocol emits both arms per step.
std::vector<TrialRecord> run_trap_loss_sweep(const ExperimentConfig &config,
                                             SweepProtocol protocol = SweepProtocol::squeezing,
                                             Execution exec = Execution::parallel);

struct CalibrationReport {
    double tx_nominal = 0.0;
    Estimate tx_estimate;
    std::size_t shots = 0;
};

/// Estimates T_x from circular-probe dispersive shots on fresh coherent states.
CalibrationReport run_dispersive_calibration(const ExperimentConfig &config, Execution exec = Execution::parallel);

// Aggregation ---------------------------------------------------------------

struct BinSummary {
    double tx = 0.0;
    std::size_t n = 0;
    // Pulse-pair statistics (read-out subtracted when a read-out level is known).
    std::optional<Estimate> var_phi1;
    std::optional<Estimate> var_phi2;
    std::optional<double> chi;
    std::optional<Estimate> var_cond;
    std::optional<double> contrast;
    std::optional<double> xi2_m;
    // Ramsey sensitivities dE/h in Hz/sqrt(Hz), read-out noise not subtracted.
    std::optional<Estimate> sens_css;
    std::optional<Estimate> sens_sq;

    /// 1 - sens_sq / sens_css, when both arms are present.
    std::optional<double> improvement() const;
};

struct RunSummary {
    std::vector<BinSummary> bins;  // ascending tx, empty-trap bin excluded
    std::optional<Estimate> readout;  // Var(phi_RO) used for subtraction
    std::optional<NoiseScalingFit> fit_phi1;
    std::optional<NoiseScalingFit> fit_phi2;
    std::optional<SqueezingReport> report;  // at the largest tx with pulse-pair data
};

struct SummaryContext {
    /// Known read-out variance. When unset it is estimated from the
    /// empty-trap bin (tx_in == 0); with neither, nothing is subtracted.
    std::optional<double> readout_variance;
    double kappa2_sx = 0.0;         // kappa2 <S_x> of the read-out pulse
    double precession_time = 0.0;   // seconds
    double tx_unit = 1e5;
};

SummaryContext summary_context(const ExperimentConfig &config);

/// Deterministic aggregation of trial records into per-tx statistics, fits
/// and the squeezing report. Every bin needs at least 3 records.
RunSummary summarize(std::span<const TrialRecord> records, const SummaryContext &context);

}  // namespace spinsq

#endif
