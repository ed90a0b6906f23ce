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

#include "spinsq/experiments.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spinsq/random.hpp"

namespace spinsq {

namespace {

constexpr std::uint64_t kTagReadout = 0x52454144;      // "READ"
constexpr std::uint64_t kTagIndependent = 0x494e4450;  // "INDP"
constexpr std::uint64_t kTagSqueezing = 0x53515a47;    // "SQZG"
constexpr std::uint64_t kTagRamsey = 0x524d5359;       // "RMSY"
constexpr std::uint64_t kTagDispersive = 0x44495350;   // "DISP"

std::uint64_t tag_for(TrialKind kind) {
    switch (kind) {
        case TrialKind::readout_only:
            return kTagReadout;
        case TrialKind::independent_preparations:
            return kTagIndependent;
        case TrialKind::squeezing:
            return kTagSqueezing;
        case TrialKind::ramsey_css:
        case TrialKind::ramsey_squeezed:
            return kTagRamsey;
    }
    return 0;
}

void require(bool ok, const char *what) {
    if (!ok) {
        throw std::invalid_argument(std::string("config: ") + what);
    }
}

/// Read-out variance of a pulse pair that leaves a conditional variance of
/// `reduction * V` after a surviving fraction `contrast`. Inverts
/// predicted_conditional_var_with_loss for the signal-to-noise ratio.
double prep_readout_for_reduction(double v, double reduction, double contrast) {
    const double p = contrast;
    if (reduction >= p) {
        return std::numeric_limits<double>::infinity();
    }
    if (reduction <= p * (1.0 - p)) {
        throw std::invalid_argument("ramsey overrides: noise reduction is below the loss-limited floor p(1-p)");
    }
    const double snr = (p - reduction) / (reduction - p * (1.0 - p));
    return v / snr;
}

/// Fixed inputs shared by every trial of a run.
class TrialContext {
   public:
    explicit TrialContext(const ExperimentConfig &c)
        : config_(c), pulse_v_(c.pulse_v()), pulse_h_(c.pulse_h()), theta_(mixing_angle(c.couplings, pulse_v_)) {}

    TrialRecord run(const BinSpec &bin, std::uint32_t trial) const {
        const std::uint64_t stream = (static_cast<std::uint64_t>(bin.bin_index) << 32) | trial;
        Rng rng = Rng::for_stream(config_.mc.seed, tag_for(bin.kind), stream);
        // Fixed draw order keeps the Ramsey arms on common random numbers.
        const double z1 = rng.normal();
        const double z2 = rng.normal();

        TrialRecord rec;
        rec.seed_stream_id = stream;
        switch (bin.kind) {
            case TrialKind::readout_only:
                readout_only(rec, z1, z2);
                break;
            case TrialKind::independent_preparations:
                independent(rec, bin.atoms, z1, z2);
                break;
            case TrialKind::squeezing:
                squeezing(rec, bin.atoms, z1, z2);
                break;
            case TrialKind::ramsey_css:
                ramsey_css(rec, bin.atoms, z2);
                break;
            case TrialKind::ramsey_squeezed:
                ramsey_squeezed(rec, bin.atoms, z1, z2);
                break;
        }
        return rec;
    }

   private:
    MeasurementResult pair(const CollectiveSpinState &s, double z) const {
        return qnd_pair_measurement(s, pulse_v_, pulse_h_, config_.couplings, config_.noise, config_.decoherence, z);
    }

    void readout_only(TrialRecord &rec, double z1, double z2) const {
        const auto first = pair(empty_ensemble(), z1);
        const auto second = pair(first.state, z2);
        rec.phi1 = first.outcome.phi;
        rec.phi2 = second.outcome.phi;
    }

    void independent(TrialRecord &rec, double atoms, double z1, double z2) const {
        const auto css = make_css(atoms, config_.atoms.eff_factor);
        rec.tx_in = css.tx();
        rec.phi1 = pair(css, z1).outcome.phi;
        rec.phi2 = pair(css, z2).outcome.phi;
        rec.tx_out = css.tx();
    }

    void squeezing(TrialRecord &rec, double atoms, double z1, double z2) const {
        const auto css = make_css(atoms, config_.atoms.eff_factor);
        rec.tx_in = css.tx();
        const auto first = pair(css, z1);
        const auto waited = apply_loss(first.state, 1.0 - config_.decoherence.eta_dep);
        rec.tx_out = std::hypot(waited.tx(), waited.ty());
        rec.phi1 = first.outcome.phi;
        rec.phi2 = pair(waited, z2).outcome.phi;
    }

    // Dephasing and Larmor rotation between preparation and read-out. An
    // explicit eta_dep takes precedence over the tau_c Gaussian decay.
    CollectiveSpinState precess(const CollectiveSpinState &s) const {
        if (config_.decoherence.eta_dep > 0.0) {
            return free_precession(apply_loss(s, 1.0 - config_.decoherence.eta_dep), config_.field);
        }
        return free_precession(s, config_.field, config_.decoherence.tau_c);
    }

    void read_aoc(TrialRecord &rec, const CollectiveSpinState &s, double z) const {
        rec.tx_out = std::hypot(s.tx(), s.ty());
        rec.phi_aoc =
            aoc_measurement(s, pulse_v_, config_.couplings, config_.noise, config_.decoherence, z).outcome.phi;
    }

    void ramsey_css(TrialRecord &rec, double atoms, double z2) const {
        const auto css = make_css(atoms, config_.atoms.eff_factor);
        rec.tx_in = css.tx();
        read_aoc(rec, precess(css), z2);
    }

    void ramsey_squeezed(TrialRecord &rec, double atoms, double z1, double z2) const {
        const auto css = make_css(atoms, config_.atoms.eff_factor);
        rec.tx_in = css.tx();
        const auto &over = config_.ramsey;
        if (!over.noise_reduction_db && !over.contrast) {
            const auto prepared = pair(css, z1);
            rec.phi1 = prepared.outcome.phi;
            read_aoc(rec, precess(prepared.state), z2);
            return;
        }
        const double contrast = over.contrast.value_or(config_.decoherence.contrast());
        double readout = readout_noise_variance(pulse_v_.photons, 2, config_.couplings, config_.noise);
        if (over.noise_reduction_db) {
            readout = prep_readout_for_reduction(css.tx() / 2.0, db_inv(*over.noise_reduction_db), contrast);
        }
        const auto prepared = measure_mixed(css, theta_, readout, MeasurementKind::qnd_pair, z1);
        rec.phi1 = prepared.outcome.phi;
        // The overridden contrast covers scattering and dephasing together.
        read_aoc(rec, free_precession(apply_loss(prepared.state, contrast), config_.field), z2);
    }

    const ExperimentConfig &config_;
    ProbePulse pulse_v_;
    ProbePulse pulse_h_;
    double theta_;
};

std::vector<TrialRecord> single_bin(const ExperimentConfig &config, TrialKind kind, double atoms, Execution exec) {
    const BinSpec bin{kind, atoms, 0};
    return run_bins(config, std::span<const BinSpec>(&bin, 1), exec);
}

}  // namespace

void ExperimentConfig::validate() const {
    require(std::isfinite(atoms.count) && atoms.count > 0.0, "atoms.count must be positive");
    require(atoms.eff_factor > 0.0 && atoms.eff_factor <= 1.0, "atoms.eff_factor must lie in (0, 1]");
    couplings.validate();
    require(std::isfinite(probe.photons_per_pulse) && probe.photons_per_pulse > 0.0,
            "probe.photons_per_pulse must be positive");
    require(probe.duration_us > 0.0 && probe.spacing_us > 0.0, "probe timing must be positive");
    require(std::isfinite(dispersive.photons) && dispersive.photons > 0.0, "dispersive.photons must be positive");
    noise.validate();
    decoherence.validate();
    field.validate();
    if (ramsey.contrast) {
        require(*ramsey.contrast > 0.0 && *ramsey.contrast <= 1.0, "ramsey.contrast must lie in (0, 1]");
    }
    if (ramsey.noise_reduction_db) {
        require(std::isfinite(*ramsey.noise_reduction_db), "ramsey.noise_reduction_db must be finite");
    }
    require(sweep.loss_factor > 0.0 && sweep.loss_factor <= 1.0, "sweep.loss_factor must lie in (0, 1]");
    require(sweep.steps >= 1, "sweep.steps must be at least 1");
    require(geometry.volume_cm3 > 0.0 && geometry.g_factor > 0.0, "geometry values must be positive");
}

ProbePulse ExperimentConfig::pulse_v() const {
    return make_pulse(PolarizationMode::linear_v, probe.photons_per_pulse, probe.duration_us * 1e-6);
}

ProbePulse ExperimentConfig::pulse_h() const {
    return make_pulse(PolarizationMode::linear_h, probe.photons_per_pulse, probe.duration_us * 1e-6);
}

ProbePulse ExperimentConfig::dispersive_pulse() const {
    return make_pulse(PolarizationMode::circular_plus, dispersive.photons, probe.duration_us * 1e-6);
}

std::vector<TrialRecord> run_bins(const ExperimentConfig &config, std::span<const BinSpec> bins, Execution exec) {
    config.validate();
    if (config.mc.trials < 1) {
        throw std::invalid_argument("run: mc.trials must be at least 1");
    }
    if (config.mc.trials > 0xffffffffULL) {
        throw std::invalid_argument("run: mc.trials exceeds the 32-bit stream space");
    }
    const TrialContext context(config);
    const std::size_t per_bin = config.mc.trials;
    auto records = run_trials<TrialRecord>(
        bins.size() * per_bin,
        [&](std::size_t i) {
            const BinSpec &bin = bins[i / per_bin];
            TrialRecord rec = context.run(bin, static_cast<std::uint32_t>(i % per_bin));
            rec.trial_id = i;
            return rec;
        },
        exec, config.mc.threads);
    return records;
}

std::vector<TrialRecord> run_readout_only(const ExperimentConfig &config, Execution exec) {
    return single_bin(config, TrialKind::readout_only, 0.0, exec);
}

std::vector<TrialRecord> run_independent_preparations(const ExperimentConfig &config, Execution exec) {
    return single_bin(config, TrialKind::independent_preparations, config.atoms.count, exec);
}

std::vector<TrialRecord> run_squeezing_sequence(const ExperimentConfig &config, Execution exec) {
    return single_bin(config, TrialKind::squeezing, config.atoms.count, exec);
}

std::vector<TrialRecord> run_aoc_ramsey(const ExperimentConfig &config, bool squeezed, Execution exec) {
    return single_bin(config, squeezed ? TrialKind::ramsey_squeezed : TrialKind::ramsey_css, config.atoms.count,
                      exec);
}

std::vector<double> sweep_atom_counts(const ExperimentConfig &config) {
    std::vector<double> counts;
    counts.reserve(static_cast<std::size_t>(config.sweep.steps));
    double n = config.atoms.count;
    for (int k = 0; k < config.sweep.steps; ++k) {
        counts.push_back(n);
        n *= config.sweep.loss_factor;
    }
    return counts;
}

std::vector<TrialRecord> run_trap_loss_sweep(const ExperimentConfig &config, SweepProtocol protocol,
                                             Execution exec) {
    std::vector<BinSpec> bins;
    std::uint32_t index = 0;
    for (double atoms : sweep_atom_counts(config)) {
        switch (protocol) {
            case SweepProtocol::squeezing:
                bins.push_back({TrialKind::squeezing, atoms, index});
                break;
            case SweepProtocol::independent_preparations:
                bins.push_back({TrialKind::independent_preparations, atoms, index});
                break;
            case SweepProtocol::ramsey:
                bins.push_back({TrialKind::ramsey_css, atoms, index});
                bins.push_back({TrialKind::ramsey_squeezed, atoms, index});
                break;
        }
        ++index;
    }
    if (config.sweep.readout_bin) {
        bins.push_back({TrialKind::readout_only, 0.0, index});
    }
    return run_bins(config, bins, exec);
}

CalibrationReport run_dispersive_calibration(const ExperimentConfig &config, Execution exec) {
    config.validate();
    if (config.mc.trials < 3) {
        throw std::invalid_argument("calibration: needs at least 3 shots");
    }
    const auto pulse = config.dispersive_pulse();
    const auto css = make_css(config.atoms.count, config.atoms.eff_factor);
    const auto phis = run_trials<double>(
        config.mc.trials,
        [&](std::size_t i) {
            Rng rng = Rng::for_stream(config.mc.seed, kTagDispersive, i);
            return dispersive_alignment_signal(css, pulse, config.couplings, config.noise, rng).phi;
        },
        exec, config.mc.threads);
    // phi = kappa2_aux (N_L/2) T_x / N_L
    const double scale = 2.0 / config.couplings.kappa2_aux;
    const double n = static_cast<double>(phis.size());
    return {css.tx(), {scale * sample_mean(phis), scale * std::sqrt(sample_variance(phis) / n)}, phis.size()};
}

}  // namespace spinsq
