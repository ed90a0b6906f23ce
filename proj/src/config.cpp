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
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "spinsq/cli.hpp"
#include "spinsq/errors.hpp"

namespace spinsq {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Field {
    std::string key;
    std::function<void(ExperimentConfig &, std::string_view, int)> set;
    std::function<std::string(const ExperimentConfig &)> get;
};

double to_double(const std::string &key, std::string_view v, int line, bool allow_neg_inf = false) {
    double out = 0.0;
    const auto *end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(key, line, "expected a number, got '" + std::string(v) + "'");
    }
    if (std::isnan(out) || (std::isinf(out) && !(allow_neg_inf && out < 0))) {
        throw ConfigError(key, line, "value must be finite");
    }
    return out;
}

template <class Int>
Int to_integer(const std::string &key, std::string_view v, int line) {
    Int out{};
    const auto *end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(key, line, "expected an integer, got '" + std::string(v) + "'");
    }
    return out;
}

bool to_bool(const std::string &key, std::string_view v, int line) {
    if (v == "true") {
        return true;
    }
    if (v == "false") {
        return false;
    }
    throw ConfigError(key, line, "expected true or false, got '" + std::string(v) + "'");
}

std::string num(double v) {
    if (std::isinf(v)) {
        return v < 0 ? "-inf" : "inf";
    }
    return format_number(v);
}

using Check = std::function<bool(double)>;

/// Field backed by a double member reached through `ref`.
template <class Ref>
Field real_field(std::string key, Ref ref, Check ok, const char *range, double scale = 1.0,
                 bool allow_neg_inf = false) {
    return {key,
            [=](ExperimentConfig &c, std::string_view v, int line) {
                const double x = to_double(key, v, line, allow_neg_inf);
                if (!ok(x)) {
                    throw ConfigError(key, line, std::string("out of range: ") + range);
                }
                ref(c) = x * scale;
            },
            [=](const ExperimentConfig &c) {
                ExperimentConfig copy = c;
                return num(ref(copy) / scale);
            }};
}

template <class Ref>
Field optional_field(std::string key, Ref ref, Check ok, const char *range) {
    return {key,
            [=](ExperimentConfig &c, std::string_view v, int line) {
                if (v == "none") {
                    ref(c).reset();
                    return;
                }
                const double x = to_double(key, v, line);
                if (!ok(x)) {
                    throw ConfigError(key, line, std::string("out of range: ") + range);
                }
                ref(c) = x;
            },
            [=](const ExperimentConfig &c) {
                ExperimentConfig copy = c;
                const auto &o = ref(copy);
                return o ? num(*o) : std::string("none");
            }};
}

const Check positive = [](double x) { return x > 0.0; };
const Check unit_open = [](double x) { return x >= 0.0 && x < 1.0; };
const Check unit_closed = [](double x) { return x > 0.0 && x <= 1.0; };
const Check any = [](double) { return true; };

const std::vector<Field> &fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(real_field("couplings.kappa1", [](ExperimentConfig &c) -> double & { return c.couplings.kappa1; },
                               positive, "> 0"));
        f.push_back(real_field("couplings.kappa2", [](ExperimentConfig &c) -> double & { return c.couplings.kappa2; },
                               positive, "> 0"));
        f.push_back(real_field("couplings.kappa2_aux",
                               [](ExperimentConfig &c) -> double & { return c.couplings.kappa2_aux; }, positive,
                               "> 0"));
        f.push_back(real_field("atoms.count", [](ExperimentConfig &c) -> double & { return c.atoms.count; }, positive,
                               "> 0"));
        f.push_back(real_field("atoms.eff_factor", [](ExperimentConfig &c) -> double & { return c.atoms.eff_factor; },
                               unit_closed, "(0, 1]"));
        f.push_back(real_field("probe.photons_per_pulse",
                               [](ExperimentConfig &c) -> double & { return c.probe.photons_per_pulse; }, positive,
                               "> 0"));
        f.push_back(real_field("probe.duration_us", [](ExperimentConfig &c) -> double & { return c.probe.duration_us; },
                               positive, "> 0"));
        f.push_back(real_field("probe.spacing_us", [](ExperimentConfig &c) -> double & { return c.probe.spacing_us; },
                               positive, "> 0"));
        f.push_back(real_field("dispersive.photons",
                               [](ExperimentConfig &c) -> double & { return c.dispersive.photons; }, positive, "> 0"));
        f.push_back(real_field("readout.technical_db",
                               [](ExperimentConfig &c) -> double & { return c.noise.technical_db; }, any,
                               "finite or -inf", 1.0, true));
        f.push_back({"readout.shot_noise",
                     [](ExperimentConfig &c, std::string_view v, int line) {
                         c.noise.include_shot_noise = to_bool("readout.shot_noise", v, line);
                     },
                     [](const ExperimentConfig &c) { return std::string(c.noise.include_shot_noise ? "true" : "false"); }});
        f.push_back({"readout.zeta_photons",
                     [](ExperimentConfig &c, std::string_view v, int line) {
                         if (v == "per_pulse") {
                             c.noise.zeta_photons = ZetaPhotons::per_pulse;
                         } else if (v == "per_pair") {
                             c.noise.zeta_photons = ZetaPhotons::per_pair;
                         } else {
                             throw ConfigError("readout.zeta_photons", line, "expected per_pulse or per_pair");
                         }
                     },
                     [](const ExperimentConfig &c) {
                         return std::string(c.noise.zeta_photons == ZetaPhotons::per_pair ? "per_pair" : "per_pulse");
                     }});
        f.push_back(real_field("decoherence.eta_sc",
                               [](ExperimentConfig &c) -> double & { return c.decoherence.eta_sc; }, unit_open,
                               "[0, 1)"));
        f.push_back(real_field("decoherence.eta_dep",
                               [](ExperimentConfig &c) -> double & { return c.decoherence.eta_dep; }, unit_open,
                               "[0, 1)"));
        f.push_back(real_field("decoherence.tau_c_us",
                               [](ExperimentConfig &c) -> double & { return c.decoherence.tau_c; }, positive, "> 0",
                               1e-6));
        f.push_back(real_field("field.delta_e_hz", [](ExperimentConfig &c) -> double & { return c.field.delta_e_hz; },
                               any, "finite"));
        f.push_back(real_field("ramsey.time_us",
                               [](ExperimentConfig &c) -> double & { return c.field.precession_time; }, positive,
                               "> 0", 1e-6));
        f.push_back(optional_field(
            "ramsey.noise_reduction_db",
            [](ExperimentConfig &c) -> std::optional<double> & { return c.ramsey.noise_reduction_db; }, any,
            "finite or none"));
        f.push_back(optional_field("ramsey.contrast",
                                   [](ExperimentConfig &c) -> std::optional<double> & { return c.ramsey.contrast; },
                                   unit_closed, "(0, 1] or none"));
        f.push_back(real_field("sweep.loss_factor",
                               [](ExperimentConfig &c) -> double & { return c.sweep.loss_factor; }, unit_closed,
                               "(0, 1]"));
        f.push_back({"sweep.steps",
                     [](ExperimentConfig &c, std::string_view v, int line) {
                         const int n = to_integer<int>("sweep.steps", v, line);
                         if (n < 1) {
                             throw ConfigError("sweep.steps", line, "out of range: >= 1");
                         }
                         c.sweep.steps = n;
                     },
                     [](const ExperimentConfig &c) { return std::to_string(c.sweep.steps); }});
        f.push_back({"sweep.readout_bin",
                     [](ExperimentConfig &c, std::string_view v, int line) {
                         c.sweep.readout_bin = to_bool("sweep.readout_bin", v, line);
                     },
                     [](const ExperimentConfig &c) { return std::string(c.sweep.readout_bin ? "true" : "false"); }});
        f.push_back(real_field("geometry.volume_cm3",
                               [](ExperimentConfig &c) -> double & { return c.geometry.volume_cm3; }, positive, "> 0"));
        f.push_back(real_field("geometry.g_factor",
                               [](ExperimentConfig &c) -> double & { return c.geometry.g_factor; }, positive, "> 0"));
        f.push_back({"mc.trials",
                     [](ExperimentConfig &c, std::string_view v, int line) {
                         c.mc.trials = to_integer<std::size_t>("mc.trials", v, line);
                     },
                     [](const ExperimentConfig &c) { return std::to_string(c.mc.trials); }});
        f.push_back({"mc.seed",
                     [](ExperimentConfig &c, std::string_view v, int line) {
                         c.mc.seed = to_integer<std::uint64_t>("mc.seed", v, line);
                     },
                     [](const ExperimentConfig &c) { return std::to_string(c.mc.seed); }});
        f.push_back({"mc.threads",
                     [](ExperimentConfig &c, std::string_view v, int line) {
                         const int n = to_integer<int>("mc.threads", v, line);
                         if (n < 0) {
                             throw ConfigError("mc.threads", line, "out of range: >= 0");
                         }
                         c.mc.threads = n;
                     },
                     [](const ExperimentConfig &c) { return std::to_string(c.mc.threads); }});
        return f;
    }();
    return table;
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto &f : fields()) {
        keys.push_back(f.key);
    }
    return keys;
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("", line_no, "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto &table = fields();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Field &f) { return f.key == key; });
        if (it == table.end()) {
            throw ConfigError(key, line_no, "unknown key");
        }
        if (!seen.insert(key).second) {
            throw ConfigError(key, line_no, "duplicate key");
        }
        if (value.empty()) {
            throw ConfigError(key, line_no, "missing value");
        }
        it->set(config, value, line_no);
    }
    try {
        config.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError("", 0, e.what());
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", 0, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_text(const ExperimentConfig &config) {
    std::string out;
    for (const auto &f : fields()) {
        out += f.key + " = " + f.get(config) + "\n";
    }
    return out;
}

}  // namespace spinsq
