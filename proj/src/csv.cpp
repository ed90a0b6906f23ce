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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spinsq/cli.hpp"

namespace spinsq {

namespace {

std::string join(const std::vector<std::string> &cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            out += ',';
        }
        out += cells[i];
    }
    return out + "\n";
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) {
            return out;
        }
        start = comma + 1;
    }
}

double parse_number(std::string_view cell, std::size_t line) {
    if (cell.empty()) {
        return kMissing;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw std::runtime_error("trials csv line " + std::to_string(line) + ": bad number '" + std::string(cell) + "'");
    }
    return v;
}

std::uint64_t parse_id(std::string_view cell, std::size_t line) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw std::runtime_error("trials csv line " + std::to_string(line) + ": bad integer '" + std::string(cell) + "'");
    }
    return v;
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

std::string opt(const std::optional<double> &v) { return v ? format_number(*v) : std::string(); }
std::string opt_value(const std::optional<Estimate> &e) { return e ? format_number(e->value) : std::string(); }
std::string opt_error(const std::optional<Estimate> &e) { return e ? format_number(e->error) : std::string(); }

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) {
        return {};
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trials_csv(std::span<const TrialRecord> records) {
    std::string out = join(kTrialColumns);
    for (const auto &r : records) {
        out += join({std::to_string(r.trial_id), format_number(r.tx_in), format_number(r.phi1), format_number(r.phi2),
                     format_number(r.phi_aoc), format_number(r.tx_out), std::to_string(r.seed_stream_id)});
    }
    return out;
}

void write_trials_csv(std::span<const TrialRecord> records, const std::filesystem::path &path) {
    write_file(path, trials_csv(records));
}

std::vector<TrialRecord> parse_trials_csv(std::string_view text) {
    std::vector<TrialRecord> out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line_no == 1) {
            if (std::string(line) + "\n" != join(kTrialColumns)) {
                throw std::runtime_error("trials csv: unexpected header '" + std::string(line) + "'");
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != kTrialColumns.size()) {
            throw std::runtime_error("trials csv line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(kTrialColumns.size()) + " fields");
        }
        TrialRecord r;
        r.trial_id = parse_id(cells[0], line_no);
        r.tx_in = parse_number(cells[1], line_no);
        r.phi1 = parse_number(cells[2], line_no);
        r.phi2 = parse_number(cells[3], line_no);
        r.phi_aoc = parse_number(cells[4], line_no);
        r.tx_out = parse_number(cells[5], line_no);
        r.seed_stream_id = parse_id(cells[6], line_no);
        out.push_back(r);
    }
    if (line_no == 0) {
        throw std::runtime_error("trials csv: missing header");
    }
    return out;
}

std::vector<TrialRecord> read_trials_csv(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trials_csv(buf.str());
}

std::string summary_csv(const RunSummary &summary) {
    std::string out = join(kSummaryColumns);
    for (const auto &b : summary.bins) {
        out += join({format_number(b.tx), opt_value(b.var_phi1), opt_error(b.var_phi1), opt_value(b.var_phi2),
                     opt_error(b.var_phi2), opt(b.chi), opt_value(b.var_cond), opt_error(b.var_cond), opt(b.xi2_m),
                     opt_value(b.sens_css), opt_value(b.sens_sq), "bin"});
    }
    if (summary.readout) {
        out += join({"0", format_number(summary.readout->value), format_number(summary.readout->error), "", "", "", "",
                     "", "", "", "", "readout"});
    }
    if (summary.fit_phi1 && summary.fit_phi2) {
        const auto &f1 = *summary.fit_phi1;
        const auto &f2 = *summary.fit_phi2;
        out += join({"1", format_number(f1.a1), format_number(f1.a1_err), format_number(f2.a1), format_number(f2.a1_err),
                     "", "", "", "", "", "", "fit"});
        out += join({"2", format_number(f1.a2), format_number(f1.a2_err), format_number(f2.a2), format_number(f2.a2_err),
                     "", "", "", "", "", "", "fit"});
    }
    return out;
}

void write_summary_csv(const RunSummary &summary, const std::filesystem::path &path) {
    write_file(path, summary_csv(summary));
}

}  // namespace spinsq
