#pragma once

// Flat-file artifacts: trajectory CSV (schema jcsim.trajectory/1) and the
// diagnostics JSON object.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcsim/config.hpp"
#include "jcsim/diagnostics.hpp"
#include "jcsim/observables.hpp"

namespace jcsim {

inline constexpr const char* kTrajectoryCsvSchema = "jcsim.trajectory/1";
inline constexpr const char* kDiagnosticsSchema = "jcsim.diagnostics/1";
inline constexpr const char* kTrajectoryCsvHeader =
    "t,re_alpha,im_alpha,re_zeta,im_zeta,p_down,n_photons,energy,excitation";

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const ObservableSeries& s) {
    os << kTrajectoryCsvHeader << '\n';
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        const CsState& st = traj.samples[i];
        os << format_double(s.t[i]) << ',' << format_double(st.alpha.real()) << ','
           << format_double(st.alpha.imag()) << ',' << format_double(st.zeta.real()) << ','
           << format_double(st.zeta.imag()) << ',' << format_double(s.p_down[i]) << ','
           << format_double(s.n_photons[i]) << ',' << format_double(s.energy[i]) << ','
           << format_double(s.excitation[i]) << '\n';
    }
}

/// Column-oriented numeric table read back from a CSV artifact.
struct Table {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    bool has(const std::string& name) const {
        for (const auto& n : names)
            if (n == name) return true;
        return false;
    }
    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return columns[i];
        throw std::invalid_argument("unknown column '" + name + "'");
    }
    void add(std::string name, std::vector<double> values) {
        names.push_back(std::move(name));
        columns.push_back(std::move(values));
    }
    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

inline double parse_cell(const std::string& cell, std::size_t line) {
    if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (cell == "inf") return std::numeric_limits<double>::infinity();
    if (cell == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw std::runtime_error("line " + std::to_string(line) + ": not a number: '" + cell + "'");
    return v;
}

inline Table read_csv(std::istream& is) {
    Table table;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty CSV document");
    {
        std::stringstream ss(line);
        std::string name;
        while (std::getline(ss, name, ',')) table.add(name, {});
    }
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col >= table.names.size()) throw std::runtime_error("line " + std::to_string(lineno) + ": too many cells");
            table.columns[col++].push_back(parse_cell(cell, lineno));
        }
        if (col != table.names.size()) throw std::runtime_error("line " + std::to_string(lineno) + ": too few cells");
    }
    return table;
}

/// Table view of an observable series, including the RHS-derived Re zeta'.
inline Table to_table(const Trajectory& traj, const ObservableSeries& s) {
    Table t;
    std::vector<double> re_a, im_a;
    for (const auto& st : traj.samples) {
        re_a.push_back(st.alpha.real());
        im_a.push_back(st.alpha.imag());
    }
    t.add("t", s.t);
    t.add("re_alpha", re_a);
    t.add("im_alpha", im_a);
    t.add("re_zeta", s.re_zeta);
    t.add("im_zeta", s.im_zeta);
    t.add("p_down", s.p_down);
    t.add("n_photons", s.n_photons);
    t.add("energy", s.energy);
    t.add("excitation", s.excitation);
    t.add("re_zeta_dot", s.re_zeta_dot);
    return t;
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// Diagnostics object: resolved configuration, termination, conservation
/// drifts, spectral peaks, Lyapunov estimates and every threshold used.
inline json diagnostics_json(const RunConfig& cfg, const DiagnosisResult& r) {
    const auto& d = r.diagnostics;
    const ConservedReport cons = conserved_report(r.series, cfg.model);
    json peaks = json::array();
    for (const auto& p : d.dominant_peaks) peaks.push_back({{"frequency", p.frequency}, {"power", p.power}});
    json out;
    out["schema"] = kDiagnosticsSchema;
    out["trajectory_csv_schema"] = kTrajectoryCsvSchema;
    out["config"] = to_json(cfg);
    out["termination"] = to_string(r.trajectory.termination);
    out["escape_time"] = optional_number(d.escape_time);
    out["escape_omega_t"] = d.escape_time ? json(*d.escape_time * cfg.model.omega) : json(nullptr);
    out["samples"] = r.trajectory.samples.size();
    out["accepted_steps"] = r.trajectory.accepted_steps;
    out["rejected_steps"] = r.trajectory.rejected_steps;
    out["probability_series"] = r.series.p_down_is_vacuum_overlap ? "vacuum_overlap" : "p_down";
    out["conservation"] = {{"energy_initial", number_or_null(cons.energy_initial)},
                           {"energy_final", number_or_null(cons.energy_final)},
                           {"energy_max_drift", number_or_null(cons.energy_max_drift)},
                           {"excitation_initial", number_or_null(cons.excitation_initial)},
                           {"excitation_final", number_or_null(cons.excitation_final)},
                           {"excitation_max_drift", number_or_null(cons.excitation_max_drift)},
                           {"excitation_is_conserved_regime", cons.excitation_is_conserved_regime}};
    out["lyapunov_max"] = d.lyapunov_max;
    out["lyapunov_truncated"] = d.lyapunov_truncated;
    out["dominant_peaks"] = peaks;
    out["peak_count"] = d.peak_count;
    out["regime_label"] = to_string(d.regime_label);
    out["thresholds"] = {{"lyapunov_threshold", d.thresholds.lyapunov_threshold},
                         {"baseline_lyapunov", d.thresholds.baseline_estimate},
                         {"max_regular_peaks", d.thresholds.max_regular_peaks},
                         {"peak_relative_to_max", d.thresholds.peaks.relative_to_max},
                         {"peak_relative_to_median", d.thresholds.peaks.relative_to_median}};
    return out;
}

} // namespace jcsim
