#pragma once

// One-parameter sweeps over a RunConfig, addressed by a dotted key path
// into the configuration document ("model.g", "model.lambda.amplitude").

#include <algorithm>
#include <atomic>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "jcsim/config.hpp"
#include "jcsim/diagnostics.hpp"
#include "jcsim/io.hpp"

namespace jcsim {

struct SweepRow {
    double value = 0.0;
    std::optional<double> lyapunov_max;
    bool lyapunov_truncated = false;
    std::optional<int> peak_count;
    std::optional<Regime> regime_label;
    std::optional<double> escape_time;
    std::string termination;
    std::string error;
};

/// Copy of `base` with the scalar at `path` replaced by `value`, re-validated.
/// Throws ConfigError if the path does not name a numeric entry.
inline RunConfig with_parameter(const RunConfig& base, const std::string& path, double value) {
    if (path.empty()) throw ConfigError(path, "empty parameter path");
    std::string pointer;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.')) {
        if (part.empty()) throw ConfigError(path, "malformed parameter path");
        pointer += "/" + part;
    }
    json doc = to_json(base);
    const json::json_pointer ptr(pointer);
    if (!doc.contains(ptr) || !doc[ptr].is_number()) throw ConfigError(path, "does not address a scalar parameter");
    if (doc[ptr].is_number_integer()) doc[ptr] = static_cast<long>(value);
    else doc[ptr] = value;
    return config_from_json(doc);
}

/// Parses "a:b:n" into n evenly spaced values from a to b inclusive.
inline std::vector<double> parse_range(const std::string& spec) {
    std::stringstream ss(spec);
    std::string a, b, n;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n, ':'))
        throw std::invalid_argument("range must look like a:b:n");
    const double lo = std::stod(a), hi = std::stod(b);
    const int count = std::stoi(n);
    if (count < 1) throw std::invalid_argument("range needs n >= 1");
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
}

/// Parses a comma-separated list of numbers.
inline std::vector<double> parse_values(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty value list");
    return out;
}

inline SweepRow sweep_point(const RunConfig& base, const std::string& path, double value) {
    SweepRow row;
    row.value = value;
    try {
        const RunConfig cfg = with_parameter(base, path, value);
        const DiagnosisResult r = diagnose(cfg.initial, cfg.model, cfg.integrator, cfg.outputs.lyapunov);
        row.lyapunov_max = r.diagnostics.lyapunov_max;
        row.lyapunov_truncated = r.diagnostics.lyapunov_truncated;
        row.peak_count = r.diagnostics.peak_count;
        row.regime_label = r.diagnostics.regime_label;
        row.escape_time = r.diagnostics.escape_time;
        row.termination = to_string(r.trajectory.termination);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

/// Diagnoses every grid point independently on up to `workers` threads;
/// rows come back in grid order. Per-point failures land in SweepRow::error.
inline std::vector<SweepRow> run_sweep(const RunConfig& base, const std::string& path, const std::vector<double>& values,
                                       unsigned workers = std::thread::hardware_concurrency()) {
    if (values.empty()) throw std::invalid_argument("sweep grid is empty");
    // reject a bad path up front rather than once per row
    with_parameter(base, path, values.front());

    std::vector<SweepRow> rows(values.size());
    workers = std::clamp(workers, 1u, static_cast<unsigned>(values.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) rows[i] = sweep_point(base, path, values[i]);
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::string& path, const std::vector<SweepRow>& rows) {
    os << path << ",lyapunov_max,lyapunov_truncated,peak_count,regime_label,escape_time,termination,error\n";
    for (const auto& r : rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        os << format_double(r.value) << ',' << (r.lyapunov_max ? format_double(*r.lyapunov_max) : "") << ','
           << (r.lyapunov_truncated ? "true" : "false") << ','
           << (r.peak_count ? std::to_string(*r.peak_count) : "") << ','
           << (r.regime_label ? to_string(*r.regime_label) : "") << ','
           << (r.escape_time ? format_double(*r.escape_time) : "") << ',' << r.termination << ',' << err << '\n';
    }
}

} // namespace jcsim
