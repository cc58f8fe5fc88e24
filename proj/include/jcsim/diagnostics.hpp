#pragma once

// Regime diagnostics: largest Lyapunov exponent, spectral peak counting and
// SU(1,1) boundary escape.

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "jcsim/integrator.hpp"
#include "jcsim/model.hpp"
#include "jcsim/observables.hpp"

namespace jcsim {

enum class Regime { Regular, Multifrequency, Chaotic };

inline const char* to_string(Regime r) {
    switch (r) {
    case Regime::Regular: return "Regular";
    case Regime::Multifrequency: return "Multifrequency";
    case Regime::Chaotic: return "Chaotic";
    }
    return "?";
}

struct SpectralPeak {
    double frequency; // angular
    double power;
};

struct LyapunovSettings {
    double renorm_interval = 1.0;
    double perturbation = 1e-8;
    double t_total = 2000.0;
};

struct LyapunovEstimate {
    double value = 0.0;
    /// True if either trajectory reached the disc boundary (or underflowed);
    /// `value` then averages only over the time actually integrated.
    bool truncated = false;
    double t_integrated = 0.0;
};

/// Two-trajectory (Benettin) estimate of the largest Lyapunov exponent.
/// The companion starts displaced by `perturbation` in Re zeta and is pulled
/// back to that distance every renorm_interval.
inline LyapunovEstimate lyapunov_max(const CsState& initial, const ModelParams& params, const IntegratorConfig& cfg,
                                     const LyapunovSettings& ls) {
    if (!(ls.perturbation > 0.0)) throw std::invalid_argument("perturbation must be positive");
    if (!(ls.renorm_interval > 0.0) || !(ls.t_total >= ls.renorm_interval))
        throw std::invalid_argument("need 0 < renorm_interval <= t_total");
    validate(params);

    IntegratorConfig run_cfg = cfg;
    run_cfg.t_end = ls.t_total;
    CsState displaced = initial;
    displaced.zeta += ls.perturbation;
    Propagator fiducial(params, run_cfg, initial);
    Propagator shadow(params, run_cfg, displaced);
    const double d0 = ls.perturbation;

    const auto intervals = static_cast<long>(std::floor(ls.t_total / ls.renorm_interval + 1e-9));
    double log_sum = 0.0;
    LyapunovEstimate est;
    for (long i = 1; i <= intervals; ++i) {
        const double target = initial.t + static_cast<double>(i) * ls.renorm_interval;
        const auto a = fiducial.advance_to(target);
        const auto b = shadow.advance_to(target);
        if (a != Propagator::Status::Ok || b != Propagator::Status::Ok) {
            est.truncated = true;
            break;
        }
        // separation measured in the fiducial's chart, where |w| <= 1
        const ChartPoint& f = fiducial.chart_point();
        ChartPoint s = shadow.chart_point().in_chart(f.north);
        const double d = std::sqrt(std::norm(s.alpha - f.alpha) + std::norm(s.w - f.w));
        log_sum += std::log(d / d0);
        const double scale = d0 / d;
        s.alpha = f.alpha + (s.alpha - f.alpha) * scale;
        s.w = f.w + (s.w - f.w) * scale;
        shadow.set_chart_point(s);
        est.t_integrated = target - initial.t;
    }
    est.value = est.t_integrated > 0.0 ? log_sum / est.t_integrated : 0.0;
    return est;
}

namespace detail {
// FFTW planning is not re-entrant.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace detail

/// Power spectrum of the mean-removed, Hann-windowed series. Frequencies are
/// angular (2 pi k / (N dt)); bin 0 is omitted.
inline std::vector<SpectralPeak> power_spectrum(const std::vector<double>& series, double dt) {
    const std::size_t n = series.size();
    if (n < 64) throw std::invalid_argument("power_spectrum needs at least 64 samples");
    if (!(dt > 0.0)) throw std::invalid_argument("power_spectrum needs dt > 0");

    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);

    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    // deviations at rounding level carry no spectral content
    double spread = 0.0;
    for (double v : series) spread = std::max(spread, std::abs(v - mean));
    const bool flat = spread <= 1e-13 * std::max(1.0, std::abs(mean));
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
        in[i] = flat ? 0.0 : (series[i] - mean) * w;
    }
    fftw_execute(plan);

    std::vector<SpectralPeak> spec;
    spec.reserve(n / 2);
    const double df = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
    for (std::size_t k = 1; k <= n / 2; ++k)
        spec.push_back({static_cast<double>(k) * df, out[k][0] * out[k][0] + out[k][1] * out[k][1]});

    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return spec;
}

/// Checks that sample times are uniform to a relative 1e-9 and returns dt.
inline double uniform_spacing(const std::vector<double>& t) {
    if (t.size() < 2) throw std::invalid_argument("need at least two samples");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(t[i])))
            throw std::invalid_argument("series is not uniformly sampled");
    return dt;
}

inline std::vector<SpectralPeak> power_spectrum(const std::vector<double>& t, const std::vector<double>& series) {
    if (t.size() != series.size()) throw std::invalid_argument("time and value lengths differ");
    return power_spectrum(series, uniform_spacing(t));
}

struct PeakCriteria {
    double relative_to_max = 0.05;   // of the largest local maximum
    double relative_to_median = 10.0; // times the median spectral floor
};

/// Local maxima of the spectrum passing both significance tests, sorted by
/// descending power.
inline std::vector<SpectralPeak> significant_peaks(const std::vector<SpectralPeak>& spectrum,
                                                   const PeakCriteria& crit = {}) {
    std::vector<SpectralPeak> local;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const double p = spectrum[i].power;
        const bool left = i == 0 || p > spectrum[i - 1].power;
        const bool right = i + 1 == spectrum.size() || p >= spectrum[i + 1].power;
        if (left && right && p > 0.0) local.push_back(spectrum[i]);
    }
    if (local.empty()) return {};
    std::vector<double> powers;
    powers.reserve(spectrum.size());
    for (const auto& s : spectrum) powers.push_back(s.power);
    std::nth_element(powers.begin(), powers.begin() + static_cast<long>(powers.size() / 2), powers.end());
    const double median = powers[powers.size() / 2];
    double top = 0.0;
    for (const auto& l : local) top = std::max(top, l.power);

    std::vector<SpectralPeak> out;
    for (const auto& l : local)
        if (l.power >= crit.relative_to_max * top && l.power >= crit.relative_to_median * median) out.push_back(l);
    std::sort(out.begin(), out.end(), [](const SpectralPeak& a, const SpectralPeak& b) { return a.power > b.power; });
    return out;
}

struct RegimeThresholds {
    double lyapunov_threshold = 0.01;
    double baseline_estimate = 0.0;
    int max_regular_peaks = 2;
    PeakCriteria peaks{};
};

/// lambda_thresh = max(0.01 omega, 3 |baseline|).
inline double lyapunov_threshold(double omega, double baseline_estimate) {
    return std::max(0.01 * omega, 3.0 * std::abs(baseline_estimate));
}

struct RegimeDiagnostics {
    double lyapunov_max = 0.0;
    bool lyapunov_truncated = false;
    std::vector<SpectralPeak> dominant_peaks;
    int peak_count = 0;
    Regime regime_label = Regime::Regular;
    std::optional<double> escape_time;
    RegimeThresholds thresholds;
};

inline Regime classify(int peak_count, double lyapunov, const RegimeThresholds& th) {
    if (lyapunov >= th.lyapunov_threshold) return Regime::Chaotic;
    return peak_count <= th.max_regular_peaks ? Regime::Regular : Regime::Multifrequency;
}

inline RegimeDiagnostics classify_regime(const std::vector<SpectralPeak>& spectrum, const LyapunovEstimate& lyap,
                                         const RegimeThresholds& th, std::optional<double> escape = std::nullopt) {
    RegimeDiagnostics d;
    d.thresholds = th;
    d.lyapunov_max = lyap.value;
    d.lyapunov_truncated = lyap.truncated;
    d.dominant_peaks = significant_peaks(spectrum, th.peaks);
    d.peak_count = static_cast<int>(d.dominant_peaks.size());
    d.regime_label = classify(d.peak_count, lyap.value, th);
    d.escape_time = escape;
    return d;
}

inline std::optional<double> escape_time(const Trajectory& traj) {
    if (traj.termination == Termination::BoundaryEscape) return traj.t_escape;
    return std::nullopt;
}

/// Copy of `params` with every coupling switched off: the integrable
/// baseline used to calibrate the chaos threshold.
inline ModelParams free_baseline(ModelParams params) {
    params.g = {};
    params.lambda_schedule = DriveSchedule::zero();
    return params;
}

/// Lyapunov settings scaled to the subsystem frequency: t_total = 2000 / omega,
/// renormalization every 1 / omega.
inline LyapunovSettings default_lyapunov_settings(const ModelParams& p) {
    LyapunovSettings ls;
    ls.t_total = 2000.0 / p.omega;
    ls.renorm_interval = 1.0 / p.omega;
    return ls;
}

struct DiagnosisResult {
    Trajectory trajectory;
    ObservableSeries series;
    RegimeDiagnostics diagnostics;
};

/// Full regime analysis of one configuration: integrates the trajectory,
/// counts spectral peaks of the down-state probability (vacuum overlap for
/// SU(1,1)), estimates the largest Lyapunov exponent and calibrates the chaos
/// threshold against the uncoupled flow from the same initial state.
inline DiagnosisResult diagnose(const CsState& initial, const ModelParams& params, const IntegratorConfig& cfg,
                                const LyapunovSettings& ls, const PeakCriteria& peaks = {}) {
    DiagnosisResult out;
    out.trajectory = integrate(initial, params, cfg);
    out.series = observable_series(out.trajectory, params);

    // the spectrum needs the uniform grid: drop an off-grid escape sample
    std::vector<double> t = out.series.t, y = out.series.p_down;
    if (out.trajectory.termination == Termination::BoundaryEscape && t.size() > 2) {
        t.pop_back();
        y.pop_back();
    }
    std::vector<SpectralPeak> spectrum;
    if (t.size() >= 64) spectrum = power_spectrum(t, y);

    const LyapunovEstimate lyap = lyapunov_max(initial, params, cfg, ls);
    const LyapunovEstimate baseline = lyapunov_max(initial, free_baseline(params), cfg, ls);

    RegimeThresholds th;
    th.baseline_estimate = baseline.value;
    th.lyapunov_threshold = lyapunov_threshold(params.omega, baseline.value);
    th.peaks = peaks;
    out.diagnostics = classify_regime(spectrum, lyap, th, escape_time(out.trajectory));
    return out;
}

} // namespace jcsim
