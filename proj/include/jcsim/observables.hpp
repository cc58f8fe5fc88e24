#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "jcsim/integrator.hpp"
#include "jcsim/model.hpp"

namespace jcsim {

/// Point on the unit sphere; theta = pi is the South Pole (zeta = 0).
struct BlochPoint {
    double theta = std::numbers::pi;
    double phi = 0.0;
};

/// Probability of the "down" state, (1 + |zeta|^2)^(-2j). The atomic
/// coherent state is built on the lowest-weight state, so zeta = 0 is down.
inline double p_down(cplx zeta, double spin_j) {
    const double u = std::norm(zeta);
    if (std::isinf(u)) return 0.0;
    return std::pow(1.0 + u, -2.0 * spin_j);
}

/// SU(1,1) analogue of p_down: overlap with the vacuum, (1 - |zeta|^2)^(2k).
inline double vacuum_overlap(cplx zeta, double bargmann_k) {
    const double u = std::norm(zeta);
    if (!(u < 1.0)) return 0.0;
    return std::pow(1.0 - u, 2.0 * bargmann_k);
}

/// Inverse stereographic projection of zeta = e^{i phi} cot(theta / 2).
inline BlochPoint bloch_map(cplx zeta) {
    const double r = std::abs(zeta);
    BlochPoint b;
    b.theta = 2.0 * std::atan2(1.0, r); // 2 arccot(r)
    if (r == 0.0) {
        b.phi = 0.0;
        return b;
    }
    double phi = std::arg(zeta);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
    b.phi = phi;
    return b;
}

inline cplx bloch_to_zeta(const BlochPoint& b) {
    return std::polar(1.0 / std::tan(0.5 * b.theta), b.phi);
}

inline double photon_number(cplx alpha) { return std::norm(alpha); }

struct ObservableSeries {
    std::vector<double> t;
    /// Down-state probability for SU(2); vacuum overlap for SU(1,1).
    std::vector<double> p_down;
    bool p_down_is_vacuum_overlap = false;
    std::vector<double> n_photons;
    std::vector<double> re_zeta, im_zeta, re_zeta_dot;
    std::vector<double> energy, excitation;
};

inline ObservableSeries observable_series(const Trajectory& traj, const ModelParams& params) {
    if (traj.samples.empty()) throw std::invalid_argument("observable_series needs a non-empty trajectory");
    ObservableSeries out;
    const std::size_t n = traj.samples.size();
    for (auto* v : {&out.t, &out.p_down, &out.n_photons, &out.re_zeta, &out.im_zeta, &out.re_zeta_dot, &out.energy,
                    &out.excitation})
        v->reserve(n);
    const bool su2 = params.group == GroupKind::Su2;
    out.p_down_is_vacuum_overlap = !su2;

    for (const CsState& s : traj.samples) {
        out.t.push_back(s.t);
        out.p_down.push_back(su2 ? p_down(s.zeta, params.spin_j) : vacuum_overlap(s.zeta, params.bargmann_k));
        out.n_photons.push_back(photon_number(s.alpha));
        out.re_zeta.push_back(s.zeta.real());
        out.im_zeta.push_back(s.zeta.imag());
        // the final sample of an escaping run may sit on the disc boundary
        const bool in_domain = su2 || std::norm(s.zeta) < 1.0;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        if (in_domain) {
            const cplx lam = lambda_at(params.lambda_schedule, s.t, params.g);
            out.re_zeta_dot.push_back(rhs(s, params, lam).d_zeta.real());
            out.energy.push_back(energy_symbol(s, params, lam));
            out.excitation.push_back(excitation_symbol(s, params));
        } else {
            out.re_zeta_dot.push_back(nan);
            out.energy.push_back(nan);
            out.excitation.push_back(nan);
        }
    }
    return out;
}

/// Energy and excitation drift over the in-domain samples of a run.
inline ConservedReport conserved_report(const ObservableSeries& series, const ModelParams& params) {
    if (series.energy.empty()) throw std::invalid_argument("conserved_report needs a non-empty series");
    ConservedReport r;
    r.excitation_is_conserved_regime = params.lambda_schedule.is_identically_zero();
    r.energy_initial = series.energy.front();
    r.excitation_initial = series.excitation.front();
    for (std::size_t i = 0; i < series.energy.size(); ++i) {
        if (!std::isfinite(series.energy[i])) continue;
        r.energy_final = series.energy[i];
        r.excitation_final = series.excitation[i];
        r.energy_max_drift = std::max(r.energy_max_drift, std::abs(series.energy[i] - r.energy_initial));
        r.excitation_max_drift =
            std::max(r.excitation_max_drift, std::abs(series.excitation[i] - r.excitation_initial));
    }
    return r;
}

inline ConservedReport conserved_report(const Trajectory& traj, const ModelParams& params) {
    return conserved_report(observable_series(traj, params), params);
}

} // namespace jcsim
