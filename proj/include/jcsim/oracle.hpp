#pragma once

// Reference computations kept independent of the adaptive integrator: a
// fixed-step classical Runge-Kutta loop and the closed-form RWA Rabi formula.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "jcsim/integrator.hpp"
#include "jcsim/model.hpp"

namespace jcsim::oracle {

/// Default oracle step, 1e-4 of the subsystem period.
inline double default_dt(const ModelParams& p) { return 1e-4 * 2.0 * std::numbers::pi / p.omega; }

/// Classical RK4 with constant step dt from initial.t to initial.t + t_end.
/// The step is shortened only to land on drive switching times and on the
/// final time; lambda is frozen at each step's midpoint. Every step is
/// recorded. A state leaving the disc ends the run with BoundaryEscape.
inline Trajectory reference_integrate(const CsState& initial, const ModelParams& params, double dt, double t_end) {
    if (!(dt > 0.0)) throw std::invalid_argument("oracle needs dt > 0");
    if (!(t_end > 0.0)) throw std::invalid_argument("oracle needs t_end > 0");
    validate(params);

    std::vector<double> stops;
    if (auto st = std::get_if<DriveSchedule::Step>(&params.lambda_schedule.kind)) {
        stops.push_back(st->t_on);
        stops.push_back(st->t_on + st->duration);
    }
    const double t_final = initial.t + t_end;
    stops.push_back(t_final);
    std::sort(stops.begin(), stops.end());

    Trajectory traj;
    traj.samples.push_back(initial);
    CsState y = initial;

    auto in_domain = [&](const CsState& s) {
        return is_finite(s.alpha) && is_finite(s.zeta) &&
               (params.group == GroupKind::Su2 || std::norm(s.zeta) < 1.0);
    };

    long k = 0;
    while (y.t < t_final) {
        double stop = t_final;
        for (double s : stops)
            if (s > y.t) {
                stop = s;
                break;
            }
        double h = dt;
        if (y.t + h > stop - 1e-12 * std::max(1.0, std::abs(stop))) h = stop - y.t;
        const cplx lam = lambda_at(params.lambda_schedule, y.t + 0.5 * h, params.g);

        try {
            const Derivative k1 = rhs(y, params, lam);
            const Derivative k2 =
                rhs(CsState{y.alpha + 0.5 * h * k1.d_alpha, y.zeta + 0.5 * h * k1.d_zeta, y.t + 0.5 * h}, params, lam);
            const Derivative k3 =
                rhs(CsState{y.alpha + 0.5 * h * k2.d_alpha, y.zeta + 0.5 * h * k2.d_zeta, y.t + 0.5 * h}, params, lam);
            const Derivative k4 = rhs(CsState{y.alpha + h * k3.d_alpha, y.zeta + h * k3.d_zeta, y.t + h}, params, lam);
            CsState next;
            next.alpha = y.alpha + h / 6.0 * (k1.d_alpha + 2.0 * k2.d_alpha + 2.0 * k3.d_alpha + k4.d_alpha);
            next.zeta = y.zeta + h / 6.0 * (k1.d_zeta + 2.0 * k2.d_zeta + 2.0 * k3.d_zeta + k4.d_zeta);
            next.t = (h == stop - y.t) ? stop : y.t + h;
            if (!in_domain(next)) throw DomainError("oracle left the domain");
            y = next;
        } catch (const DomainError&) {
            traj.termination = Termination::BoundaryEscape;
            traj.t_escape = y.t;
            traj.accepted_steps = k;
            return traj;
        }
        ++k;
        traj.samples.push_back(y);
    }
    traj.accepted_steps = k;
    return traj;
}

/// Parameters of the fixed-photon-number RWA Rabi formula.
struct RabiParams {
    double q = 0.0;
    int n = 0;
    double nu = 1.0;
    double omega = 1.0;
    double t0 = 0.0;
};

inline double rabi_amplitude(const RabiParams& p) {
    const double detuning = p.nu - p.omega;
    const double coupling = p.q * p.q * (p.n + 1);
    const double denom = detuning * detuning + coupling;
    return denom == 0.0 ? 0.0 : coupling / denom;
}

inline double rabi_frequency(const RabiParams& p) {
    const double detuning = p.nu - p.omega;
    return std::sqrt(detuning * detuning + p.q * p.q * (p.n + 1));
}

/// Up-down transition probability for a fixed initial photon number n.
inline double rabi_probability(const RabiParams& p, double t) {
    if (p.n < 0) throw std::invalid_argument("photon number must be non-negative");
    if (t < p.t0) throw std::invalid_argument("t must not precede t0");
    const double s = std::sin(rabi_frequency(p) * (t - p.t0) / 2.0);
    return rabi_amplitude(p) * s * s;
}

} // namespace jcsim::oracle
