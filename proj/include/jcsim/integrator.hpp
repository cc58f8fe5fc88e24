#pragma once

// Adaptive Dormand-Prince 5(4) integration of the coherent-state equations.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "jcsim/model.hpp"

namespace jcsim {

struct IntegratorConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 1e-3 * 2.0 * std::numbers::pi;
    double h_max = 0.1 * 2.0 * std::numbers::pi;
    double safety = 0.9;
    double sample_interval = 0.1;
    double t_end = 200.0;
    double boundary_eps = 1e-6;
    /// Accepted plus rejected steps allowed per run; unbounded solutions
    /// (runaway photon build-up) would otherwise shrink h forever.
    long max_steps = 2'000'000;

    /// Defaults scaled to the subsystem frequency: h_init = 1e-3 T,
    /// h_max = 0.1 T with T = 2 pi / omega, and t_end = 200 / omega.
    static IntegratorConfig for_model(const ModelParams& p) {
        IntegratorConfig c;
        const double period = 2.0 * std::numbers::pi / p.omega;
        c.h_init = 1e-3 * period;
        c.h_max = 0.1 * period;
        c.t_end = 200.0 / p.omega;
        return c;
    }

    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

inline void validate(const IntegratorConfig& c) {
    if (!(c.rtol > 0.0) || !(c.atol > 0.0)) throw std::invalid_argument("rtol and atol must be positive");
    if (!(c.h_init > 0.0) || !(c.h_init <= c.h_max)) throw std::invalid_argument("need 0 < h_init <= h_max");
    if (!(c.safety > 0.0 && c.safety < 1.0)) throw std::invalid_argument("safety must lie in (0, 1)");
    if (!(c.sample_interval > 0.0)) throw std::invalid_argument("sample_interval must be positive");
    if (!(c.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (!(c.boundary_eps > 0.0 && c.boundary_eps < 1.0)) throw std::invalid_argument("boundary_eps must lie in (0, 1)");
    if (c.max_steps < 1) throw std::invalid_argument("max_steps must be positive");
}

/// Tolerances used by the embedded error estimate.
struct ErrorScale {
    double rtol = 1e-10;
    double atol = 1e-12;
};

struct StepProposal {
    CsState proposed;
    double error_estimate = 0.0; // <= 1 means acceptable
};

namespace detail {

// Dormand & Prince (1980) RK5(4)7M coefficients.
struct Dp54Tableau {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    // fifth-order weights (also row 7 of the tableau)
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b_hat (fifth minus fourth order)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

inline double scaled_sq(double err, double y0, double y1, const ErrorScale& tol) {
    const double sc = tol.atol + tol.rtol * std::max(std::abs(y0), std::abs(y1));
    const double r = err / sc;
    return r * r;
}

} // namespace detail

/// One Dormand-Prince 5(4) step advancing with the fifth-order solution.
/// `f` maps a CsState (with its time) to a Derivative. The error estimate is
/// the RMS over the four real components of (y5 - y4) scaled by
/// atol + rtol max(|y|, |y_new|); it is +inf if any stage is non-finite.
template <class F>
StepProposal dp54_step(const CsState& s, double h, F&& f, const ErrorScale& tol = {}) {
    using T = detail::Dp54Tableau;
    if (!(h > 0.0)) throw std::invalid_argument("dp54_step needs h > 0");

    auto at = [&](double c, cplx da, cplx dz) { return CsState{s.alpha + h * da, s.zeta + h * dz, s.t + c * h}; };

    const Derivative k1 = f(s);
    const Derivative k2 = f(at(T::c2, T::a21 * k1.d_alpha, T::a21 * k1.d_zeta));
    const Derivative k3 = f(at(T::c3, T::a31 * k1.d_alpha + T::a32 * k2.d_alpha, T::a31 * k1.d_zeta + T::a32 * k2.d_zeta));
    const Derivative k4 = f(at(T::c4, T::a41 * k1.d_alpha + T::a42 * k2.d_alpha + T::a43 * k3.d_alpha,
                               T::a41 * k1.d_zeta + T::a42 * k2.d_zeta + T::a43 * k3.d_zeta));
    const Derivative k5 =
        f(at(T::c5, T::a51 * k1.d_alpha + T::a52 * k2.d_alpha + T::a53 * k3.d_alpha + T::a54 * k4.d_alpha,
             T::a51 * k1.d_zeta + T::a52 * k2.d_zeta + T::a53 * k3.d_zeta + T::a54 * k4.d_zeta));
    const Derivative k6 = f(at(1.0,
                               T::a61 * k1.d_alpha + T::a62 * k2.d_alpha + T::a63 * k3.d_alpha + T::a64 * k4.d_alpha +
                                   T::a65 * k5.d_alpha,
                               T::a61 * k1.d_zeta + T::a62 * k2.d_zeta + T::a63 * k3.d_zeta + T::a64 * k4.d_zeta +
                                   T::a65 * k5.d_zeta));

    StepProposal out;
    out.proposed.alpha = s.alpha + h * (T::b1 * k1.d_alpha + T::b3 * k3.d_alpha + T::b4 * k4.d_alpha +
                                        T::b5 * k5.d_alpha + T::b6 * k6.d_alpha);
    out.proposed.zeta = s.zeta + h * (T::b1 * k1.d_zeta + T::b3 * k3.d_zeta + T::b4 * k4.d_zeta + T::b5 * k5.d_zeta +
                                      T::b6 * k6.d_zeta);
    out.proposed.t = s.t + h;

    if (!is_finite(out.proposed.alpha) || !is_finite(out.proposed.zeta)) {
        out.error_estimate = std::numeric_limits<double>::infinity();
        return out;
    }
    const Derivative k7 = f(out.proposed);

    const cplx ea = h * (T::e1 * k1.d_alpha + T::e3 * k3.d_alpha + T::e4 * k4.d_alpha + T::e5 * k5.d_alpha +
                         T::e6 * k6.d_alpha + T::e7 * k7.d_alpha);
    const cplx ez = h * (T::e1 * k1.d_zeta + T::e3 * k3.d_zeta + T::e4 * k4.d_zeta + T::e5 * k5.d_zeta +
                         T::e6 * k6.d_zeta + T::e7 * k7.d_zeta);
    const double sum = detail::scaled_sq(ea.real(), s.alpha.real(), out.proposed.alpha.real(), tol) +
                       detail::scaled_sq(ea.imag(), s.alpha.imag(), out.proposed.alpha.imag(), tol) +
                       detail::scaled_sq(ez.real(), s.zeta.real(), out.proposed.zeta.real(), tol) +
                       detail::scaled_sq(ez.imag(), s.zeta.imag(), out.proposed.zeta.imag(), tol);
    out.error_estimate = std::sqrt(sum / 4.0);
    if (!std::isfinite(out.error_estimate)) out.error_estimate = std::numeric_limits<double>::infinity();
    return out;
}

struct StepAccepted {
    CsState new_state;
    double error_estimate;
    double next_h;
};
struct StepRejected {
    double suggested_h;
};
struct StepBoundaryHit {
    CsState state_at_hit;
};
using StepOutcome = std::variant<StepAccepted, StepRejected, StepBoundaryHit>;

enum class Termination { ReachedTEnd, BoundaryEscape, StepUnderflow, StepLimit };

inline const char* to_string(Termination t) {
    switch (t) {
    case Termination::ReachedTEnd: return "reached_t_end";
    case Termination::BoundaryEscape: return "boundary_escape";
    case Termination::StepUnderflow: return "step_underflow";
    case Termination::StepLimit: return "step_limit";
    }
    return "?";
}

struct Trajectory {
    std::vector<CsState> samples;
    Termination termination = Termination::ReachedTEnd;
    std::optional<double> t_escape;
    long accepted_steps = 0;
    long rejected_steps = 0;
};

namespace detail {

constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

inline double step_factor(double err, double safety) {
    if (err == 0.0) return kMaxFactor;
    if (!std::isfinite(err)) return kMinFactor;
    return std::clamp(safety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
}

inline bool near_boundary(const CsState& s, const ModelParams& p, double eps) {
    return p.group == GroupKind::Su11 && !(std::abs(s.zeta) < 1.0 - eps);
}

// Times in (t0, t1) where lambda(t) may jump; steps never straddle them.
inline std::vector<double> drive_breakpoints(const DriveSchedule& d, double t0, double t1) {
    std::vector<double> out;
    if (auto s = std::get_if<DriveSchedule::Step>(&d.kind)) {
        for (double b : {s->t_on, s->t_on + s->duration})
            if (b > t0 && b < t1) out.push_back(b);
    }
    return out;
}

} // namespace detail

/// Coordinates the integrator actually evolves. For SU(2) the subsystem
/// lives on the sphere and is carried in whichever stereographic chart keeps
/// |w| <= 1: w = zeta (south chart) or w = 1 / zeta (north chart).
struct ChartPoint {
    cplx alpha{};
    cplx w{};
    bool north = false;
    double t = 0.0;

    static ChartPoint from_state(const CsState& s, GroupKind group) {
        if (group == GroupKind::Su2 && std::norm(s.zeta) > 1.0) return {s.alpha, 1.0 / s.zeta, true, s.t};
        return {s.alpha, s.zeta, false, s.t};
    }
    CsState to_state() const { return {alpha, north ? 1.0 / w : w, t}; }

    /// Same point expressed in the requested chart.
    ChartPoint in_chart(bool want_north) const {
        if (want_north == north) return *this;
        return {alpha, 1.0 / w, want_north, t};
    }
};

/// Attempts one step of size h. lambda is held at its value at the step
/// midpoint, which is exact because steps never straddle drive breakpoints.
inline StepOutcome attempt_step(const ChartPoint& cp, double h, const ModelParams& p, const IntegratorConfig& cfg) {
    const cplx lam = lambda_at(p.lambda_schedule, cp.t + 0.5 * h, p.g);
    const CsState s{cp.alpha, cp.w, cp.t};
    StepProposal prop;
    try {
        const ErrorScale tol{cfg.rtol, cfg.atol};
        if (cp.north)
            prop = dp54_step(s, h, [&](const CsState& x) { return rhs_su2_north(x, p, lam); }, tol);
        else
            prop = dp54_step(s, h, [&](const CsState& x) { return rhs(x, p, lam); }, tol);
    } catch (const DomainError&) {
        // a stage left the disc: retry smaller
        return StepRejected{h * detail::kMinFactor};
    }
    const double factor = detail::step_factor(prop.error_estimate, cfg.safety);
    if (!(prop.error_estimate <= 1.0)) return StepRejected{h * factor};
    if (detail::near_boundary(prop.proposed, p, cfg.boundary_eps)) return StepBoundaryHit{prop.proposed};
    return StepAccepted{prop.proposed, prop.error_estimate, std::min(h * factor, cfg.h_max)};
}

inline StepOutcome attempt_step(const CsState& s, double h, const ModelParams& p, const IntegratorConfig& cfg) {
    const ChartPoint cp{s.alpha, s.zeta, false, s.t};
    return attempt_step(cp, h, p, cfg);
}

/// Step-controlled propagation of one state. Keeps its step size and chart
/// between calls so repeated advance_to() calls behave like one run.
class Propagator {
public:
    Propagator(const ModelParams& params, const IntegratorConfig& cfg, const CsState& initial)
        : params_(params), cfg_(cfg), h_(cfg.h_init), point_(ChartPoint::from_state(initial, params.group)) {}

    enum class Status { Ok, BoundaryHit, Underflow, StepLimit };

    /// Advances to exactly t_target. On BoundaryHit the current state is the
    /// first accepted one with |zeta| >= 1 - boundary_eps.
    Status advance_to(double t_target) {
        const double h_min = 1e-14 * cfg_.t_end;
        auto breaks = detail::drive_breakpoints(params_.lambda_schedule, point_.t, t_target);
        breaks.push_back(t_target);
        std::size_t next_break = 0;
        while (point_.t < t_target) {
            if (accepted_ + rejected_ >= cfg_.max_steps) return Status::StepLimit;
            while (breaks[next_break] <= point_.t) ++next_break;
            const double stop = breaks[next_break];
            double h = std::min(h_, cfg_.h_max);
            bool lands = false;
            if (point_.t + h >= stop || stop - (point_.t + h) < 1e-12 * std::max(1.0, std::abs(stop))) {
                h = stop - point_.t;
                lands = true;
            }
            const StepOutcome out = attempt_step(point_, h, params_, cfg_);
            if (auto a = std::get_if<StepAccepted>(&out)) {
                ++accepted_;
                take(a->new_state, lands ? stop : a->new_state.t);
                // a truncated landing step must not shrink the running step size
                if (!lands || a->next_h > h_) h_ = a->next_h;
            } else if (auto r = std::get_if<StepRejected>(&out)) {
                ++rejected_;
                h_ = r->suggested_h;
                if (h_ < h_min) return Status::Underflow;
            } else {
                ++accepted_;
                const CsState& hit = std::get<StepBoundaryHit>(out).state_at_hit;
                take(hit, lands ? stop : hit.t);
                return Status::BoundaryHit;
            }
        }
        return Status::Ok;
    }

    CsState state() const { return point_.to_state(); }
    const ChartPoint& chart_point() const { return point_; }
    void set_chart_point(const ChartPoint& cp) { point_ = cp; }

    long accepted() const { return accepted_; }
    long rejected() const { return rejected_; }

private:
    void take(const CsState& chart_state, double t) {
        point_.alpha = chart_state.alpha;
        point_.w = chart_state.zeta;
        point_.t = t;
        if (params_.group == GroupKind::Su2 && std::norm(point_.w) > 1.0) {
            point_.w = 1.0 / point_.w;
            point_.north = !point_.north;
        }
    }

    ModelParams params_;
    IntegratorConfig cfg_;
    double h_;
    ChartPoint point_;
    long accepted_ = 0;
    long rejected_ = 0;
};

/// Integrates from `initial` to cfg.t_end, sampling every sample_interval by
/// stepping exactly onto the sample grid t0 + k * sample_interval.
inline Trajectory integrate(const CsState& initial, const ModelParams& params, const IntegratorConfig& cfg) {
    validate(params);
    validate(cfg);
    detail::require_finite(initial);
    if (params.group == GroupKind::Su11) detail::require_in_disc(initial.zeta);

    Trajectory traj;
    traj.samples.push_back(initial);
    if (detail::near_boundary(initial, params, cfg.boundary_eps)) {
        traj.termination = Termination::BoundaryEscape;
        traj.t_escape = initial.t;
        return traj;
    }

    Propagator prop(params, cfg, initial);
    const double t0 = initial.t;
    const double t_end = t0 + cfg.t_end;
    for (long k = 1;; ++k) {
        const double target = std::min(t0 + static_cast<double>(k) * cfg.sample_interval, t_end);
        const auto status = prop.advance_to(target);
        if (status == Propagator::Status::BoundaryHit) {
            traj.samples.push_back(prop.state());
            traj.termination = Termination::BoundaryEscape;
            traj.t_escape = prop.state().t;
            break;
        }
        if (status == Propagator::Status::Underflow) {
            traj.termination = Termination::StepUnderflow;
            break;
        }
        if (status == Propagator::Status::StepLimit) {
            traj.termination = Termination::StepLimit;
            break;
        }
        traj.samples.push_back(prop.state());
        if (target >= t_end) break;
    }
    traj.accepted_steps = prop.accepted();
    traj.rejected_steps = prop.rejected();
    return traj;
}

} // namespace jcsim
