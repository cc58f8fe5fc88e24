#pragma once

// Semiclassical coherent-state equations of motion for the Jaynes-Cummings
// family: a Glauber field amplitude alpha coupled to an SU(2) spin or an
// SU(1,1) "hyperbolic" subsystem parameterized by zeta.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

namespace jcsim {

using cplx = std::complex<double>;

/// Thrown when a state leaves the domain of the equations (non-finite
/// components, or |zeta| >= 1 for the hyperbolic model).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class GroupKind { Su2, Su11 };

inline const char* to_string(GroupKind g) { return g == GroupKind::Su2 ? "su2" : "su11"; }

/// Time profile of the antiresonant / parametric coupling lambda(t).
struct DriveSchedule {
    struct ConstantZero {};
    struct ConstantEqualG {};
    struct Constant {
        cplx value;
    };
    /// lambda = amplitude on [t_on, t_on + duration), zero elsewhere.
    struct Step {
        cplx amplitude;
        double t_on;
        double duration;
    };

    std::variant<ConstantZero, ConstantEqualG, Constant, Step> kind{ConstantZero{}};

    static DriveSchedule zero() { return {ConstantZero{}}; }
    static DriveSchedule equal_g() { return {ConstantEqualG{}}; }
    static DriveSchedule constant(cplx v) { return {Constant{v}}; }
    static DriveSchedule step(cplx amplitude, double t_on, double duration) {
        if (!(duration > 0.0) || !(t_on >= 0.0))
            throw std::invalid_argument("step drive needs duration > 0 and t_on >= 0");
        return {Step{amplitude, t_on, duration}};
    }

    bool is_constant() const { return !std::holds_alternative<Step>(kind); }
    bool is_identically_zero() const {
        if (std::holds_alternative<ConstantZero>(kind)) return true;
        if (auto c = std::get_if<Constant>(&kind)) return c->value == cplx{};
        if (auto s = std::get_if<Step>(&kind)) return s->amplitude == cplx{};
        return false;
    }

    friend bool operator==(const DriveSchedule& a, const DriveSchedule& b) {
        if (a.kind.index() != b.kind.index()) return false;
        if (auto c = std::get_if<Constant>(&a.kind)) return c->value == std::get<Constant>(b.kind).value;
        if (auto s = std::get_if<Step>(&a.kind)) {
            const auto& o = std::get<Step>(b.kind);
            return s->amplitude == o.amplitude && s->t_on == o.t_on && s->duration == o.duration;
        }
        return true;
    }
};

struct ModelParams {
    GroupKind group = GroupKind::Su2;
    double spin_j = 0.5;      // Su2 only
    double bargmann_k = 0.25; // Su11 only
    int m = 1;                // photon multiplicity
    double nu = 1.0;
    double omega = 1.0;
    cplx g{0.0, 0.0};
    DriveSchedule lambda_schedule{};

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Throws std::invalid_argument describing the first violated invariant.
inline void validate(const ModelParams& p) {
    if (!(p.nu > 0.0) || !std::isfinite(p.nu)) throw std::invalid_argument("nu must be positive");
    if (!(p.omega > 0.0) || !std::isfinite(p.omega)) throw std::invalid_argument("omega must be positive");
    if (p.m < 1) throw std::invalid_argument("m must be >= 1");
    if (!std::isfinite(p.g.real()) || !std::isfinite(p.g.imag())) throw std::invalid_argument("g must be finite");
    if (p.group == GroupKind::Su2) {
        const double twice = 2.0 * p.spin_j;
        if (!(p.spin_j >= 0.5) || twice != std::round(twice))
            throw std::invalid_argument("spin_j must be a half-integer >= 1/2");
    } else {
        if (!(p.bargmann_k > 0.0) || !std::isfinite(p.bargmann_k))
            throw std::invalid_argument("bargmann_k must be positive");
    }
}

/// Point of the factorized coherent state |alpha> x |zeta> at time t.
struct CsState {
    cplx alpha{};
    cplx zeta{};
    double t = 0.0;

    friend bool operator==(const CsState&, const CsState&) = default;
};

/// Drift of the two conserved symbols over a run; drifts are
/// max over samples of |Q(t) - Q(0)|.
struct ConservedReport {
    double energy_initial = 0.0, energy_final = 0.0, energy_max_drift = 0.0;
    double excitation_initial = 0.0, excitation_final = 0.0, excitation_max_drift = 0.0;
    /// True iff lambda vanishes identically over the run.
    bool excitation_is_conserved_regime = false;

    double energy_relative_drift() const {
        return energy_max_drift / std::max(std::abs(energy_initial), std::numeric_limits<double>::min());
    }
    double excitation_relative_drift() const {
        return excitation_max_drift / std::max(std::abs(excitation_initial), std::numeric_limits<double>::min());
    }
};

/// Time derivatives of the evolved pair (alpha, zeta).
struct Derivative {
    cplx d_alpha{};
    cplx d_zeta{};
};

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline cplx lambda_at(const DriveSchedule& schedule, double t, cplx g) {
    struct Visitor {
        double t;
        cplx g;
        cplx operator()(const DriveSchedule::ConstantZero&) const { return {}; }
        cplx operator()(const DriveSchedule::ConstantEqualG&) const { return g; }
        cplx operator()(const DriveSchedule::Constant& c) const { return c.value; }
        cplx operator()(const DriveSchedule::Step& s) const {
            return (t >= s.t_on && t < s.t_on + s.duration) ? s.amplitude : cplx{};
        }
    };
    return std::visit(Visitor{t, g}, schedule.kind);
}

namespace detail {

inline cplx ipow(cplx z, int n) {
    cplx r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

inline void require_finite(const CsState& s) {
    if (!is_finite(s.alpha) || !is_finite(s.zeta)) throw DomainError("non-finite coherent-state parameter");
}

inline void require_in_disc(cplx zeta) {
    if (!(std::norm(zeta) < 1.0)) throw DomainError("zeta left the open unit disc (|zeta| >= 1)");
}

} // namespace detail

/// SU(2) equations of motion, solved for (alpha', zeta').
inline Derivative rhs_su2(const CsState& s, const ModelParams& p, cplx lambda_now) {
    detail::require_finite(s);
    const cplx I{0.0, 1.0};
    const cplx ac = std::conj(s.alpha);
    const cplx ac_m1 = detail::ipow(ac, p.m - 1);
    const cplx ac_m = ac_m1 * ac;
    const cplx a_m = detail::ipow(s.alpha, p.m);
    const cplx z = s.zeta;
    const double denom = 1.0 + std::norm(z);
    const double w = 2.0 * p.spin_j * p.m;

    Derivative d;
    d.d_alpha = -I * p.nu * s.alpha - I * w * ac_m1 * (p.g * z + lambda_now * std::conj(z)) / denom;
    d.d_zeta = -I * p.omega * z - I * std::conj(p.g) * a_m - I * lambda_now * ac_m +
               I * p.g * ac_m * z * z + I * std::conj(lambda_now) * a_m * z * z;
    return d;
}

/// SU(2) equations in the north-pole chart xi = 1/zeta. Here `s.zeta`
/// carries xi. Used by the integrator when |zeta| > 1 so that passages near
/// the North Pole (zeta -> infinity) stay regular.
inline Derivative rhs_su2_north(const CsState& s, const ModelParams& p, cplx lambda_now) {
    detail::require_finite(s);
    const cplx I{0.0, 1.0};
    const cplx ac = std::conj(s.alpha);
    const cplx ac_m1 = detail::ipow(ac, p.m - 1);
    const cplx ac_m = ac_m1 * ac;
    const cplx a_m = detail::ipow(s.alpha, p.m);
    const cplx xi = s.zeta;
    const double denom = 1.0 + std::norm(xi);
    const double w = 2.0 * p.spin_j * p.m;

    Derivative d;
    d.d_alpha = -I * p.nu * s.alpha - I * w * ac_m1 * (p.g * std::conj(xi) + lambda_now * xi) / denom;
    d.d_zeta = -I * (p.g * ac_m + std::conj(lambda_now) * a_m) + I * p.omega * xi +
               I * (std::conj(p.g) * a_m + lambda_now * ac_m) * xi * xi;
    return d;
}

/// SU(1,1) equations of motion on the open unit disc.
inline Derivative rhs_su11(const CsState& s, const ModelParams& p, cplx lambda_now) {
    detail::require_finite(s);
    detail::require_in_disc(s.zeta);
    const cplx I{0.0, 1.0};
    const cplx ac = std::conj(s.alpha);
    const cplx ac_m1 = detail::ipow(ac, p.m - 1);
    const cplx ac_m = ac_m1 * ac;
    const cplx a_m = detail::ipow(s.alpha, p.m);
    const cplx z = s.zeta;
    const double denom = 1.0 - std::norm(z);
    const double w = 2.0 * p.bargmann_k * p.m;

    Derivative d;
    d.d_alpha = -I * p.nu * s.alpha - I * w * ac_m1 * (p.g * z + lambda_now * std::conj(z)) / denom;
    d.d_zeta = -I * p.omega * z - I * std::conj(p.g) * a_m - I * lambda_now * ac_m -
               I * p.g * ac_m * z * z - I * std::conj(lambda_now) * a_m * z * z;
    return d;
}

inline Derivative rhs(const CsState& s, const ModelParams& p, cplx lambda_now) {
    return p.group == GroupKind::Su2 ? rhs_su2(s, p, lambda_now) : rhs_su11(s, p, lambda_now);
}

/// Right-hand side with lambda taken from the schedule at s.t.
inline Derivative rhs(const CsState& s, const ModelParams& p) {
    return rhs(s, p, lambda_at(p.lambda_schedule, s.t, p.g));
}

/// Covariant symbol h(alpha, zeta) of the Hamiltonian. Its Kaehler flow
/// (flat on alpha, metric (1 +- |zeta|^2)^2 / (2j or 2k) on zeta) is exactly
/// rhs_su2 / rhs_su11, so h is conserved whenever lambda is constant.
inline double energy_symbol(const CsState& s, const ModelParams& p, cplx lambda_now) {
    detail::require_finite(s);
    const double u = std::norm(s.zeta);
    const cplx ac_m = detail::ipow(std::conj(s.alpha), p.m);
    // g (a*)^m zeta + lambda-bar a^m zeta + c.c.
    const double coupling = 2.0 * std::real((p.g * ac_m + std::conj(lambda_now * ac_m)) * s.zeta);
    const double field = p.nu * (std::norm(s.alpha) + 0.5);
    if (p.group == GroupKind::Su2) {
        const double j = p.spin_j;
        return field + p.omega * j * (u - 1.0) / (1.0 + u) + 2.0 * j * coupling / (1.0 + u);
    }
    detail::require_in_disc(s.zeta);
    const double k = p.bargmann_k;
    // omega (<K0> + k) = 2 omega k / (1 - |zeta|^2): the additive constant
    // makes the vacuum value equal 2 omega k while the flow keeps omega.
    return field + 2.0 * p.omega * k / (1.0 - u) + 2.0 * k * coupling / (1.0 - u);
}

inline double energy_symbol(const CsState& s, const ModelParams& p) {
    return energy_symbol(s, p, lambda_at(p.lambda_schedule, s.t, p.g));
}

/// Symbol of b^+ b + m J0 (resp. b^+ b + m K0); conserved when lambda == 0.
inline double excitation_symbol(const CsState& s, const ModelParams& p) {
    detail::require_finite(s);
    const double u = std::norm(s.zeta);
    if (p.group == GroupKind::Su2) return std::norm(s.alpha) + p.m * p.spin_j * (u - 1.0) / (1.0 + u);
    detail::require_in_disc(s.zeta);
    return std::norm(s.alpha) + p.m * p.bargmann_k * (1.0 + u) / (1.0 - u);
}

} // namespace jcsim
