#pragma once

// Parameter sets of the fifteen published figures. Times are raw t; the
// figures quote omega * t, so switch-on times and durations are divided by
// omega here.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "jcsim/integrator.hpp"
#include "jcsim/model.hpp"

namespace jcsim {

enum class PlotKind {
    TimeSeries, // (t, y_column)
    Portrait,   // (Re zeta, Re zeta')
    Bloch,      // trajectory on the Bloch sphere
    Disc,       // (Re zeta, Im zeta) on the unit disc
};

struct PlotSpec {
    PlotKind kind = PlotKind::TimeSeries;
    std::string x = "t";
    std::string y = "p_down";
    /// Upper limit of the plotted time window (raw t), if any.
    std::optional<double> t_max;
};

struct Preset {
    std::string id;
    std::string caption;
    ModelParams model;
    CsState initial;
    PlotSpec plot;
};

namespace detail {

inline Preset su2_dressed(std::string id, std::string caption, int m, double nu, double g, double alpha0,
                          PlotSpec plot = {}) {
    Preset p;
    p.id = std::move(id);
    p.caption = std::move(caption);
    p.model.group = GroupKind::Su2;
    p.model.spin_j = 0.5;
    p.model.m = m;
    p.model.nu = nu;
    p.model.omega = 1.0;
    p.model.g = g;
    p.model.lambda_schedule = DriveSchedule::equal_g();
    p.initial = CsState{alpha0, 0.3, 0.0};
    p.plot = std::move(plot);
    return p;
}

inline Preset su11_step(std::string id, std::string caption, double alpha0, double lambda, double omega_t_on,
                        double omega_duration, PlotSpec plot) {
    Preset p;
    p.id = std::move(id);
    p.caption = std::move(caption);
    p.model.group = GroupKind::Su11;
    p.model.bargmann_k = 0.25;
    p.model.m = 1;
    p.model.nu = 1.0;
    p.model.omega = 0.5;
    p.model.g = 0.2;
    p.model.lambda_schedule =
        DriveSchedule::step(lambda, omega_t_on / p.model.omega, omega_duration / p.model.omega);
    p.initial = CsState{alpha0, 0.5, 0.0};
    p.plot = std::move(plot);
    return p;
}

} // namespace detail

inline constexpr std::array<std::string_view, 15> kPresetIds = {"fig1",  "fig2",  "fig3",  "fig4",  "fig5",
                                                                 "fig6",  "fig7",  "fig8",  "fig9",  "fig10",
                                                                 "fig11", "fig12", "fig13", "fig14", "fig15"};

/// Looks up a figure preset by id ("fig1" ... "fig15").
inline Preset preset(std::string_view id) {
    using detail::su11_step;
    using detail::su2_dressed;
    const PlotSpec portrait{PlotKind::Portrait, "re_zeta", "re_zeta_dot", std::nullopt};
    const PlotSpec bloch{PlotKind::Bloch, "re_zeta", "im_zeta", std::nullopt};
    const PlotSpec disc{PlotKind::Disc, "re_zeta", "im_zeta", std::nullopt};
    const PlotSpec re_zeta{PlotKind::TimeSeries, "t", "re_zeta", std::nullopt};

    // Figs. 1-4: one-photon dressed JCM, g = lambda, nu = omega = 1,
    // zeta(0) = 0.3, alpha(0) = 1.
    if (id == "fig1") return su2_dressed("fig1", "down-state population, g = lambda = 0.5", 1, 1.0, 0.5, 1.0);
    if (id == "fig2") return su2_dressed("fig2", "down-state population, g = lambda = 0.6", 1, 1.0, 0.6, 1.0);
    if (id == "fig3") return su2_dressed("fig3", "down-state population, g = lambda = 0.7", 1, 1.0, 0.7, 1.0);
    if (id == "fig4") return su2_dressed("fig4", "down-state population, g = lambda = 0.8", 1, 1.0, 0.8, 1.0);
    // Figs. 5-9: two-photon dressed JCM, g = lambda = 0.4, 2 nu = omega = 1,
    // zeta(0) = 0.3.
    if (id == "fig5") return su2_dressed("fig5", "two-photon down-state population, alpha(0) = 1", 2, 0.5, 0.4, 1.0);
    if (id == "fig6") return su2_dressed("fig6", "two-photon down-state population, alpha(0) = 5", 2, 0.5, 0.4, 5.0);
    if (id == "fig7") return su2_dressed("fig7", "two-photon phase portrait, alpha(0) = 1", 2, 0.5, 0.4, 1.0, portrait);
    if (id == "fig8") return su2_dressed("fig8", "two-photon phase portrait, alpha(0) = 5", 2, 0.5, 0.4, 5.0, portrait);
    if (id == "fig9") return su2_dressed("fig9", "two-photon Bloch-sphere evolution, alpha(0) = 1", 2, 0.5, 0.4, 1.0, bloch);
    // Figs. 10-15: hyperbolic model, k = 1/4, nu = 2 omega = 1, g = 0.2,
    // zeta(0) = 0.5, step drive switched on at omega t0 = 10.
    if (id == "fig10") return su11_step("fig10", "unit-disc dynamics, lambda = 0.5, delta = 2", 1.0, 0.5, 10.0, 2.0, disc);
    if (id == "fig11") return su11_step("fig11", "phase portrait, lambda = 0.5, delta = 2", 1.0, 0.5, 10.0, 2.0, portrait);
    if (id == "fig12") return su11_step("fig12", "unit-disc dynamics, lambda = 0.5, delta = 3", 1.0, 0.5, 10.0, 3.0, disc);
    if (id == "fig13") return su11_step("fig13", "phase portrait, lambda = 0.5, delta = 3", 1.0, 0.5, 10.0, 3.0, portrait);
    if (id == "fig14") return su11_step("fig14", "Re zeta(t), alpha(0) = 5, lambda = 0.2, delta = 0.2", 5.0, 0.2, 10.0, 0.2, re_zeta);
    if (id == "fig15") {
        PlotSpec window = re_zeta;
        window.t_max = 40.0 / 0.5; // omega t <= 40
        return su11_step("fig15", "initial part of fig14, omega t <= 40", 5.0, 0.2, 10.0, 0.2, window);
    }
    throw std::invalid_argument("unknown preset '" + std::string(id) + "' (expected fig1 ... fig15)");
}

/// Integrator defaults for a preset: rtol 1e-10 and t_end = 200 / omega.
inline IntegratorConfig preset_integrator(const Preset& p) { return IntegratorConfig::for_model(p.model); }

} // namespace jcsim
