#include <gtest/gtest.h>

#include <cmath>

#include "jcsim/integrator.hpp"
#include "jcsim/observables.hpp"
#include "jcsim/oracle.hpp"
#include "jcsim/presets.hpp"

using namespace jcsim;

namespace {

ModelParams free_su2() {
    ModelParams p;
    p.nu = 1.0;
    p.omega = 1.0;
    return p;
}

Derivative linear_rotation(const CsState& s) { return {cplx{0, -1} * s.alpha, cplx{}}; }

double max_component_error(const CsState& a, const CsState& b) {
    return std::max({std::abs(a.alpha.real() - b.alpha.real()), std::abs(a.alpha.imag() - b.alpha.imag()),
                     std::abs(a.zeta.real() - b.zeta.real()), std::abs(a.zeta.imag() - b.zeta.imag())});
}

// Fixed-step DP5 (fifth-order solution) over [0, T] on the given model.
CsState fixed_dp5(CsState s, const ModelParams& p, double h, double T) {
    const int n = static_cast<int>(std::lround(T / h));
    auto f = [&](const CsState& x) { return rhs(x, p); };
    for (int i = 0; i < n; ++i) s = dp54_step(s, h, f).proposed;
    return s;
}

} // namespace

TEST(Dp54Step, LinearRotationOneStep) {
    const StepProposal r = dp54_step(CsState{1.0, 0.0, 0.0}, 0.1, linear_rotation);
    EXPECT_LT(std::abs(r.proposed.alpha - std::exp(cplx{0, -0.1})), 1e-8);
    EXPECT_DOUBLE_EQ(r.proposed.t, 0.1);
    EXPECT_GE(r.error_estimate, 0.0);
}

TEST(Dp54Step, ZeroFieldHasZeroError) {
    const StepProposal r = dp54_step(CsState{{0.3, 0.2}, {0.1, -0.4}, 0.0}, 0.5,
                                     [](const CsState&) { return Derivative{}; });
    EXPECT_EQ(r.error_estimate, 0.0);
    EXPECT_EQ(r.proposed.alpha, cplx(0.3, 0.2));
}

TEST(Dp54Step, NonFiniteStageGivesInfiniteError) {
    const StepProposal r = dp54_step(CsState{1.0, 0.0, 0.0}, 0.1, [](const CsState&) {
        return Derivative{cplx{std::numeric_limits<double>::infinity(), 0.0}, cplx{}};
    });
    EXPECT_TRUE(std::isinf(r.error_estimate));
}

TEST(Dp54Step, FifthOrderConvergenceOnFig1) {
    const Preset pre = preset("fig1");
    const double T = 10.0;
    const Trajectory ref = oracle::reference_integrate(pre.initial, pre.model, 1e-3, T);
    const CsState exact = ref.samples.back();
    const double e1 = max_component_error(fixed_dp5(pre.initial, pre.model, 0.1, T), exact);
    const double e2 = max_component_error(fixed_dp5(pre.initial, pre.model, 0.05, T), exact);
    const double ratio = e1 / e2;
    EXPECT_GT(ratio, 20.0);
    EXPECT_LT(ratio, 45.0);
}

TEST(AttemptStep, RejectsOversizedStep) {
    const Preset pre = preset("fig4");
    IntegratorConfig cfg = preset_integrator(pre);
    const StepOutcome out = attempt_step(pre.initial, 2.0, pre.model, cfg);
    ASSERT_TRUE(std::holds_alternative<StepRejected>(out));
    EXPECT_LT(std::get<StepRejected>(out).suggested_h, 2.0);
    EXPECT_GE(std::get<StepRejected>(out).suggested_h, 0.4);
}

TEST(AttemptStep, AcceptsSmallStepAndCapsGrowth) {
    const ModelParams p = free_su2();
    IntegratorConfig cfg;
    const StepOutcome out = attempt_step(CsState{1.0, 0.3, 0.0}, 1e-3, p, cfg);
    ASSERT_TRUE(std::holds_alternative<StepAccepted>(out));
    const auto& acc = std::get<StepAccepted>(out);
    EXPECT_LE(acc.next_h, 5.0 * 1e-3 + 1e-18);
    EXPECT_GE(acc.error_estimate, 0.0);
}

TEST(AttemptStep, BoundaryHitNearUnitCircle) {
    ModelParams p;
    p.group = GroupKind::Su11;
    p.omega = 0.5;
    IntegratorConfig cfg;
    cfg.boundary_eps = 1e-2;
    const StepOutcome out = attempt_step(CsState{0.0, 0.995, 0.0}, 1e-3, p, cfg);
    EXPECT_TRUE(std::holds_alternative<StepBoundaryHit>(out));
}

TEST(Integrate, FreeRotationMatchesClosedForm) {
    const ModelParams p = free_su2();
    IntegratorConfig cfg = IntegratorConfig::for_model(p);
    cfg.t_end = 50.0;
    const CsState s0{1.0, 0.3, 0.0};
    const Trajectory tr = integrate(s0, p, cfg);
    EXPECT_EQ(tr.termination, Termination::ReachedTEnd);
    for (const CsState& s : tr.samples) {
        EXPECT_LT(std::abs(s.alpha - std::polar(1.0, -s.t)), 1e-8);
        EXPECT_LT(std::abs(s.zeta - 0.3 * std::polar(1.0, -s.t)), 1e-8);
    }
}

TEST(Integrate, SampleGridIsUniform) {
    const Preset pre = preset("fig2");
    IntegratorConfig cfg = preset_integrator(pre);
    cfg.t_end = 30.0;
    const Trajectory tr = integrate(pre.initial, pre.model, cfg);
    ASSERT_EQ(tr.samples.size(), 301u);
    EXPECT_EQ(tr.samples.front(), pre.initial);
    for (std::size_t k = 0; k < tr.samples.size(); ++k)
        EXPECT_NEAR(tr.samples[k].t, 0.1 * static_cast<double>(k), 1e-12);
    EXPECT_DOUBLE_EQ(tr.samples.back().t, 30.0);
}

TEST(Integrate, Deterministic) {
    const Preset pre = preset("fig3");
    IntegratorConfig cfg = preset_integrator(pre);
    cfg.t_end = 40.0;
    const Trajectory a = integrate(pre.initial, pre.model, cfg);
    const Trajectory b = integrate(pre.initial, pre.model, cfg);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i], b.samples[i]);
    EXPECT_EQ(a.accepted_steps, b.accepted_steps);
}

TEST(Integrate, Fig1EnergyDrift) {
    const Preset pre = preset("fig1");
    const Trajectory tr = integrate(pre.initial, pre.model, preset_integrator(pre));
    ASSERT_EQ(tr.termination, Termination::ReachedTEnd);
    EXPECT_LT(conserved_report(tr, pre.model).energy_relative_drift(), 1e-8);
}

TEST(Integrate, TighterToleranceIsCloserToOracle) {
    const Preset pre = preset("fig1");
    const Trajectory ref = oracle::reference_integrate(pre.initial, pre.model, oracle::default_dt(pre.model), 20.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double rtol : {1e-6, 1e-7, 1e-8, 1e-9}) {
        IntegratorConfig cfg = preset_integrator(pre);
        cfg.t_end = 20.0;
        cfg.rtol = rtol;
        cfg.atol = rtol * 1e-2;
        const double err = max_component_error(integrate(pre.initial, pre.model, cfg).samples.back(), ref.samples.back());
        EXPECT_LE(err, prev);
        prev = err;
    }
}

TEST(Integrate, SpinPassesThroughNorthPole) {
    // Start close to the up state: zeta is huge, so the run must use the
    // north chart to stay regular.
    ModelParams p = free_su2();
    p.g = 0.3;
    p.lambda_schedule = DriveSchedule::equal_g();
    IntegratorConfig cfg = IntegratorConfig::for_model(p);
    cfg.t_end = 40.0;
    const CsState s0{1.0, 1e6, 0.0};
    const Trajectory tr = integrate(s0, p, cfg);
    EXPECT_EQ(tr.termination, Termination::ReachedTEnd);
    EXPECT_LT(conserved_report(tr, p).energy_max_drift, 1e-8);
}

TEST(Integrate, StrongStepDriveEscapesTheDisc) {
    Preset pre = preset("fig10");
    pre.model.lambda_schedule = DriveSchedule::step(0.7, 20.0, 4.0);
    const Trajectory tr = integrate(pre.initial, pre.model, preset_integrator(pre));
    EXPECT_EQ(tr.termination, Termination::BoundaryEscape);
    ASSERT_TRUE(tr.t_escape.has_value());
    EXPECT_GT(*tr.t_escape, 20.0);
    EXPECT_GE(std::abs(tr.samples.back().zeta), 1.0 - 1e-6);
}

TEST(Integrate, InitialStateOutsideDiscThrows) {
    Preset pre = preset("fig10");
    EXPECT_THROW(integrate(CsState{1.0, 1.2, 0.0}, pre.model, preset_integrator(pre)), DomainError);
}

TEST(Integrate, StepLimitStopsRunawaySolution) {
    const Preset pre = preset("fig6");
    IntegratorConfig cfg = preset_integrator(pre);
    cfg.max_steps = 500;
    const Trajectory tr = integrate(pre.initial, pre.model, cfg);
    EXPECT_EQ(tr.termination, Termination::StepLimit);
    EXPECT_LE(tr.accepted_steps + tr.rejected_steps, 500);
}

TEST(IntegratorConfig, DefaultsAndValidation) {
    ModelParams p;
    p.omega = 0.5;
    const IntegratorConfig c = IntegratorConfig::for_model(p);
    EXPECT_EQ(c.rtol, 1e-10);
    EXPECT_DOUBLE_EQ(c.t_end, 400.0);
    EXPECT_DOUBLE_EQ(c.h_max, 0.1 * 4.0 * std::numbers::pi);
    IntegratorConfig bad = c;
    bad.h_init = 2.0 * bad.h_max;
    EXPECT_THROW(validate(bad), std::invalid_argument);
    bad = c;
    bad.boundary_eps = 1.0;
    EXPECT_THROW(validate(bad), std::invalid_argument);
}
