#include <gtest/gtest.h>

#include "jcsim/config.hpp"

using namespace jcsim;

namespace {

std::string error_path(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

} // namespace

TEST(ParseConfig, PresetOnlyDocumentEqualsPreset) {
    const RunConfig cfg = parse_config(R"({"preset": "fig1"})");
    const Preset p = preset("fig1");
    EXPECT_EQ(cfg.model, p.model);
    EXPECT_EQ(cfg.initial, p.initial);
    EXPECT_EQ(cfg.integrator, preset_integrator(p));
    EXPECT_EQ(cfg, preset_config("fig1"));
    EXPECT_EQ(cfg.model.group, GroupKind::Su2);
    EXPECT_EQ(cfg.model.spin_j, 0.5);
    EXPECT_EQ(cfg.model.m, 1);
    EXPECT_EQ(cfg.model.g, cplx(0.5));
    EXPECT_EQ(lambda_at(cfg.model.lambda_schedule, 0.0, cfg.model.g), cplx(0.5));
    EXPECT_EQ(cfg.initial.alpha, cplx(1.0));
    EXPECT_EQ(cfg.initial.zeta, cplx(0.3));
}

TEST(ParseConfig, CaptionParameters) {
    const RunConfig f5 = preset_config("fig5");
    EXPECT_EQ(f5.model.m, 2);
    EXPECT_EQ(f5.model.nu, 0.5);
    EXPECT_EQ(f5.model.omega, 1.0);
    EXPECT_EQ(f5.model.g, cplx(0.4));
    EXPECT_EQ(f5.initial.alpha, cplx(1.0));

    const RunConfig f10 = preset_config("fig10");
    EXPECT_EQ(f10.model.group, GroupKind::Su11);
    EXPECT_EQ(f10.model.bargmann_k, 0.25);
    EXPECT_EQ(f10.model.nu, 1.0);
    EXPECT_EQ(f10.model.omega, 0.5);
    EXPECT_EQ(f10.initial.zeta, cplx(0.5));
    const auto& st = std::get<DriveSchedule::Step>(f10.model.lambda_schedule.kind);
    EXPECT_EQ(st.amplitude, cplx(0.5));
    EXPECT_DOUBLE_EQ(st.t_on * f10.model.omega, 10.0);
    EXPECT_DOUBLE_EQ(st.duration * f10.model.omega, 2.0);
    EXPECT_DOUBLE_EQ(f10.integrator.t_end * f10.model.omega, 200.0);

    const RunConfig f14 = preset_config("fig14");
    const auto& st14 = std::get<DriveSchedule::Step>(f14.model.lambda_schedule.kind);
    EXPECT_EQ(f14.initial.alpha, cplx(5.0));
    EXPECT_EQ(st14.amplitude, cplx(0.2));
    EXPECT_DOUBLE_EQ(st14.duration * f14.model.omega, 0.2);

    const RunConfig f15 = preset_config("fig15");
    ASSERT_TRUE(f15.outputs.plots.at(0).t_max.has_value());
    EXPECT_DOUBLE_EQ(*f15.outputs.plots[0].t_max * f15.model.omega, 40.0);
}

TEST(ParseConfig, EveryPresetResolves) {
    for (auto id : kPresetIds) EXPECT_NO_THROW(preset_config(std::string(id))) << id;
    EXPECT_EQ(error_path(R"({"preset": "fig16"})"), "preset");
}

TEST(ParseConfig, DefaultRtol) {
    const RunConfig cfg = parse_config(R"({"model": {"g": 0.1}, "integrator": {"atol": 1e-11}})");
    EXPECT_EQ(cfg.integrator.rtol, 1e-10);
    EXPECT_EQ(cfg.integrator.atol, 1e-11);
}

TEST(ParseConfig, HyperbolicZetaOutsideDisc) {
    EXPECT_EQ(error_path(R"({"model": {"group": "su11"}, "initial": {"zeta": 1.2}})"), "initial.zeta");
    EXPECT_EQ(error_path(R"({"preset": "fig10", "initial": {"zeta": [0.0, 1.0]}})"), "initial.zeta");
}

TEST(ParseConfig, UnknownKeysRejectedWithPath) {
    EXPECT_EQ(error_path(R"({"modle": {}})"), "modle");
    EXPECT_EQ(error_path(R"({"model": {"gg": 1}})"), "model.gg");
    EXPECT_EQ(error_path(R"({"integrator": {"rtoll": 1e-9}})"), "integrator.rtoll");
    EXPECT_EQ(error_path(R"({"model": {"lambda": {"kind": "step", "amp": 1}}})"), "model.lambda.amp");
    EXPECT_EQ(error_path(R"({"outputs": {"plots": [{"kind": "disc", "z": "t"}]}})"), "outputs.plots[0].z");
}

TEST(ParseConfig, InvariantViolationsCarryKeyPath) {
    EXPECT_EQ(error_path(R"({"model": {"nu": -1}})"), "model.nu");
    EXPECT_EQ(error_path(R"({"model": {"m": 1.5}})"), "model.m");
    EXPECT_EQ(error_path(R"({"model": {"spin_j": 0.3}})"), "model.spin_j");
    EXPECT_EQ(error_path(R"({"integrator": {"rtol": 0}})"), "integrator.rtol");
    EXPECT_EQ(error_path(R"({"integrator": {"boundary_eps": 2}})"), "integrator.boundary_eps");
    EXPECT_EQ(error_path(R"({"model": {"lambda": {"kind": "step", "duration": 0}}})"), "model.lambda.duration");
    EXPECT_EQ(error_path(R"({"model": {"group": "su3"}})"), "model.group");
    EXPECT_EQ(error_path(R"({"model": {"g": "big"}})"), "model.g");
}

TEST(ParseConfig, MalformedDocument) {
    EXPECT_THROW(parse_config("{\"preset\": "), ConfigError);
    EXPECT_THROW(parse_config("[]"), ConfigError);
}

TEST(ParseConfig, OverridesLayerOnPreset) {
    const RunConfig cfg =
        parse_config(R"({"preset": "fig10", "model": {"lambda": {"amplitude": 0.7}}, "initial": {"alpha": [1, 0.5]}})");
    const auto& st = std::get<DriveSchedule::Step>(cfg.model.lambda_schedule.kind);
    EXPECT_EQ(st.amplitude, cplx(0.7));
    EXPECT_DOUBLE_EQ(st.t_on, 20.0);
    EXPECT_EQ(cfg.initial.alpha, cplx(1.0, 0.5));
}

TEST(ParseConfig, FrequencyDefaultsFollowOmega) {
    const RunConfig cfg = parse_config(R"({"model": {"omega": 2.0}})");
    EXPECT_DOUBLE_EQ(cfg.integrator.t_end, 100.0);
    EXPECT_DOUBLE_EQ(cfg.outputs.lyapunov.t_total, 1000.0);
    EXPECT_DOUBLE_EQ(cfg.outputs.lyapunov.renorm_interval, 0.5);
}

TEST(ParseConfig, RoundTrip) {
    std::vector<RunConfig> cases;
    for (auto id : kPresetIds) cases.push_back(preset_config(std::string(id)));
    cases.push_back(parse_config(R"({
        "model": {"group": "su2", "spin_j": 1.5, "m": 3, "nu": 0.75, "omega": 1.25, "g": [0.1, -0.2],
                  "lambda": {"kind": "constant", "value": [0.05, 0.01]}},
        "initial": {"alpha": [0.1, 0.2], "zeta": [-0.3, 0.4]},
        "integrator": {"rtol": 1e-9, "sample_interval": 0.05, "max_steps": 1234},
        "outputs": {"trajectory_csv": false, "plots": [{"kind": "bloch"}, {"kind": "timeseries", "y": "n_photons", "t_max": 3.5}],
                    "lyapunov": {"perturbation": 1e-9}}})"));
    for (const RunConfig& c : cases) {
        const RunConfig back = parse_config(to_json(c).dump());
        EXPECT_EQ(back, c);
        EXPECT_EQ(to_json(back), to_json(c));
    }
}
