#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "jcsim/sweep.hpp"

using namespace jcsim;

namespace {

RunConfig short_fig1() {
    RunConfig cfg = preset_config("fig1");
    cfg.integrator.t_end = 100.0;
    cfg.outputs.lyapunov.t_total = 200.0;
    return cfg;
}

} // namespace

TEST(WithParameter, SetsScalarsByPath) {
    const RunConfig base = preset_config("fig10");
    EXPECT_EQ(with_parameter(base, "model.g", 0.3).model.g, cplx(0.3));
    const RunConfig amp = with_parameter(base, "model.lambda.amplitude", 0.7);
    EXPECT_EQ(std::get<DriveSchedule::Step>(amp.model.lambda_schedule.kind).amplitude, cplx(0.7));
    EXPECT_EQ(with_parameter(base, "integrator.max_steps", 1000.0).integrator.max_steps, 1000);
    EXPECT_EQ(with_parameter(base, "initial.alpha", 5.0).initial.alpha, cplx(5.0));
}

TEST(WithParameter, InvalidPaths) {
    const RunConfig base = preset_config("fig1");
    EXPECT_THROW(with_parameter(base, "model.gamma", 1.0), ConfigError);
    EXPECT_THROW(with_parameter(base, "model", 1.0), ConfigError);
    EXPECT_THROW(with_parameter(base, "model.group", 1.0), ConfigError);
    EXPECT_THROW(with_parameter(base, "", 1.0), ConfigError);
    EXPECT_THROW(with_parameter(base, "model..g", 1.0), ConfigError);
    // fig1 has lambda = equal_g: no amplitude to sweep
    EXPECT_THROW(with_parameter(base, "model.lambda.amplitude", 1.0), ConfigError);
    EXPECT_THROW(run_sweep(base, "model.nope", {0.1}), ConfigError);
}

TEST(Grids, RangeAndList) {
    const auto r = parse_range("0:1:5");
    ASSERT_EQ(r.size(), 5u);
    EXPECT_DOUBLE_EQ(r[1], 0.25);
    EXPECT_DOUBLE_EQ(r.back(), 1.0);
    EXPECT_EQ(parse_range("2:3:1"), std::vector<double>{2.0});
    EXPECT_THROW(parse_range("0:1"), std::invalid_argument);
    EXPECT_THROW(parse_range("0:1:0"), std::invalid_argument);
    EXPECT_EQ(parse_values("0.05,0.5,0.8"), (std::vector<double>{0.05, 0.5, 0.8}));
    EXPECT_THROW(parse_values("0.1,abc"), std::invalid_argument);
    EXPECT_THROW(parse_values("0.1x"), std::invalid_argument);
}

TEST(RunSweep, SinglePointMatchesDiagnose) {
    const RunConfig base = short_fig1();
    const auto rows = run_sweep(base, "model.g", {0.5}, 1);
    ASSERT_EQ(rows.size(), 1u);
    const DiagnosisResult d = diagnose(base.initial, base.model, base.integrator, base.outputs.lyapunov);
    EXPECT_EQ(rows[0].lyapunov_max, d.diagnostics.lyapunov_max);
    EXPECT_EQ(rows[0].peak_count, d.diagnostics.peak_count);
    EXPECT_EQ(rows[0].regime_label, d.diagnostics.regime_label);
    EXPECT_EQ(rows[0].escape_time, d.diagnostics.escape_time);
    EXPECT_TRUE(rows[0].error.empty());
}

TEST(RunSweep, GridOrderIndependentOfWorkers) {
    const RunConfig base = short_fig1();
    const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.2};
    const auto serial = run_sweep(base, "model.g", grid, 1);
    const auto parallel = run_sweep(base, "model.g", grid, 4);
    ASSERT_EQ(serial.size(), grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_EQ(serial[i].value, grid[i]);
        EXPECT_EQ(parallel[i].value, grid[i]);
        EXPECT_EQ(serial[i].lyapunov_max, parallel[i].lyapunov_max);
        EXPECT_EQ(serial[i].peak_count, parallel[i].peak_count);
    }
}

TEST(RunSweep, PerPointFailureRecorded) {
    const auto rows = run_sweep(short_fig1(), "model.nu", {1.0, -1.0}, 2);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(rows[0].error.empty());
    EXPECT_FALSE(rows[1].error.empty());
    EXPECT_FALSE(rows[1].lyapunov_max.has_value());
}

TEST(RunSweep, EmptyGridRejected) {
    EXPECT_THROW(run_sweep(short_fig1(), "model.g", {}), std::invalid_argument);
}

TEST(SweepCsv, Layout) {
    const auto rows = run_sweep(short_fig1(), "model.nu", {1.0, -1.0}, 2);
    std::ostringstream os;
    write_sweep_csv(os, "model.nu", rows);
    std::istringstream is(os.str());
    std::string header, a, b;
    std::getline(is, header);
    std::getline(is, a);
    std::getline(is, b);
    EXPECT_EQ(header, "model.nu,lyapunov_max,lyapunov_truncated,peak_count,regime_label,escape_time,termination,error");
    EXPECT_EQ(a.substr(0, 2), "1,");
    EXPECT_NE(a.find("reached_t_end"), std::string::npos);
    EXPECT_EQ(b.substr(0, 3), "-1,");
    EXPECT_EQ(std::count(b.begin(), b.end(), ','), 7);
}
