// jcsim command-line front end: simulate, sweep, lyapunov, plot.
//
// Exit status: 0 completed, 1 error, 2 boundary escape (simulate only).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "jcsim/jcsim.hpp"

namespace fs = std::filesystem;
using namespace jcsim;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

RunConfig load_config(const std::string& config_path, const std::string& preset_id) {
    if (!config_path.empty()) return parse_config(slurp(config_path));
    return preset_config(preset_id);
}

std::string plot_file_name(const PlotSpec& spec, std::size_t index) {
    std::string name = std::string("plot") + std::to_string(index) + "_" + to_string(spec.kind);
    if (spec.kind == PlotKind::TimeSeries) name += "_" + spec.x + "_" + spec.y;
    return name + ".svg";
}

int run_simulate(const std::string& config_path, const std::string& preset_id, const fs::path& out_dir) {
    const RunConfig cfg = load_config(config_path, preset_id);
    fs::create_directories(out_dir);

    const DiagnosisResult r = diagnose(cfg.initial, cfg.model, cfg.integrator, cfg.outputs.lyapunov);
    if (cfg.outputs.trajectory_csv) {
        std::ostringstream csv;
        write_trajectory_csv(csv, r.trajectory, r.series);
        write_file(out_dir / "trajectory.csv", csv.str());
    }
    if (cfg.outputs.diagnostics_json) write_file(out_dir / "diagnostics.json", diagnostics_json(cfg, r).dump(2) + "\n");

    const Table table = to_table(r.trajectory, r.series);
    const std::string title = cfg.preset ? *cfg.preset : std::string("jcsim run");
    for (std::size_t i = 0; i < cfg.outputs.plots.size(); ++i)
        write_file(out_dir / plot_file_name(cfg.outputs.plots[i], i), emit_plot(table, cfg.outputs.plots[i], title));

    const auto& d = r.diagnostics;
    std::cout << "termination " << to_string(r.trajectory.termination) << "\n"
              << "regime " << to_string(d.regime_label) << " (lyapunov_max " << d.lyapunov_max << ", threshold "
              << d.thresholds.lyapunov_threshold << ", peaks " << d.peak_count << ")\n";
    if (d.escape_time) std::cout << "escape_time " << *d.escape_time << "\n";

    switch (r.trajectory.termination) {
    case Termination::ReachedTEnd: return 0;
    case Termination::BoundaryEscape: return 2;
    default:
        std::cerr << "error: integration stopped early (" << to_string(r.trajectory.termination) << ")\n";
        return 1;
    }
}

int run_sweep_cmd(const std::string& config_path, const std::string& preset_id, const std::string& param,
                  const std::string& values, const std::string& range, unsigned workers, const std::string& out) {
    const RunConfig base = load_config(config_path, preset_id);
    const std::vector<double> grid = values.empty() ? parse_range(range) : parse_values(values);
    const auto rows = run_sweep(base, param, grid, workers);
    std::ostringstream csv;
    write_sweep_csv(csv, param, rows);
    if (out.empty()) std::cout << csv.str();
    else write_file(out, csv.str());
    return 0;
}

int run_lyapunov(const std::string& config_path, const std::string& preset_id, double t_total) {
    const RunConfig cfg = load_config(config_path, preset_id);
    LyapunovSettings ls = cfg.outputs.lyapunov;
    if (t_total > 0.0) ls.t_total = t_total;
    const LyapunovEstimate est = lyapunov_max(cfg.initial, cfg.model, cfg.integrator, ls);
    const LyapunovEstimate base = lyapunov_max(cfg.initial, free_baseline(cfg.model), cfg.integrator, ls);
    json out{{"lyapunov_max", est.value},
             {"truncated", est.truncated},
             {"t_integrated", est.t_integrated},
             {"baseline_lyapunov", base.value},
             {"lyapunov_threshold", lyapunov_threshold(cfg.model.omega, base.value)}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_plot(const std::string& csv_path, const std::string& x, const std::string& y, bool portrait, bool bloch,
             bool disc, double t_max, const std::string& out) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open " + csv_path);
    const Table table = read_csv(in);
    PlotSpec spec;
    spec.kind = portrait ? PlotKind::Portrait : bloch ? PlotKind::Bloch : disc ? PlotKind::Disc : PlotKind::TimeSeries;
    spec.x = x;
    spec.y = y;
    if (t_max > 0.0) spec.t_max = t_max;
    // render fully before touching the output path
    const std::string svg = emit_plot(table, spec, fs::path(csv_path).filename().string());
    write_file(out, svg);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semiclassical coherent-state simulator for Jaynes-Cummings type models"};
    app.require_subcommand(1);

    std::string config_path, preset_id, out_dir = ".";
    auto* sim = app.add_subcommand("simulate", "Integrate one configuration and write CSV, JSON and SVG artifacts");
    auto* sim_cfg = sim->add_option("--config", config_path, "Configuration document (JSON)")->check(CLI::ExistingFile);
    auto* sim_pre = sim->add_option("--preset", preset_id, "Figure preset fig1..fig15");
    sim_cfg->excludes(sim_pre);
    sim->add_option("--out-dir", out_dir, "Output directory");

    std::string param, values, range, sweep_out;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    auto* sw = app.add_subcommand("sweep", "Diagnose a one-parameter grid");
    auto* sw_cfg = sw->add_option("--config", config_path, "Base configuration document")->check(CLI::ExistingFile);
    auto* sw_pre = sw->add_option("--preset", preset_id, "Base preset instead of a document");
    sw_cfg->excludes(sw_pre);
    sw->add_option("--param", param, "Dotted parameter path, e.g. model.g or model.lambda.amplitude")->required();
    auto* sw_vals = sw->add_option("--values", values, "Comma-separated grid");
    auto* sw_range = sw->add_option("--range", range, "Evenly spaced grid a:b:n");
    sw_vals->excludes(sw_range);
    sw->add_option("--workers", workers, "Concurrent grid points")->check(CLI::PositiveNumber);
    sw->add_option("--out", sweep_out, "Output CSV (default stdout)");

    double t_total = 0.0;
    auto* ly = app.add_subcommand("lyapunov", "Largest Lyapunov exponent of a configuration");
    auto* ly_cfg = ly->add_option("--config", config_path, "Configuration document")->check(CLI::ExistingFile);
    auto* ly_pre = ly->add_option("--preset", preset_id, "Figure preset");
    ly_cfg->excludes(ly_pre);
    ly->add_option("--t-total", t_total, "Integration horizon")->check(CLI::PositiveNumber);

    std::string csv_path, x = "t", y = "p_down", plot_out;
    bool portrait = false, bloch = false, disc = false;
    double t_max = 0.0;
    auto* pl = app.add_subcommand("plot", "Render a trajectory CSV column pair as SVG");
    pl->add_option("csv", csv_path, "Trajectory CSV")->required()->check(CLI::ExistingFile);
    pl->add_option("--x", x, "x column");
    pl->add_option("--y", y, "y column");
    auto* f_portrait = pl->add_flag("--portrait", portrait, "Phase portrait (Re zeta, d/dt Re zeta)");
    auto* f_bloch = pl->add_flag("--bloch", bloch, "Bloch sphere projection");
    auto* f_disc = pl->add_flag("--disc", disc, "Unit-disc view of zeta");
    f_portrait->excludes(f_bloch)->excludes(f_disc);
    f_bloch->excludes(f_disc);
    pl->add_option("--t-max", t_max, "Plot only t <= t_max");
    pl->add_option("--out", plot_out, "Output SVG")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        auto need_source = [&](CLI::App* cmd) {
            if (config_path.empty() && preset_id.empty())
                throw CLI::RequiredError(cmd->get_name() + ": one of --config or --preset");
        };
        if (*sim) {
            need_source(sim);
            return run_simulate(config_path, preset_id, out_dir);
        }
        if (*sw) {
            need_source(sw);
            if (values.empty() && range.empty()) throw CLI::RequiredError("sweep: one of --values or --range");
            return run_sweep_cmd(config_path, preset_id, param, values, range, workers, sweep_out);
        }
        if (*ly) {
            need_source(ly);
            return run_lyapunov(config_path, preset_id, t_total);
        }
        return run_plot(csv_path, x, y, portrait, bloch, disc, t_max, plot_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error at '" << e.path() << "': " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
}
