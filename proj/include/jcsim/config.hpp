#pragma once

// Run configuration: a JSON document with sections model / initial /
// integrator / outputs, optionally layered over a figure preset.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "jcsim/diagnostics.hpp"
#include "jcsim/integrator.hpp"
#include "jcsim/model.hpp"
#include "jcsim/presets.hpp"

namespace jcsim {

using json = nlohmann::json;

/// Invalid configuration; path() names the offending key ("model.omega").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct OutputSpec {
    bool trajectory_csv = true;
    bool diagnostics_json = true;
    std::vector<PlotSpec> plots;
    LyapunovSettings lyapunov;
};

struct RunConfig {
    std::optional<std::string> preset;
    ModelParams model;
    CsState initial{1.0, 0.3, 0.0};
    IntegratorConfig integrator;
    OutputSpec outputs;
};

inline bool operator==(const PlotSpec& a, const PlotSpec& b) {
    return a.kind == b.kind && a.x == b.x && a.y == b.y && a.t_max == b.t_max;
}
inline bool operator==(const LyapunovSettings& a, const LyapunovSettings& b) {
    return a.renorm_interval == b.renorm_interval && a.perturbation == b.perturbation && a.t_total == b.t_total;
}
inline bool operator==(const OutputSpec& a, const OutputSpec& b) {
    return a.trajectory_csv == b.trajectory_csv && a.diagnostics_json == b.diagnostics_json && a.plots == b.plots &&
           a.lyapunov == b.lyapunov;
}
inline bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.preset == b.preset && a.model == b.model && a.initial == b.initial && a.integrator == b.integrator &&
           a.outputs == b.outputs;
}

inline const char* to_string(PlotKind k) {
    switch (k) {
    case PlotKind::TimeSeries: return "timeseries";
    case PlotKind::Portrait: return "portrait";
    case PlotKind::Bloch: return "bloch";
    case PlotKind::Disc: return "disc";
    }
    return "?";
}

namespace detail {

inline std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(join(path, key), "unknown key");
    }
}

inline double get_real(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
    return d;
}

inline cplx get_complex(const json& v, const std::string& path) {
    if (v.is_number()) return {get_real(v, path), 0.0};
    if (v.is_array() && v.size() == 2) return {get_real(v[0], path + "[0]"), get_real(v[1], path + "[1]")};
    throw ConfigError(path, "expected a number or a [re, im] pair");
}

inline json put_complex(cplx z) {
    if (z.imag() == 0.0) return z.real();
    return json::array({z.real(), z.imag()});
}

inline PlotKind plot_kind_from(const std::string& s, const std::string& path) {
    if (s == "timeseries") return PlotKind::TimeSeries;
    if (s == "portrait") return PlotKind::Portrait;
    if (s == "bloch") return PlotKind::Bloch;
    if (s == "disc") return PlotKind::Disc;
    throw ConfigError(path, "unknown plot kind '" + s + "'");
}

inline DriveSchedule parse_lambda(const json& v, const DriveSchedule& current, const std::string& path) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "zero") return DriveSchedule::zero();
        if (s == "equal_g") return DriveSchedule::equal_g();
        throw ConfigError(path, "unknown drive '" + s + "' (zero, equal_g, or an object)");
    }
    reject_unknown(v, path, {"kind", "value", "amplitude", "t_on", "duration"});
    std::string kind;
    if (v.contains("kind")) {
        if (!v["kind"].is_string()) throw ConfigError(join(path, "kind"), "expected a string");
        kind = v["kind"].get<std::string>();
    } else if (std::holds_alternative<DriveSchedule::Step>(current.kind)) {
        kind = "step";
    } else if (std::holds_alternative<DriveSchedule::Constant>(current.kind)) {
        kind = "constant";
    } else {
        throw ConfigError(join(path, "kind"), "missing");
    }
    if (kind == "zero") return DriveSchedule::zero();
    if (kind == "equal_g") return DriveSchedule::equal_g();
    if (kind == "constant") {
        cplx value{};
        if (auto c = std::get_if<DriveSchedule::Constant>(&current.kind)) value = c->value;
        if (v.contains("value")) value = get_complex(v["value"], join(path, "value"));
        return DriveSchedule::constant(value);
    }
    if (kind == "step") {
        DriveSchedule::Step st{0.0, 0.0, 1.0};
        if (auto c = std::get_if<DriveSchedule::Step>(&current.kind)) st = *c;
        if (v.contains("amplitude")) st.amplitude = get_complex(v["amplitude"], join(path, "amplitude"));
        if (v.contains("t_on")) st.t_on = get_real(v["t_on"], join(path, "t_on"));
        if (v.contains("duration")) st.duration = get_real(v["duration"], join(path, "duration"));
        if (!(st.t_on >= 0.0)) throw ConfigError(join(path, "t_on"), "must be >= 0");
        if (!(st.duration > 0.0)) throw ConfigError(join(path, "duration"), "must be > 0");
        return DriveSchedule{st};
    }
    throw ConfigError(join(path, "kind"), "unknown drive kind '" + kind + "'");
}

inline json lambda_to_json(const DriveSchedule& d) {
    if (std::holds_alternative<DriveSchedule::ConstantZero>(d.kind)) return {{"kind", "zero"}};
    if (std::holds_alternative<DriveSchedule::ConstantEqualG>(d.kind)) return {{"kind", "equal_g"}};
    if (auto c = std::get_if<DriveSchedule::Constant>(&d.kind))
        return {{"kind", "constant"}, {"value", put_complex(c->value)}};
    const auto& s = std::get<DriveSchedule::Step>(d.kind);
    return {{"kind", "step"}, {"amplitude", put_complex(s.amplitude)}, {"t_on", s.t_on}, {"duration", s.duration}};
}

inline void parse_model(const json& m, ModelParams& model) {
    reject_unknown(m, "model", {"group", "spin_j", "bargmann_k", "m", "nu", "omega", "g", "lambda"});
    if (m.contains("group")) {
        const auto& g = m["group"];
        if (!g.is_string()) throw ConfigError("model.group", "expected \"su2\" or \"su11\"");
        const auto s = g.get<std::string>();
        if (s == "su2") model.group = GroupKind::Su2;
        else if (s == "su11") model.group = GroupKind::Su11;
        else throw ConfigError("model.group", "expected \"su2\" or \"su11\"");
    }
    if (m.contains("spin_j")) model.spin_j = get_real(m["spin_j"], "model.spin_j");
    if (m.contains("bargmann_k")) model.bargmann_k = get_real(m["bargmann_k"], "model.bargmann_k");
    if (m.contains("m")) {
        if (!m["m"].is_number_integer()) throw ConfigError("model.m", "expected an integer");
        model.m = m["m"].get<int>();
    }
    if (m.contains("nu")) model.nu = get_real(m["nu"], "model.nu");
    if (m.contains("omega")) model.omega = get_real(m["omega"], "model.omega");
    if (m.contains("g")) model.g = get_complex(m["g"], "model.g");
    if (m.contains("lambda")) model.lambda_schedule = parse_lambda(m["lambda"], model.lambda_schedule, "model.lambda");

    // map invariant violations onto the key that carries them
    if (!(model.nu > 0.0)) throw ConfigError("model.nu", "must be positive");
    if (!(model.omega > 0.0)) throw ConfigError("model.omega", "must be positive");
    if (model.m < 1) throw ConfigError("model.m", "must be >= 1");
    try {
        validate(model);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(model.group == GroupKind::Su2 ? "model.spin_j" : "model.bargmann_k", e.what());
    }
}

inline void parse_integrator(const json& v, IntegratorConfig& c) {
    reject_unknown(v, "integrator",
                   {"rtol", "atol", "h_init", "h_max", "safety", "sample_interval", "t_end", "boundary_eps", "max_steps"});
    auto real = [&](const char* key, double& dst) {
        if (v.contains(key)) dst = get_real(v[key], join("integrator", key));
    };
    real("rtol", c.rtol);
    real("atol", c.atol);
    real("h_init", c.h_init);
    real("h_max", c.h_max);
    real("safety", c.safety);
    real("sample_interval", c.sample_interval);
    real("t_end", c.t_end);
    real("boundary_eps", c.boundary_eps);
    if (v.contains("max_steps")) {
        if (!v["max_steps"].is_number_integer()) throw ConfigError("integrator.max_steps", "expected an integer");
        c.max_steps = v["max_steps"].get<long>();
    }
}

inline void validate_integrator(const IntegratorConfig& c) {
    auto fail = [](const char* key, const char* msg) { throw ConfigError(std::string("integrator.") + key, msg); };
    if (!(c.rtol > 0.0)) fail("rtol", "must be positive");
    if (!(c.atol > 0.0)) fail("atol", "must be positive");
    if (!(c.h_init > 0.0)) fail("h_init", "must be positive");
    if (!(c.h_init <= c.h_max)) fail("h_max", "must be >= h_init");
    if (!(c.safety > 0.0 && c.safety < 1.0)) fail("safety", "must lie in (0, 1)");
    if (!(c.sample_interval > 0.0)) fail("sample_interval", "must be positive");
    if (!(c.t_end > 0.0)) fail("t_end", "must be positive");
    if (!(c.boundary_eps > 0.0 && c.boundary_eps < 1.0)) fail("boundary_eps", "must lie in (0, 1)");
    if (c.max_steps < 1) fail("max_steps", "must be positive");
}

inline void parse_outputs(const json& v, OutputSpec& out) {
    reject_unknown(v, "outputs", {"trajectory_csv", "diagnostics_json", "plots", "lyapunov"});
    auto flag = [&](const char* key, bool& dst) {
        if (!v.contains(key)) return;
        if (!v[key].is_boolean()) throw ConfigError(join("outputs", key), "expected true or false");
        dst = v[key].get<bool>();
    };
    flag("trajectory_csv", out.trajectory_csv);
    flag("diagnostics_json", out.diagnostics_json);
    if (v.contains("plots")) {
        if (!v["plots"].is_array()) throw ConfigError("outputs.plots", "expected an array");
        out.plots.clear();
        for (std::size_t i = 0; i < v["plots"].size(); ++i) {
            const std::string path = "outputs.plots[" + std::to_string(i) + "]";
            const json& p = v["plots"][i];
            reject_unknown(p, path, {"kind", "x", "y", "t_max"});
            PlotSpec spec;
            if (p.contains("kind")) {
                if (!p["kind"].is_string()) throw ConfigError(join(path, "kind"), "expected a string");
                spec.kind = plot_kind_from(p["kind"].get<std::string>(), join(path, "kind"));
            }
            for (const char* key : {"x", "y"}) {
                if (!p.contains(key)) continue;
                if (!p[key].is_string()) throw ConfigError(join(path, key), "expected a column name");
                (std::string(key) == "x" ? spec.x : spec.y) = p[key].get<std::string>();
            }
            if (p.contains("t_max")) spec.t_max = get_real(p["t_max"], join(path, "t_max"));
            out.plots.push_back(spec);
        }
    }
    if (v.contains("lyapunov")) {
        const json& l = v["lyapunov"];
        reject_unknown(l, "outputs.lyapunov", {"t_total", "renorm_interval", "perturbation"});
        if (l.contains("t_total")) out.lyapunov.t_total = get_real(l["t_total"], "outputs.lyapunov.t_total");
        if (l.contains("renorm_interval"))
            out.lyapunov.renorm_interval = get_real(l["renorm_interval"], "outputs.lyapunov.renorm_interval");
        if (l.contains("perturbation"))
            out.lyapunov.perturbation = get_real(l["perturbation"], "outputs.lyapunov.perturbation");
    }
    if (!(out.lyapunov.perturbation > 0.0)) throw ConfigError("outputs.lyapunov.perturbation", "must be positive");
    if (!(out.lyapunov.renorm_interval > 0.0))
        throw ConfigError("outputs.lyapunov.renorm_interval", "must be positive");
    if (!(out.lyapunov.t_total >= out.lyapunov.renorm_interval))
        throw ConfigError("outputs.lyapunov.t_total", "must be >= renorm_interval");
}

} // namespace detail

/// Builds a validated RunConfig from a parsed JSON document. Sections
/// override the selected preset (if any); frequency-dependent defaults
/// (h_init, h_max, t_end, Lyapunov horizon) follow the final omega.
inline RunConfig config_from_json(const json& doc) {
    using namespace detail;
    reject_unknown(doc, "", {"preset", "model", "initial", "integrator", "outputs"});

    RunConfig cfg;
    if (doc.contains("preset")) {
        if (!doc["preset"].is_string()) throw ConfigError("preset", "expected a preset id such as \"fig1\"");
        Preset p;
        try {
            p = preset(doc["preset"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError("preset", e.what());
        }
        cfg.preset = p.id;
        cfg.model = p.model;
        cfg.initial = p.initial;
        cfg.outputs.plots = {p.plot};
    }
    if (doc.contains("model")) parse_model(doc["model"], cfg.model);

    if (doc.contains("initial")) {
        const json& v = doc["initial"];
        reject_unknown(v, "initial", {"alpha", "zeta"});
        if (v.contains("alpha")) cfg.initial.alpha = get_complex(v["alpha"], "initial.alpha");
        if (v.contains("zeta")) cfg.initial.zeta = get_complex(v["zeta"], "initial.zeta");
    }
    cfg.initial.t = 0.0;
    if (cfg.model.group == GroupKind::Su11 && !(std::norm(cfg.initial.zeta) < 1.0))
        throw ConfigError("initial.zeta", "|zeta| must be < 1 for the su11 group");

    cfg.integrator = IntegratorConfig::for_model(cfg.model);
    if (doc.contains("integrator")) parse_integrator(doc["integrator"], cfg.integrator);
    validate_integrator(cfg.integrator);

    cfg.outputs.lyapunov = default_lyapunov_settings(cfg.model);
    if (doc.contains("outputs")) parse_outputs(doc["outputs"], cfg.outputs);
    else parse_outputs(json::object(), cfg.outputs);
    return cfg;
}

/// Parses the text of a configuration document.
inline RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed document: ") + e.what());
    }
    return config_from_json(doc);
}

/// Fully explicit document; parse_config(to_json(c).dump()) == c.
inline json to_json(const RunConfig& c) {
    using detail::put_complex;
    json doc;
    if (c.preset) doc["preset"] = *c.preset;
    doc["model"] = {{"group", to_string(c.model.group)},
                    {"spin_j", c.model.spin_j},
                    {"bargmann_k", c.model.bargmann_k},
                    {"m", c.model.m},
                    {"nu", c.model.nu},
                    {"omega", c.model.omega},
                    {"g", put_complex(c.model.g)},
                    {"lambda", detail::lambda_to_json(c.model.lambda_schedule)}};
    doc["initial"] = {{"alpha", put_complex(c.initial.alpha)}, {"zeta", put_complex(c.initial.zeta)}};
    const auto& i = c.integrator;
    doc["integrator"] = {{"rtol", i.rtol},         {"atol", i.atol},
                         {"h_init", i.h_init},     {"h_max", i.h_max},
                         {"safety", i.safety},     {"sample_interval", i.sample_interval},
                         {"t_end", i.t_end},       {"boundary_eps", i.boundary_eps},
                         {"max_steps", i.max_steps}};
    json plots = json::array();
    for (const auto& p : c.outputs.plots) {
        json pj = {{"kind", to_string(p.kind)}, {"x", p.x}, {"y", p.y}};
        if (p.t_max) pj["t_max"] = *p.t_max;
        plots.push_back(pj);
    }
    doc["outputs"] = {{"trajectory_csv", c.outputs.trajectory_csv},
                      {"diagnostics_json", c.outputs.diagnostics_json},
                      {"plots", plots},
                      {"lyapunov",
                       {{"t_total", c.outputs.lyapunov.t_total},
                        {"renorm_interval", c.outputs.lyapunov.renorm_interval},
                        {"perturbation", c.outputs.lyapunov.perturbation}}}};
    return doc;
}

/// The configuration a preset id resolves to with no overrides.
inline RunConfig preset_config(const std::string& id) { return config_from_json(json{{"preset", id}}); }

} // namespace jcsim
