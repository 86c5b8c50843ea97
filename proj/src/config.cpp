#include "stepprop/config.hpp"

#include <cmath>

#include "stepprop/errors.hpp"

namespace stepprop {

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ValidationError("unknown output format '" + s + "'");
}

ParamReader::ParamReader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ValidationError(where_ + ": expected a JSON object");
}

bool ParamReader::has(const std::string& key) const { return obj_.contains(key); }

const json& ParamReader::raw(const std::string& key) {
    if (!obj_.contains(key)) throw ValidationError(where_ + ": missing key '" + key + "'");
    used_.insert(key);
    return obj_.at(key);
}

double ParamReader::number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ValidationError(where_ + ": '" + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(where_ + ": '" + key + "' must be finite");
    return d;
}

double ParamReader::number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
}

int ParamReader::integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ValidationError(where_ + ": '" + key + "' must be an integer");
    return v.get<int>();
}

std::string ParamReader::text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw ValidationError(where_ + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

void ParamReader::finish() const {
    for (const auto& [k, v] : obj_.items())
        if (!used_.count(k)) throw ValidationError(where_ + ": unknown key '" + k + "'");
}

json to_json(const StepModel& model) {
    json j{{"family", to_string(model.family)}, {"m", model.m}, {"V0", model.V0}, {"hbar", model.hbar}};
    if (model.family == Family::WoodsSaxon) j["alpha"] = model.alpha;
    return j;
}

StepModel model_from_json(const json& j) {
    ParamReader r(j, "model");
    StepModel m;
    m.family = family_from_string(r.text("family", "woods_saxon"));
    m.m = r.number("m", 1.0);
    m.V0 = r.number("V0", 1.0);
    m.hbar = r.number("hbar", 1.0);
    if (m.family == Family::WoodsSaxon) m.alpha = r.number("alpha", 1.0);
    r.finish();
    m.validate();
    return m;
}

json to_json(const QuadratureConfig& c) {
    return {{"theta", c.theta},
            {"abs_tol", c.abs_tol},
            {"rel_tol", c.rel_tol},
            {"k_max_factor", c.k_max_factor},
            {"max_evals", c.max_evals}};
}

QuadratureConfig quadrature_from_json(const json& j) {
    ParamReader r(j, "quadrature");
    QuadratureConfig c;
    c.theta = r.number("theta", c.theta);
    c.abs_tol = r.number("abs_tol", c.abs_tol);
    c.rel_tol = r.number("rel_tol", c.rel_tol);
    c.k_max_factor = r.number("k_max_factor", c.k_max_factor);
    c.max_evals = static_cast<std::size_t>(r.integer("max_evals", static_cast<int>(c.max_evals)));
    r.finish();
    c.validate();
    return c;
}

json to_json(const OmegaWindow& w) { return {{"A", w.A}, {"B", w.B}, {"n_omega", w.n_omega}}; }

OmegaWindow window_from_json(const json& j) {
    ParamReader r(j, "window");
    OmegaWindow w;
    w.A = r.number("A", w.A);
    w.B = r.number("B", w.B);
    w.n_omega = r.integer("n_omega", w.n_omega);
    r.finish();
    w.validate();
    return w;
}

json to_json(const GridSpec& g) {
    return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"n_x", g.n_x}, {"dt", g.dt}, {"absorbing_width", g.absorbing_width}};
}

GridSpec grid_from_json(const json& j) {
    ParamReader r(j, "grid");
    GridSpec g;
    g.x_min = r.number("x_min", g.x_min);
    g.x_max = r.number("x_max", g.x_max);
    g.n_x = static_cast<std::size_t>(r.integer("n_x", static_cast<int>(g.n_x)));
    g.dt = r.number("dt", g.dt);
    g.absorbing_width = r.number("absorbing_width", g.absorbing_width);
    r.finish();
    g.validate();
    return g;
}

json to_json(const RunConfig& c) {
    return {{"command", c.command},
            {"model", to_json(c.model)},
            {"params", c.params},
            {"output", c.output},
            {"format", to_string(c.format)},
            {"threads", c.threads}};
}

RunConfig run_config_from_json(const json& j) {
    ParamReader r(j, "config");
    RunConfig c;
    c.command = r.text("command", "");
    if (c.command.empty()) throw ValidationError("config: missing key 'command'");
    c.model = model_from_json(r.has("model") ? r.raw("model") : json::object());
    if (r.has("params")) {
        c.params = r.raw("params");
        if (!c.params.is_object()) throw ValidationError("config: 'params' must be an object");
    }
    c.output = r.text("output", "");
    c.format = output_format_from_string(r.text("format", "csv"));
    c.threads = r.integer("threads", 1);
    if (c.threads < 1) throw ValidationError("config: threads must be at least 1");
    r.finish();
    return c;
}

RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: malformed JSON: ") + e.what());
    }
    return run_config_from_json(j);
}

}  // namespace stepprop
