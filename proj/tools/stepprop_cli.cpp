#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "common.hpp"
#include "recipes.hpp"
#include "stepprop/caustics.hpp"
#include "stepprop/classical.hpp"
#include "stepprop/eigenstates.hpp"
#include "stepprop/errors.hpp"
#include "stepprop/oracle.hpp"
#include "stepprop/propagator.hpp"
#include "stepprop/spectroscopy.hpp"
#include "stepprop/wkb.hpp"

namespace stepprop::tools {

namespace {

QuadratureConfig quadrature_of(ParamReader& r) {
    return r.has("quadrature") ? quadrature_from_json(r.raw("quadrature")) : QuadratureConfig{};
}

// Either a single value under `key` or a range key_min/key_max/n_key.
std::vector<double> axis(ParamReader& r, const std::string& key) {
    if (r.has(key)) return {r.number(key)};
    static const std::map<std::string, std::pair<double, double>> defaults{{"tau", {-20.0, 5.0}}, {"s", {0.0, 2.0}}};
    const auto d = defaults.find(key);
    const double lo = d == defaults.end() ? r.number(key + "_min") : r.number(key + "_min", d->second.first);
    const double hi = d == defaults.end() ? r.number(key + "_max") : r.number(key + "_max", d->second.second);
    const int n = r.integer("n_" + key, key == "tau" ? 501 : 101);
    if (n < 1 || (n > 1 && !(hi > lo))) throw ValidationError(key + ": need n >= 1 and " + key + "_min < " + key + "_max");
    return linspace(lo, hi, n);
}

json saddle_json(const ClassicalSaddle& s) {
    return {{"kind", to_string(s.kind)}, {"E_re", s.E.real()},   {"E_im", s.E.imag()},
            {"S_re", s.S.real()},        {"S_im", s.S.imag()},   {"vv_re", s.vv.real()},
            {"vv_im", s.vv.imag()},      {"relevant", s.relevant}, {"at_threshold", s.at_threshold}};
}

CommandOutput cmd_rates(const RunConfig& c) {
    ParamReader r(c.params, "rates");
    const double kth = c.model.threshold_momentum();
    const double k_min = r.number("k_min", kth * (1.0 + 1e-9) + 1e-9);
    const double k_max = r.number("k_max", 10.0);
    const int n = r.integer("n", 200);
    r.finish();
    if (!(k_max > k_min) || n < 2 || k_min <= 0.0) throw ValidationError("rates: need 0 < k_min < k_max and n >= 2");
    Csv csv({"k", "R2", "T2", "family", "alpha", "hbar"});
    const std::string family = to_string(c.model.family);
    const double alpha = c.model.family == Family::WoodsSaxon ? c.model.alpha : std::nan("");
    for (double k : linspace(k_min, k_max, n)) {
        const double R = k > kth ? reflection_rate(c.model, k) : 1.0;
        const double T = k > kth ? transmission_rate(c.model, k) : 0.0;
        csv.cells({Csv::fmt(k), Csv::fmt(R), Csv::fmt(T), family, Csv::fmt(alpha), Csv::fmt(c.model.hbar)});
    }
    return {csv.str(), {{"threshold_momentum", kth}}};
}

CommandOutput cmd_propagate(const RunConfig& c) {
    ParamReader r(c.params, "propagate");
    const double x0 = r.number("x0");
    const double T = r.number("T");
    const std::vector<double> x1 = axis(r, "x1");
    const QuadratureConfig q = quadrature_of(r);
    r.finish();
    const auto rows = parallel_map<PropagatorSample>(static_cast<int>(x1.size()), c.threads,
                                                     [&](int i) { return propagate(c.model, x0, x1[i], T, q); });
    Csv csv({"x0", "x1", "T", "Re(G)", "Im(G)", "abs2", "est_error", "n_evals"});
    for (const PropagatorSample& s : rows)
        csv.row({s.x0, s.x1, s.T, s.G.real(), s.G.imag(), std::norm(s.G), s.est_error, double(s.n_evals)});
    return {csv.str(), {}};
}

CommandOutput cmd_energy(const RunConfig& c) {
    ParamReader r(c.params, "energy");
    const double x0 = r.number("x0");
    const double x1 = r.number("x1");
    const cplx E(r.number("E_re"), r.number("E_im", 0.0));
    const QuadratureConfig q = quadrature_of(r);
    r.finish();
    const EnergySample s = energy_propagator(c.model, x0, x1, E, q);
    Csv csv({"x0", "x1", "Re(E)", "Im(E)", "Re(K)", "Im(K)", "est_error", "n_evals"});
    csv.row({x0, x1, E.real(), E.imag(), s.K.real(), s.K.imag(), s.est_error, double(s.n_evals)});
    return {csv.str(), {}};
}

CommandOutput cmd_classical(const RunConfig& c) {
    ParamReader r(c.params, "classical");
    const BoundarySpec bvp{r.number("x0"), r.number("x1"), r.number("T")};
    const bool complex_saddles = r.integer("complex", 1) != 0;
    r.finish();
    std::vector<ClassicalSaddle> all = solve_real_paths(c.model, bvp);
    if (complex_saddles && c.model.family == Family::WoodsSaxon && c.model.V0 > 0.0) {
        if (all.size() < 3)
            if (auto s = relevant_caustic_saddle(c.model, bvp)) all.push_back(*s);
        try {
            all.push_back(topological_saddle(c.model, bvp));
        } catch (const NoSolutionError&) {
        }
    }
    json list = json::array();
    for (const ClassicalSaddle& s : all) list.push_back(saddle_json(s));
    return {list.dump(2) + "\n", {}};
}

CommandOutput cmd_caustics(const RunConfig& c) {
    ParamReader r(c.params, "caustics");
    const double T = r.number("T");
    const std::vector<double> x0 = axis(r, "x0");
    const int cusps = r.integer("cusps", 1);
    r.finish();
    const auto chunks = parallel_map<std::vector<CausticPoint>>(static_cast<int>(x0.size()), c.threads,
                                                               [&](int i) { return caustic_curve(c.model, T, {x0[i]}); });
    Csv csv({"x0", "x1"});
    for (const auto& ch : chunks)
        for (const CausticPoint& p : ch) csv.row({p.x0, p.x1});
    json meta = json::object();
    if (cusps && x0.size() > 1) {
        json list = json::array();
        for (const CausticPoint& p : caustic_cusps(c.model, T, x0.front(), x0.back())) list.push_back({p.x0, p.x1});
        meta["cusps"] = list;
    }
    return {csv.str(), meta};
}

CommandOutput cmd_stokes(const RunConfig& c) {
    ParamReader r(c.params, "stokes");
    const double T = r.number("T");
    const std::vector<double> x0 = axis(r, "x0");
    const std::vector<double> x1 = axis(r, "x1");
    r.finish();
    Csv csv({"x0", "x1"});
    for (const CausticPoint& p : stokes_lines(c.model, T, x0, x1)) csv.row({p.x0, p.x1});
    return {csv.str(), {}};
}

CommandOutput cmd_wkb(const RunConfig& c) {
    ParamReader r(c.params, "wkb");
    const double x0 = r.number("x0");
    const double T = r.number("T");
    const std::vector<double> x1 = axis(r, "x1");
    const SaddleSelection sel = saddle_selection_from_string(r.text("saddles", "real"));
    r.finish();
    const auto rows = parallel_map<cplx>(static_cast<int>(x1.size()), c.threads, [&](int i) {
        const BoundarySpec bvp{x0, x1[i], T};
        return wkb_propagator(c.model, bvp, collect_saddles(c.model, bvp, sel));
    });
    Csv csv({"x0", "x1", "T", "Re(G)", "Im(G)", "abs2", "est_error", "n_evals"});
    for (std::size_t i = 0; i < rows.size(); ++i)
        csv.row({x0, x1[i], T, rows[i].real(), rows[i].imag(), std::norm(rows[i]), 0.0, 0.0});
    return {csv.str(), {{"saddles", to_string(sel)}}};
}

CommandOutput cmd_spectrum(const RunConfig& c) {
    ParamReader r(c.params, "spectrum");
    const BoundarySpec bvp{r.number("x0"), r.number("x1"), r.number("T")};
    const SpectrumKind kind = spectrum_kind_from_string(r.text("kind", "fourier"));
    const OmegaWindow w = r.has("window") ? window_from_json(r.raw("window")) : OmegaWindow{};
    const std::string gkey = kind == SpectrumKind::Fourier ? "tau" : "s";
    const std::vector<double> grid = axis(r, gkey);
    const QuadratureConfig q = quadrature_of(r);
    r.finish();
    const OmegaSamples samples = sample_propagator(c.model, bvp, w, q, c.threads);
    const SpectrumSeries s = kind == SpectrumKind::Fourier ? fourier_transform(samples, grid) : laplace_transform(samples, grid);
    Csv csv({"grid", "value", "err"});
    for (std::size_t i = 0; i < s.grid.size(); ++i) csv.row({s.grid[i], s.values[i], s.errors[i]});
    json peaks = json::array();
    for (const Peak& p : s.peaks)
        peaks.push_back({{"location", p.location}, {"action", peak_action(s, p)}, {"height", p.height}, {"width", p.width}});
    return {csv.str(), {{"peaks", peaks}}};
}

CommandOutput cmd_oracle(const RunConfig& c) {
    ParamReader r(c.params, "oracle");
    const double center = r.number("center", -15.0);
    const double width = r.number("width", 1.0);
    const double k0 = r.number("k0", 1.2);
    const double T = r.number("T", 10.0);
    const GridSpec g = r.has("grid") ? grid_from_json(r.raw("grid")) : GridSpec{};
    r.finish();
    const std::vector<double> x = g.points();
    const std::vector<cplx> psi0 = gaussian_packet(x, center, width, k0, c.model.hbar);
    const std::vector<cplx> psi = evolve_packet(c.model, psi0, g, T);
    Csv csv({"x", "psi_re", "psi_im", "abs2"});
    for (std::size_t i = 0; i < x.size(); ++i) csv.row({x[i], psi[i].real(), psi[i].imag(), std::norm(psi[i])});
    return {csv.str(), {{"norm", grid_norm(psi, g.dx())}}};
}

// CSV body as a JSON array of records, for --format json.
std::string csv_to_json(const std::string& body) {
    std::istringstream in(body);
    std::string line;
    auto split = [](const std::string& l) {
        std::vector<std::string> out;
        std::stringstream ss(l);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        return out;
    };
    std::getline(in, line);
    const std::vector<std::string> head = split(line);
    json rows = json::array();
    while (std::getline(in, line)) {
        const std::vector<std::string> cells = split(line);
        json rec = json::object();
        for (std::size_t i = 0; i < head.size() && i < cells.size(); ++i) {
            char* end = nullptr;
            const double v = std::strtod(cells[i].c_str(), &end);
            if (end && *end == '\0' && !cells[i].empty())
                rec[head[i]] = std::isfinite(v) ? json(v) : json(nullptr);
            else
                rec[head[i]] = cells[i];
        }
        rows.push_back(rec);
    }
    return rows.dump(2) + "\n";
}

}  // namespace

CommandOutput execute(const RunConfig& cfg) {
    static const std::map<std::string, CommandOutput (*)(const RunConfig&)> table{
        {"rates", cmd_rates},     {"propagate", cmd_propagate}, {"energy", cmd_energy},
        {"classical", cmd_classical}, {"caustics", cmd_caustics}, {"stokes", cmd_stokes},
        {"wkb", cmd_wkb},         {"spectrum", cmd_spectrum},   {"oracle", cmd_oracle},
        {"reproduce", reproduce}};
    const auto it = table.find(cfg.command);
    if (it == table.end()) throw ValidationError("unknown command '" + cfg.command + "'");
    CommandOutput res = it->second(cfg);
    const bool csv_body = cfg.command != "classical" && cfg.command != "reproduce";
    if (csv_body && cfg.format == OutputFormat::Json) res.body = csv_to_json(res.body);
    return res;
}

}  // namespace stepprop::tools

namespace {

using namespace stepprop;
using stepprop::tools::CommandOutput;

void error_record(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

json read_json_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(what + ": malformed JSON: " + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return read_json_text(ss.str(), path);
}

// Model from --model (JSON text or a file holding it), then individual flags.
struct ModelFlags {
    std::string model_json;
    std::map<std::string, std::string> given;

    void attach(CLI::App* app) {
        app->add_option("--model", model_json, "model as JSON text or a JSON file");
        for (const char* key : {"family", "m", "V0", "alpha", "hbar"})
            app->add_option_function<std::string>(
                std::string("--") + key, [this, key](const std::string& v) { given[key] = v; }, key);
    }
    StepModel model() const {
        json j = json::object();
        if (!model_json.empty()) {
            const bool inline_text = model_json.find('{') != std::string::npos;
            j = inline_text ? read_json_text(model_json, "--model") : read_json_file(model_json);
            if (!j.is_object()) throw ValidationError("--model: expected a JSON object");
        }
        for (const auto& [k, v] : given) {
            if (k == "family") {
                j[k] = v;
                continue;
            }
            try {
                std::size_t used = 0;
                j[k] = std::stod(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
            } catch (const std::logic_error&) {
                throw ValidationError("--" + k + ": not a number: '" + v + "'");
            }
        }
        if (j.contains("family") && j["family"].is_string() && j["family"] == "heaviside") j.erase("alpha");
        if (!j.contains("family")) j["family"] = "woods-saxon";
        return model_from_json(j);
    }
};

void write_output(const RunConfig& cfg, const CommandOutput& res) {
    if (cfg.output.empty()) {
        std::cout << res.body;
        return;
    }
    const std::filesystem::path p(cfg.output);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    {
        std::ofstream f(p);
        if (!f) throw ValidationError("cannot open output file '" + cfg.output + "'");
        f << res.body;
    }
    std::ofstream m(cfg.output + ".meta.json");
    m << json{{"config", to_json(cfg)}, {"result", res.meta}}.dump(2) << '\n';
}

std::string flag_of(std::string key) {
    for (char& ch : key)
        if (ch == '_') ch = '-';
    return "--" + key;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Propagators, classical saddles and spectra for smooth and sharp step potentials"};
    app.require_subcommand(1);

    ModelFlags mf;
    std::string out, format = "csv", config_path;
    int threads = 1;
    // Command parameters collected from flags; only those given are forwarded.
    json params = json::object();
    std::string bad_flag;

    auto sub = [&](const std::string& name, const std::string& help) {
        CLI::App* s = app.add_subcommand(name, help);
        mf.attach(s);
        s->add_option("--out", out, "output file (default stdout)");
        s->add_option("--format", format, "csv | json");
        s->add_option("--threads", threads, "worker threads for grid sweeps");
        return s;
    };
    auto num = [&](CLI::App* s, const std::string& key, const std::string& help) {
        s->add_option_function<double>(flag_of(key), [&params, key](const double& v) { params[key] = v; }, help);
    };
    auto count = [&](CLI::App* s, const std::string& key, const std::string& help) {
        s->add_option_function<int>(flag_of(key), [&params, key](const int& v) { params[key] = v; }, help);
    };
    auto txt = [&](CLI::App* s, const std::string& key, const std::string& help) {
        s->add_option_function<std::string>(flag_of(key), [&params, key](const std::string& v) { params[key] = v; },
                                            help);
    };
    // --key v, or --key-range a:b:n (also --key-min/--key-max/--n-key).
    auto range = [&](CLI::App* s, const std::string& key) {
        num(s, key, "single value");
        num(s, key + "_min", "range start");
        num(s, key + "_max", "range end");
        count(s, "n_" + key, "range points");
        s->add_option_function<std::string>(
            flag_of(key + "_range"),
            [&params, &bad_flag, key](const std::string& v) {
                double a = 0.0, b = 0.0;
                int n = 0;
                char c1 = 0, c2 = 0, tail = 0;
                if (std::sscanf(v.c_str(), "%lf%c%lf%c%d%c", &a, &c1, &b, &c2, &n, &tail) != 5 || c1 != ':' ||
                    c2 != ':') {
                    bad_flag = flag_of(key + "_range") + " expects a:b:n, got '" + v + "'";
                    return;
                }
                params[key + "_min"] = a;
                params[key + "_max"] = b;
                params["n_" + key] = n;
            },
            "a:b:n");
    };
    auto quadrature = [&](CLI::App* s) {
        s->add_option_function<std::string>(
            "--quadrature", [&params](const std::string& v) { params["quadrature"] = read_json_text(v, "--quadrature"); },
            "quadrature settings as JSON");
    };

    CLI::App* rates = sub("rates", "reflection and transmission rates over k");
    num(rates, "k_min", "first k");
    num(rates, "k_max", "last k");
    count(rates, "n", "number of k values");

    CLI::App* prop = sub("propagate", "real-time propagator G(x1, x0; T)");
    num(prop, "x0", "initial position");
    num(prop, "T", "propagation time");
    range(prop, "x1");
    quadrature(prop);

    CLI::App* energy = sub("energy", "energy propagator K(x1, x0; E)");
    for (const char* k : {"x0", "x1", "E_re", "E_im"}) num(energy, k, k);
    quadrature(energy);

    CLI::App* classical = sub("classical", "real and complex classical saddles (JSON list)");
    for (const char* k : {"x0", "x1", "T"}) num(classical, k, k);
    count(classical, "complex", "include caustic and topological saddles (1/0)");

    CLI::App* caustics = sub("caustics", "caustic curve at fixed T");
    num(caustics, "T", "propagation time");
    range(caustics, "x0");
    count(caustics, "cusps", "also locate cusps (1/0)");

    CLI::App* stokes = sub("stokes", "Stokes lines at fixed T");
    num(stokes, "T", "propagation time");
    range(stokes, "x0");
    range(stokes, "x1");

    CLI::App* wkb = sub("wkb", "WKB reconstruction of the propagator");
    num(wkb, "x0", "initial position");
    num(wkb, "T", "propagation time");
    range(wkb, "x1");
    txt(wkb, "saddles", "real | real+caustic | real+caustic+topological");

    CLI::App* spectrum = sub("spectrum", "Fourier / Laplace transform in omega = 1/hbar");
    for (const char* k : {"x0", "x1", "T"}) num(spectrum, k, k);
    txt(spectrum, "kind", "fourier | laplace");
    OmegaWindow window;
    spectrum->add_option("--A", window.A, "window start");
    spectrum->add_option("--B", window.B, "window end");
    spectrum->add_option("--n-omega", window.n_omega, "omega samples");
    range(spectrum, "tau");
    range(spectrum, "s");
    quadrature(spectrum);

    CLI::App* oracle = sub("oracle", "Crank-Nicolson evolution of a Gaussian packet");
    for (const char* k : {"center", "width", "k0", "T"}) num(oracle, k, k);
    GridSpec grid;
    oracle->add_option("--x-min", grid.x_min);
    oracle->add_option("--x-max", grid.x_max);
    oracle->add_option("--n-x", grid.n_x);
    oracle->add_option("--dt", grid.dt);
    oracle->add_option("--absorbing-width", grid.absorbing_width);

    CLI::App* repro = sub("reproduce", "figure data recipes (fig1 .. fig18)");
    repro->add_option_function<std::string>(
             "figure", [&params](const std::string& v) { params["figure"] = v; }, "fig1 .. fig18")
        ->required();
    txt(repro, "out_dir", "output directory");
    num(repro, "scale", "grid resolution multiplier");

    CLI::App* run = app.add_subcommand("run", "execute a JSON run configuration (or a .meta.json echo)");
    run->add_option("--config", config_path, "configuration file")->required();
    run->add_option("--out", out, "override the output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_record("validation", e.what());
        return 2;
    } catch (const ValidationError& e) {
        error_record("validation", e.what());
        return 2;
    }

    try {
        if (!bad_flag.empty()) throw ValidationError(bad_flag);
        RunConfig cfg;
        if (run->parsed()) {
            json j = read_json_file(config_path);
            if (j.is_object() && j.contains("config") && j.contains("result")) j = j.at("config");
            cfg = run_config_from_json(j);
            if (!out.empty()) cfg.output = out;
        } else {
            CLI::App* s = app.get_subcommands().front();
            cfg.command = s->get_name();
            cfg.model = mf.model();
            cfg.output = out;
            cfg.format = output_format_from_string(format);
            if (threads < 1) throw ValidationError("--threads must be at least 1");
            cfg.threads = threads;
            if (s == spectrum) params["window"] = to_json(window);
            if (s == oracle) params["grid"] = to_json(grid);
            cfg.params = params;
        }
        const CommandOutput res = tools::execute(cfg);
        write_output(cfg, res);
        return 0;
    } catch (const ValidationError& e) {
        error_record("validation", e.what());
        return 2;
    } catch (const NumericalError& e) {
        error_record("numerical", e.what());
        return 3;
    } catch (const std::exception& e) {
        error_record("internal", e.what());
        return 1;
    }
}
