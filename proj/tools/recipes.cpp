#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>

#include "common.hpp"
#include "recipes.hpp"
#include "stepprop/caustics.hpp"
#include "stepprop/classical.hpp"
#include "stepprop/eigenstates.hpp"
#include "stepprop/errors.hpp"
#include "stepprop/propagator.hpp"
#include "stepprop/spectroscopy.hpp"
#include "stepprop/wkb.hpp"

namespace stepprop::tools {

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

// Output sink of one recipe: CSV files, a gnuplot stub and a manifest.
class Recipe {
public:
    Recipe(std::string name, fs::path dir, double scale, int threads)
        : name_(std::move(name)), dir_(std::move(dir)), scale_(scale), threads_(threads) {}

    int n(int base) const { return std::max(2, static_cast<int>(std::lround(base * scale_))); }
    int threads() const { return threads_; }

    void write(const std::string& file, const Csv& csv, const std::string& note = "") {
        files_.push_back({file, csv.str()});
        manifest_.push_back({{"file", file}, {"note", note}});
    }
    void plot(const std::string& line) { gnuplot_ += line + "\n"; }
    void meta(const std::string& key, json value) { meta_[key] = std::move(value); }

    CommandOutput finish() {
        fs::create_directories(dir_);
        for (const auto& [file, body] : files_) {
            std::ofstream f(dir_ / file);
            if (!f) throw ValidationError("cannot write '" + (dir_ / file).string() + "'");
            f << body;
        }
        if (!gnuplot_.empty()) {
            std::ofstream g(dir_ / (name_ + ".gp"));
            g << "set datafile separator ','\nset key autotitle columnhead\n" << gnuplot_;
        }
        json out{{"figure", name_}, {"dir", dir_.string()}, {"files", manifest_}, {"meta", meta_}};
        return {out.dump(2) + "\n", out};
    }

private:
    std::string name_;
    fs::path dir_;
    double scale_;
    int threads_;
    std::vector<std::pair<std::string, std::string>> files_;
    json manifest_ = json::array();
    json meta_ = json::object();
    std::string gnuplot_;
};

StepModel ws(double V0, double alpha, double hbar) { return woods_saxon(1.0, V0, alpha, hbar); }
StepModel hv(double V0, double hbar) { return heaviside(1.0, V0, hbar); }

std::string tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// |G|^2 on the x0 x1 square at T = 10.
void propagator_map(Recipe& r, const StepModel& model, const std::string& file, double lo, double hi) {
    const std::vector<double> ax = linspace(lo, hi, r.n(41));
    const int n = static_cast<int>(ax.size());
    const auto G = parallel_map<cplx>(n * n, r.threads(), [&](int i) {
        return propagate(model, ax[i / n], ax[i % n], 10.0).G;
    });
    Csv csv({"x0", "x1", "abs2", "G_re", "G_im"});
    for (int i = 0; i < n * n; ++i) csv.row({ax[i / n], ax[i % n], std::norm(G[i]), G[i].real(), G[i].imag()});
    r.write(file, csv, "|G|^2 at T = 10, hbar = " + tag(model.hbar));
    r.plot("plot '" + file + "' using 1:2:3 with image");
}

void caustic_files(Recipe& r, const StepModel& model, const std::string& stem, double lo, double hi, bool stokes) {
    const std::vector<double> x0 = linspace(lo, hi, r.n(81));
    Csv c({"x0", "x1"});
    for (const CausticPoint& p : caustic_curve(model, 10.0, x0)) c.row({p.x0, p.x1});
    r.write(stem + "_caustic.csv", c, "caustic points at T = 10");
    if (!stokes) return;
    const std::vector<double> ax = linspace(lo, hi, r.n(41));
    Csv s({"x0", "x1"});
    for (const CausticPoint& p : stokes_lines(model, 10.0, ax, ax)) s.row({p.x0, p.x1});
    r.write(stem + "_stokes.csv", s, "Stokes line points at T = 10");
}

CommandOutput fig1(Recipe& r) {
    Csv csv({"x", "alpha1", "alpha3", "alpha5", "alpha7", "alpha9", "heaviside"});
    for (double x : linspace(-4.0, 4.0, r.n(801))) {
        std::vector<double> row{x};
        for (double a : {1.0, 3.0, 5.0, 7.0, 9.0}) row.push_back(potential_value(ws(1.0, a, 1.0), x));
        row.push_back(potential_value(hv(1.0, 1.0), x));
        csv.row(row);
    }
    r.write("potential.csv", csv, "V(x) for V0 = 1");
    r.plot("plot for [i=2:7] 'potential.csv' using 1:i with lines");
    return r.finish();
}

CommandOutput fig2(Recipe& r) {
    const StepModel m = ws(1.0, 1.0, 1.0);
    const double kc = 0.8, kp = 2.0;
    Csv csv({"x", "phi_c_re", "phi_c_im", "phi_plus_re", "phi_plus_im"});
    for (double x : linspace(-15.0, 15.0, r.n(601))) {
        const cplx c = eigenstate_ws(m, Branch::C, kc, x);
        const cplx p = eigenstate_ws(m, Branch::Plus, kp, x);
        csv.row({x, c.real(), c.imag(), p.real(), p.imag()});
    }
    r.write("eigenstates.csv", csv, "phi^c at k = 0.8 and phi^+ at k = 2, alpha = 1");
    r.meta("k_c", kc);
    r.meta("k_plus", kp);
    r.plot("plot 'eigenstates.csv' using 1:2 w l, '' using 1:3 w l");
    return r.finish();
}

CommandOutput fig3(Recipe& r) {
    const double kth = std::sqrt(2.0);
    std::vector<std::string> head{"k"};
    const std::vector<double> alphas{0.1, 1.0, 2.0, 3.0, 4.0};
    for (double a : alphas) {
        head.push_back("R2_alpha" + tag(a));
        head.push_back("T2_alpha" + tag(a));
    }
    head.push_back("R2_heaviside");
    head.push_back("T2_heaviside");
    Csv csv(head);
    for (double k : linspace(kth * (1.0 + 1e-6), 10.0, r.n(400))) {
        std::vector<double> row{k};
        for (double a : alphas) {
            row.push_back(reflection_rate(ws(1.0, a, 1.0), k));
            row.push_back(transmission_rate(ws(1.0, a, 1.0), k));
        }
        row.push_back(reflection_rate(hv(1.0, 1.0), k));
        row.push_back(transmission_rate(hv(1.0, 1.0), k));
        csv.row(row);
    }
    r.write("rates.csv", csv, "m = V0 = hbar = 1");
    r.plot("plot for [i=2:13] 'rates.csv' using 1:i with lines");
    return r.finish();
}

CommandOutput fig4(Recipe& r) {
    for (double h : {1.0, 0.5, 0.25}) propagator_map(r, ws(1.0, 1.0, h), "ws_hbar" + tag(h) + ".csv", -12.0, 4.0);
    caustic_files(r, ws(1.0, 1.0, 1.0), "ws", -12.0, 4.0, true);
    r.meta("cusps", [&] {
        json l = json::array();
        for (const CausticPoint& p : caustic_cusps(ws(1.0, 1.0, 1.0), 10.0, -12.0, 4.0)) l.push_back({p.x0, p.x1});
        return l;
    }());
    return r.finish();
}

CommandOutput fig5(Recipe& r) {
    for (double h : {1.0, 0.5, 0.25}) propagator_map(r, hv(1.0, h), "heaviside_hbar" + tag(h) + ".csv", -16.0, 4.0);
    caustic_files(r, hv(1.0, 1.0), "heaviside", -16.0, 4.0, true);
    r.meta("triangle_vertex", heaviside_caustic_extent(hv(1.0, 1.0), 10.0));
    return r.finish();
}

// Position along a real saddle at times t.
std::vector<double> trajectory(const StepModel& model, const ClassicalSaddle& s, const BoundarySpec& bvp,
                               const std::vector<double>& t) {
    std::vector<double> x;
    if (model.family == Family::WoodsSaxon) {
        const double v0 = initial_velocity(model, s, bvp);
        for (double ti : t) x.push_back(ti == 0.0 ? bvp.x0 : integrate_ivp(model, bvp.x0, v0, ti).x);
        return x;
    }
    const double d0 = -bvp.x0, d1 = -bvp.x1;  // distances to the step (left side)
    for (double ti : t) {
        switch (s.kind) {
            case SaddleKind::Direct:
                x.push_back(bvp.x0 + (bvp.x1 - bvp.x0) * ti / bvp.T);
                break;
            case SaddleKind::LowBounce: {
                const double v = (d0 + d1) / bvp.T;
                x.push_back(-std::abs(d0 - v * ti));
                break;
            }
            default: {
                const double v = std::sqrt(2.0 * model.V0 / model.m);
                const double t_in = d0 / v, t_out = bvp.T - d1 / v;
                x.push_back(ti < t_in ? bvp.x0 + v * ti : ti > t_out ? -v * (ti - t_out) : 0.0);
            }
        }
    }
    return x;
}

CommandOutput fig6(Recipe& r) {
    {
        const StepModel m = ws(1.0, 1.0, 1.0);
        Csv csv({"x1", "E", "T_direct", "T_bounce"});
        for (int j = 0; j <= 6; ++j) {
            const double x1 = -2.0 + 0.5 * j;
            const double vmax = potential_value(m, std::max(-5.0, x1));
            for (double E : linspace(vmax, 2.0, r.n(300))) {
                if (E <= vmax) continue;
                const double td = direct_time(m, E, -5.0, x1);
                const double tb = E < m.V0 ? bounce_time(m, E, -5.0, x1) : std::nan("");
                csv.row({x1, E, td, tb});
            }
        }
        r.write("time_energy.csv", csv, "x0 = -5, alpha = 1");
    }
    const BoundarySpec bvp{-4.0, -3.0, 10.0};
    const std::vector<double> t = linspace(0.0, bvp.T, r.n(201));
    for (const auto& [name, model] : std::vector<std::pair<std::string, StepModel>>{
             {"alpha1", ws(1.0, 1.0, 1.0)}, {"alpha5", ws(1.0, 5.0, 1.0)}, {"heaviside", hv(1.0, 1.0)}}) {
        Csv csv({"kind_index", "t", "x"});
        json kinds = json::array();
        for (const ClassicalSaddle& s : solve_real_paths(model, bvp)) {
            kinds.push_back({{"kind", to_string(s.kind)}, {"E", s.E.real()}, {"S", s.S.real()}});
            const std::vector<double> x = trajectory(model, s, bvp, t);
            for (std::size_t i = 0; i < t.size(); ++i) csv.row({double(static_cast<int>(s.kind)), t[i], x[i]});
        }
        r.write("paths_" + name + ".csv", csv, "x0 = -4, x1 = -3, T = 10");
        r.meta(name, kinds);
    }
    return r.finish();
}

CommandOutput fig7(Recipe& r) {
    for (double V0 : {0.25, 0.5, 1.0}) {
        propagator_map(r, hv(V0, 1.0), "heaviside_V0_" + tag(V0) + ".csv", -16.0, 4.0);
        caustic_files(r, hv(V0, 1.0), "heaviside_V0_" + tag(V0), -16.0, 4.0, false);
    }
    return r.finish();
}

CommandOutput fig8(Recipe& r) {
    for (double V0 : {1.0, 1.5, 2.0}) {
        propagator_map(r, ws(V0, 1.0, 1.0), "ws_V0_" + tag(V0) + ".csv", -12.0, 4.0);
        caustic_files(r, ws(V0, 1.0, 1.0), "ws_V0_" + tag(V0), -12.0, 4.0, false);
    }
    return r.finish();
}

CommandOutput fig9(Recipe& r, double hbar) {
    const StepModel m = ws(1.0, 5.0, hbar);
    const std::vector<double> x1 = linspace(-10.0, -8.0, r.n(81));
    Csv exact({"x1", "G_re", "G_im"});
    Csv wkb({"x1", "real_re", "real_im", "caustic_re", "caustic_im"});
    const auto G = parallel_map<cplx>(static_cast<int>(x1.size()), r.threads(),
                                      [&](int i) { return propagate(m, -5.0, x1[i], 10.0).G; });
    for (std::size_t i = 0; i < x1.size(); ++i) {
        const BoundarySpec bvp{-5.0, x1[i], 10.0};
        const cplx a = wkb_propagator(m, bvp, collect_saddles(m, bvp, SaddleSelection::Real));
        const cplx b = wkb_propagator(m, bvp, collect_saddles(m, bvp, SaddleSelection::RealCaustic));
        exact.row({x1[i], G[i].real(), G[i].imag()});
        wkb.row({x1[i], a.real(), a.imag(), b.real(), b.imag()});
    }
    r.write("exact.csv", exact, "x0 = -5, T = 10, alpha = 5, hbar = " + tag(hbar));
    r.write("wkb.csv", wkb, "real and real+caustic saddle sets");
    r.plot("plot 'exact.csv' using 1:2 w l, 'wkb.csv' using 1:2 w l, '' using 1:4 w l");
    return r.finish();
}

CommandOutput fig10(Recipe& r) {
    const StepModel m = ws(1.0, 1.0, 1.0);
    Csv csv({"x1", "E_re", "E_im", "S_re", "S_im", "v0_re", "v0_im"});
    cplx seed;
    bool have_seed = false;
    const int n = r.n(57);
    for (int i = 0; i < n; ++i) {
        const double x1 = -3.95 - 2.8 * i / (n - 1);
        const BoundarySpec bvp{-4.0, x1, 10.0};
        try {
            const ClassicalSaddle s = caustic_saddle(m, bvp, have_seed ? seed : caustic_seed(m, bvp));
            seed = s.E;
            have_seed = true;
            const cplx v0 = std::sqrt(2.0 * (s.E - potential_value(m, bvp.x0)) / m.m);
            csv.row({x1, s.E.real(), s.E.imag(), s.S.real(), s.S.imag(), v0.real(), v0.imag()});
        } catch (const NumericalError&) {
            have_seed = false;
        }
    }
    r.write("complex_saddles.csv", csv, "x0 = -4, T = 10, alpha = 1");
    const cplx pole = singularity_locations(m, 0, 0).front();
    r.meta("pole", {pole.real(), pole.imag()});
    return r.finish();
}

CommandOutput fig11(Recipe& r) {
    const StepModel m = ws(1.0, 5.0, 1.0);
    const std::vector<double> re = linspace(0.0, 2.0, r.n(161));
    const std::vector<double> im = linspace(-1.0, 1.0, r.n(161));
    Csv csv({"E_re", "E_im", "T_re", "T_im"});
    for (double a : re)
        for (double b : im) {
            const cplx E(a, b == 0.0 ? 1e-12 : b);
            const cplx T = -(time_of_flight(m, E, cplx(-5.0)) + time_of_flight(m, E, cplx(-9.25)));
            csv.row({a, b, T.real(), T.imag()});
        }
    r.write("bounce_time_plane.csv", csv, "x0 = -5, x1 = -9.25, alpha = 5");
    if (const auto mn = bounce_time_minimum(m, -5.0, -9.25)) r.meta("bounce_minimum", {{"E", mn->E}, {"T", mn->T}});
    return r.finish();
}

// t(x) and s(x) for E above the step, just above and below the real axis.
CommandOutput contour_figure(Recipe& r, double lo, double hi) {
    const StepModel m = ws(1.0, 1.0, 1.0);
    const double E = 2.0;
    Csv csv({"x", "side", "t_re", "t_im", "s_re", "s_im"});
    for (double side : {1.0, -1.0})
        for (double x : linspace(lo, hi, r.n(401))) {
            const cplx z(x, side * 1e-9);
            const cplx t = time_of_flight(m, E, z), s = reduced_action(m, E, z);
            csv.row({x, side, t.real(), t.imag(), s.real(), s.imag()});
        }
    r.write("contour.csv", csv, "E = 2, alpha = 1; side = +1 above, -1 below the axis");
    r.meta("turning_point", {turning_point(m, E).real(), turning_point(m, E).imag()});
    return r.finish();
}

// t(v) with t(E) = 0, in the coordinate v = V(x), for m = V0 = alpha = 1.
cplx time_in_v(cplx E, cplx v, double w_sign = 1.0) {
    const cplx w = w_sign * std::sqrt(E - v), A = E - 1.0;
    return (std::atanh(w / std::sqrt(A)) / std::sqrt(A) - std::atanh(w / std::sqrt(E)) / std::sqrt(E)) / std::sqrt(2.0);
}

CommandOutput fig14(Recipe& r) {
    const double E = 2.0;
    // Reflection point: Re t = 0 on the real v axis inside (0, V0); a is its
    // position x = atanh(2 v - 1).
    auto re_t = [&](double v) { return time_in_v(E, cplx(v, -1e-14)).real(); };
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t it = 100;
    const auto [vlo, vhi] = boost::math::tools::toms748_solve(re_t, 1e-9, 1.0 - 1e-9, tol, it);
    const double va = 0.5 * (vlo + vhi);
    const double a = std::atanh(2.0 * va - 1.0);
    Csv csv({"theta", "v_re", "v_im", "t_re", "t_im"});
    const int n = r.n(801);
    cplx prev, offset, start;
    for (int i = 0; i < n; ++i) {
        const double th = -kPi + 2.0 * kPi * (i + 0.5) / n;
        const cplx v = (E - va) * std::exp(cplx(0.0, th)) / 2.0 + (E + va) / 2.0;
        // The loop passes the turning point v = E at theta = 0, where the
        // velocity sqrt(E - v) reverses.
        cplx t = time_in_v(E, v, th < 0.0 ? 1.0 : -1.0) + offset;
        if (i > 0) {
            // Keep t continuous across the atanh cuts.
            const double jump = (t - prev).imag();
            for (double step : {kPi / std::sqrt(E - 1.0) / std::sqrt(2.0), kPi / std::sqrt(E) / std::sqrt(2.0)}) {
                const double k = std::round(jump / step);
                if (k != 0.0 && std::abs(jump - k * step) < 0.5 * step) {
                    offset -= cplx(0.0, k * step);
                    t -= cplx(0.0, k * step);
                    break;
                }
            }
        } else {
            start = t;
        }
        prev = t;
        const cplx tt = t - start;
        csv.row({th, v.real(), v.imag(), tt.real(), tt.imag()});
    }
    r.write("c0_loop.csv", csv, "E = 2, alpha = 1, v = (E - v_a) e^{i theta}/2 + (E + v_a)/2");
    r.meta("a", a);
    r.meta("v_a", va);
    r.plot("plot 'c0_loop.csv' using 1:4 w l, '' using 1:5 w l");
    return r.finish();
}

OmegaWindow window(const Recipe& r, int base) { return OmegaWindow{1.0, 12.0, r.n(base)}; }

CommandOutput fig15(Recipe& r) {
    const StepModel m = hv(1.0, 1.0);
    const BoundarySpec bvp{5.0, 4.0, 10.0};
    const OmegaWindow w = window(r, 2048);
    const OmegaSamples g = sample_propagator(m, bvp, w, {}, r.threads());
    Csv gs({"omega", "G_re", "G_im"});
    for (int i = 0; i < w.n_omega; ++i) gs.row({w.omega(i), g.G[i].real(), g.G[i].imag()});
    r.write("propagator_omega.csv", gs, "x0 = 5, x1 = 4, T = 10");
    const SpectrumSeries f = fourier_transform(g, linspace(-15.0, 0.0, r.n(1501)));
    Csv fs({"tau", "absF2"});
    for (std::size_t i = 0; i < f.grid.size(); ++i) fs.row({f.grid[i], f.values[i]});
    r.write("fourier.csv", fs, "|F(tau)|^2");
    json actions = json::array();
    for (const ClassicalSaddle& s : solve_real_paths(m, bvp)) actions.push_back(s.S.real());
    json peaks = json::array();
    for (const Peak& p : f.peaks) peaks.push_back(peak_action(f, p));
    r.meta("classical_actions", actions);
    r.meta("peak_actions", peaks);
    // Right-side start against the free particle.
    Csv ll({"hbar", "x1", "G_re", "G_im", "free_re", "free_im"});
    for (double h : {1.0, 0.5, 0.25})
        for (double x1 : linspace(0.0, 20.0, r.n(401))) {
            const cplx G = propagate(hv(1.0, h), 10.0, x1, 10.0).G;
            const cplx F = free_propagator(1.0, h, 10.0, x1, 10.0);
            ll.row({h, x1, G.real(), G.imag(), F.real(), F.imag()});
        }
    r.write("right_right_vs_free.csv", ll, "x0 = 10, T = 10");
    r.plot("plot 'fourier.csv' using 1:2 w l");
    return r.finish();
}

CommandOutput fig16(Recipe& r) {
    const StepModel m = ws(1.0, 5.0, 1.0);
    const BoundarySpec bvp{-5.0, -9.25, 10.0};
    const OmegaWindow w = window(r, 512);
    const std::vector<double> s = linspace(0.0, 2.0, r.n(201));
    const OmegaSamples exact = sample_propagator(m, bvp, w, {}, r.threads());
    const SpectrumSeries le = laplace_transform(exact, s);
    std::vector<std::string> head{"s", "absL"};
    std::vector<SpectrumSeries> models;
    json actions = json::array();
    for (SaddleSelection sel :
         {SaddleSelection::Real, SaddleSelection::RealCaustic, SaddleSelection::RealCausticTopological}) {
        const auto saddles = collect_saddles(m, bvp, sel);
        models.push_back(laplace_transform(sample_wkb(m, bvp, w, saddles), s));
        head.push_back("residue_" + to_string(sel));
        if (sel == SaddleSelection::RealCausticTopological)
            for (const ClassicalSaddle& c : saddles) actions.push_back({c.S.real(), c.S.imag()});
    }
    Csv csv(head);
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<double> row{s[i], std::abs(le.transform[i])};
        for (const SpectrumSeries& ms : models) row.push_back(std::abs(le.transform[i]) - std::abs(ms.transform[i]));
        csv.row(row);
    }
    r.write("laplace_residue.csv", csv, "x0 = -5, x1 = -9.25, T = 10, alpha = 5");
    json norms = json::array();
    for (double v : residue_against_wkb(exact, m, bvp, s,
                                        {collect_saddles(m, bvp, SaddleSelection::Real),
                                         collect_saddles(m, bvp, SaddleSelection::RealCaustic),
                                         collect_saddles(m, bvp, SaddleSelection::RealCausticTopological)}))
        norms.push_back(v);
    r.meta("actions", actions);
    r.meta("residue_norms", norms);
    return r.finish();
}

// log |F(tau)| over (x1, tau) with the real (and relevant complex) actions.
CommandOutput band_structure(Recipe& r, const StepModel& m, int n_x1, int n_omega) {
    const OmegaWindow w = window(r, n_omega);
    const std::vector<double> tau = linspace(-25.0, 5.0, r.n(301));
    for (double x0 : {-5.0, 5.0}) {
        const std::vector<double> x1 = linspace(-10.0, 10.0, r.n(n_x1));
        const auto spectra = parallel_map<SpectrumSeries>(static_cast<int>(x1.size()), r.threads(), [&](int i) {
            return fourier_transform(sample_propagator(m, {x0, x1[i], 10.0}, w), tau);
        });
        Csv csv({"x1", "tau", "log10_absF2"});
        Csv act({"x1", "kind_index", "S_re", "S_im"});
        for (std::size_t i = 0; i < x1.size(); ++i) {
            for (std::size_t j = 0; j < tau.size(); ++j)
                csv.row({x1[i], tau[j], std::log10(std::max(spectra[i].values[j], 1e-300))});
            const BoundarySpec bvp{x0, x1[i], 10.0};
            std::vector<ClassicalSaddle> saddles;
            try {
                saddles = collect_saddles(m, bvp, SaddleSelection::RealCaustic);
            } catch (const std::exception&) {
                try {
                    saddles = solve_real_paths(m, bvp);
                } catch (const NoSolutionError&) {
                }
            }
            for (const ClassicalSaddle& s : saddles)
                act.row({x1[i], double(static_cast<int>(s.kind)), s.S.real(), s.S.imag()});
        }
        r.write("fourier_x0_" + tag(x0) + ".csv", csv, "T = 10, window [1, 12]");
        r.write("actions_x0_" + tag(x0) + ".csv", act, "saddle actions; compare with -tau");
    }
    return r.finish();
}

}  // namespace

std::vector<std::string> recipe_names() {
    std::vector<std::string> v;
    for (int i = 1; i <= 18; ++i) v.push_back("fig" + std::to_string(i));
    return v;
}

CommandOutput reproduce(const RunConfig& cfg) {
    ParamReader p(cfg.params, "reproduce");
    const std::string fig = p.text("figure", "");
    const std::string dir = p.text("out_dir", "figures/" + fig);
    const double scale = p.number("scale", 1.0);
    p.finish();
    if (!(scale > 0.0) || scale > 10.0) throw ValidationError("reproduce: scale must be in (0, 10]");
    Recipe r(fig, dir, scale, cfg.threads);
    static const std::map<std::string, std::function<CommandOutput(Recipe&, double)>> table{
        {"fig1", [](Recipe& r, double) { return fig1(r); }},
        {"fig2", [](Recipe& r, double) { return fig2(r); }},
        {"fig3", [](Recipe& r, double) { return fig3(r); }},
        {"fig4", [](Recipe& r, double) { return fig4(r); }},
        {"fig5", [](Recipe& r, double) { return fig5(r); }},
        {"fig6", [](Recipe& r, double) { return fig6(r); }},
        {"fig7", [](Recipe& r, double) { return fig7(r); }},
        {"fig8", [](Recipe& r, double) { return fig8(r); }},
        {"fig9", [](Recipe& r, double h) { return fig9(r, h); }},
        {"fig10", [](Recipe& r, double) { return fig10(r); }},
        {"fig11", [](Recipe& r, double) { return fig11(r); }},
        {"fig12", [](Recipe& r, double) { return contour_figure(r, -6.0, 0.0); }},
        {"fig13", [](Recipe& r, double) { return contour_figure(r, 0.0, 6.0); }},
        {"fig14", [](Recipe& r, double) { return fig14(r); }},
        {"fig15", [](Recipe& r, double) { return fig15(r); }},
        {"fig16", [](Recipe& r, double) { return fig16(r); }},
        {"fig17", [](Recipe& r, double) { return band_structure(r, hv(1.0, 1.0), 41, 1024); }},
        {"fig18", [](Recipe& r, double) { return band_structure(r, ws(1.0, 5.0, 1.0), 21, 384); }},
    };
    const auto it = table.find(fig);
    if (it == table.end()) throw ValidationError("reproduce: unknown figure '" + fig + "' (fig1 .. fig18)");
    return it->second(r, cfg.model.hbar);
}

}  // namespace stepprop::tools
