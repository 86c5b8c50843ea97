#include "stepprop/caustics.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "stepprop/errors.hpp"

namespace stepprop {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 4>;  // x, v, J, J'

// |alpha x| beyond which V' and V'' are below e^{-40} relative to V0 alpha^2;
// motion there is integrated in closed form.
constexpr double kFlatEdge = 20.0;
constexpr int kRootNodes = 400;

void free_flight(State& s, double dt) {
    s[0] += s[1] * dt;
    s[2] += s[3] * dt;
}

double energy(const StepModel& model, const State& s) {
    return 0.5 * model.m * s[1] * s[1] + potential_value(model, s[0]);
}

struct Root {
    double v0;
    double x1;
};

std::vector<Root> jacobian_roots(const StepModel& model, double x0, double T, const std::vector<double>& nodes) {
    std::vector<Root> out;
    std::vector<double> J(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) J[i] = integrate_ivp(model, x0, nodes[i], T).J;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if ((J[i] < 0.0) == (J[i + 1] < 0.0)) continue;
        double a = nodes[i];
        double b = nodes[i + 1];
        double Ja = J[i];
        for (int it = 0; it < 60 && b - a > 1e-13 * std::max(1.0, b); ++it) {
            const double c = 0.5 * (a + b);
            const double Jc = integrate_ivp(model, x0, c, T).J;
            if ((Jc < 0.0) == (Ja < 0.0)) {
                a = c;
                Ja = Jc;
            } else {
                b = c;
            }
        }
        const double v = 0.5 * (a + b);
        out.push_back({v, integrate_ivp(model, x0, v, T).x});
    }
    return out;
}

std::vector<double> scan_nodes(const StepModel& model) {
    const double vmax = 5.0 * std::sqrt(2.0 * model.V0 / model.m);
    std::vector<double> nodes;
    for (int i = 1; i <= kRootNodes; ++i) nodes.push_back(vmax * i / kRootNodes);
    return nodes;
}

std::vector<CausticPoint> triangle_points(const StepModel& model, double T, const std::vector<double>& x0_grid) {
    const double L = heaviside_caustic_extent(model, T);
    std::vector<CausticPoint> out;
    for (double x0 : x0_grid) {
        if (x0 < -L || x0 > 0.0) continue;
        out.push_back({x0, 0.0});
        out.push_back({0.0, x0});
        out.push_back({x0, -L - x0});
    }
    return out;
}

}  // namespace

IvpResult integrate_ivp(const StepModel& model, double x0, double v0, double T) {
    model.validate();
    if (model.family != Family::WoodsSaxon) throw ValidationError("integrate_ivp: smooth (Woods-Saxon) potential required");
    if (!(T >= 0.0)) throw ValidationError("integrate_ivp: T must be non-negative");
    const double m = model.m;
    const double a = model.alpha;
    State s{x0, v0, 0.0, 1.0};
    const double E0 = energy(model, s);
    double drift = 0.0;
    if (model.V0 == 0.0) {
        free_flight(s, T);
        return {s[0], s[1], s[2], 0.0};
    }
    const double edge = kFlatEdge / a;
    auto rhs = [&](const State& y, State& d, double) {
        d[0] = y[1];
        d[1] = -potential_derivative(model, y[0]) / m;
        d[2] = y[3];
        d[3] = -potential_second_derivative(model, y[0]) * y[2] / m;
    };
    auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-10, 1e-10, 0.25 / a);
    double t = 0.0;
    double dt = 0.01 / a;
    long steps = 0;
    bool in_layer = std::abs(x0) < edge;
    while (t < T) {
        if (!in_layer) {
            // Flat region: fly freely until the wall layer is reached or time runs out.
            const double x = s[0];
            const double v = s[1];
            const bool approaching = (x < 0.0 && v > 0.0) || (x > 0.0 && v < 0.0);
            double tf = T - t;
            if (approaching) tf = std::min(tf, std::max(0.0, std::abs(x) - edge) / std::abs(v));
            free_flight(s, tf);
            t += tf;
            in_layer = true;
            continue;
        }
        dt = std::min(dt, T - t);
        if (stepper.try_step(rhs, s, t, dt) == ode::success) {
            drift = std::max(drift, std::abs(energy(model, s) - E0));
            if (std::abs(s[0]) > edge) in_layer = false;
        }
        if (++steps > 2000000) throw ConvergenceError("integrate_ivp: step limit exceeded");
    }
    return {s[0], s[1], s[2], drift};
}

double heaviside_caustic_extent(const StepModel& model, double T) {
    return std::sqrt(2.0 * model.V0 / model.m) * T;
}

std::vector<CausticPoint> caustic_curve(const StepModel& model, double T, const std::vector<double>& x0_grid) {
    model.validate();
    if (!(T > 0.0)) throw ValidationError("caustic_curve: T must be positive");
    if (model.family == Family::Heaviside) return triangle_points(model, T, x0_grid);
    if (model.V0 == 0.0) return {};
    const std::vector<double> nodes = scan_nodes(model);
    std::vector<CausticPoint> out;
    for (double x0 : x0_grid) {
        for (const Root& r : jacobian_roots(model, x0, T, nodes)) {
            out.push_back({x0, r.x1});
            out.push_back({r.x1, x0});
        }
    }
    return out;
}

std::vector<CausticPoint> caustic_cusps(const StepModel& model, double T, double x0_lo, double x0_hi) {
    model.validate();
    if (!(T > 0.0) || !(x0_hi > x0_lo)) throw ValidationError("caustic_cusps: need T > 0 and x0_lo < x0_hi");
    if (model.family == Family::Heaviside) {
        const double L = heaviside_caustic_extent(model, T);
        return {{-L, 0.0}, {0.0, -L}};
    }
    const std::vector<double> nodes = scan_nodes(model);
    constexpr int n_x = 120;
    std::vector<std::vector<Root>> roots(n_x + 1);
    std::vector<double> xs(n_x + 1);
    for (int i = 0; i <= n_x; ++i) {
        xs[i] = x0_lo + (x0_hi - x0_lo) * i / n_x;
        roots[i] = jacobian_roots(model, xs[i], T, nodes);
    }
    std::vector<CausticPoint> out;
    auto add = [&](CausticPoint p) {
        for (const CausticPoint& q : out)
            if (std::hypot(p.x0 - q.x0, p.x1 - q.x1) < 1e-3) return;
        out.push_back(p);
    };
    for (int i = 0; i < n_x; ++i) {
        const bool a2 = roots[i].size() >= 2;
        const bool b2 = roots[i + 1].size() >= 2;
        if (a2 == b2 || (roots[i].size() != 0 && roots[i + 1].size() != 0)) continue;
        // Merger of two v0 roots between xs[i] and xs[i+1]: bisect in x0 with a
        // local v0 scan around the pair.
        const std::vector<Root>& pair = a2 ? roots[i] : roots[i + 1];
        double v_lo = pair.front().v0;
        double v_hi = pair.front().v0;
        for (const Root& r : pair) {
            v_lo = std::min(v_lo, r.v0);
            v_hi = std::max(v_hi, r.v0);
        }
        const double pad = 0.5 * (v_hi - v_lo) + 2.0 * (nodes[1] - nodes[0]);
        double inside = a2 ? xs[i] : xs[i + 1];
        double outside = a2 ? xs[i + 1] : xs[i];
        Root last{0.5 * (v_lo + v_hi), 0.0};
        for (int it = 0; it < 40; ++it) {
            const double mid = 0.5 * (inside + outside);
            std::vector<double> local;
            const double lo = std::max(1e-12, v_lo - pad);
            const double hi = v_hi + pad;
            for (int k = 0; k <= 80; ++k) local.push_back(lo + (hi - lo) * k / 80);
            const std::vector<Root> r = jacobian_roots(model, mid, T, local);
            if (r.size() >= 2) {
                inside = mid;
                v_lo = r.front().v0;
                v_hi = r.back().v0;
                last = {0.5 * (v_lo + v_hi), 0.0};
            } else {
                outside = mid;
            }
        }
        const double x1 = integrate_ivp(model, inside, last.v0, T).x;
        add({inside, x1});
        add({x1, inside});
    }
    return out;
}

std::optional<ClassicalSaddle> relevant_caustic_saddle(const StepModel& model, const BoundarySpec& bvp) {
    if (model.family != Family::WoodsSaxon) return std::nullopt;
    const std::vector<ClassicalSaddle> real = solve_real_paths(model, bvp);
    if (real.size() >= 3) throw ValidationError("relevance_flag: configuration lies inside the caustic");
    ClassicalSaddle c;
    try {
        c = caustic_saddle(model, bvp, caustic_seed(model, bvp));
    } catch (const NumericalError&) {
        return std::nullopt;
    }
    double re_real = real.front().S.real();
    for (const ClassicalSaddle& s : real) re_real = std::min(re_real, s.S.real());
    c.relevant = c.S.imag() >= 0.0 && c.S.real() >= re_real;
    return c;
}

bool relevance_flag(const StepModel& model, const BoundarySpec& bvp) {
    model.validate();
    bvp.validate();
    if (model.family == Family::Heaviside) {
        const double L = heaviside_caustic_extent(model, bvp.T);
        const bool inside = bvp.x0 < 0.0 && bvp.x1 < 0.0 && bvp.x0 + bvp.x1 > -L;
        if (inside) throw ValidationError("relevance_flag: configuration lies inside the caustic");
        return bvp.x0 * bvp.x1 >= 0.0;
    }
    const auto c = relevant_caustic_saddle(model, bvp);
    return c && c->relevant;
}

std::vector<CausticPoint> stokes_lines(const StepModel& model, double T, const std::vector<double>& x0_grid,
                                       const std::vector<double>& x1_grid) {
    model.validate();
    if (!(T > 0.0)) throw ValidationError("stokes_lines: T must be positive");
    std::vector<CausticPoint> out;
    if (model.family == Family::Heaviside) {
        // Beyond the cusps the lines run along the axes.
        const double L = heaviside_caustic_extent(model, T);
        for (double x1 : x1_grid)
            if (x1 <= -L) out.push_back({0.0, x1});
        for (double x0 : x0_grid)
            if (x0 <= -L) out.push_back({x0, 0.0});
        return out;
    }
    const std::size_t n0 = x0_grid.size();
    const std::size_t n1 = x1_grid.size();
    std::vector<double> D(n0 * n1, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n0; ++i) {
        for (std::size_t j = 0; j < n1; ++j) {
            const BoundarySpec bvp{x0_grid[i], x1_grid[j], T};
            try {
                const std::vector<ClassicalSaddle> real = solve_real_paths(model, bvp);
                if (real.size() != 1) continue;
                const ClassicalSaddle c = caustic_saddle(model, bvp, caustic_seed(model, bvp));
                D[i * n1 + j] = c.S.real() - real.front().S.real();
            } catch (const std::exception&) {
            }
        }
    }
    auto crossing = [](double a, double b) { return std::isfinite(a) && std::isfinite(b) && ((a < 0.0) != (b < 0.0)); };
    for (std::size_t i = 0; i < n0; ++i) {
        for (std::size_t j = 0; j < n1; ++j) {
            const double d = D[i * n1 + j];
            if (j + 1 < n1 && crossing(d, D[i * n1 + j + 1])) {
                const double f = d / (d - D[i * n1 + j + 1]);
                out.push_back({x0_grid[i], x1_grid[j] + f * (x1_grid[j + 1] - x1_grid[j])});
            }
            if (i + 1 < n0 && crossing(d, D[(i + 1) * n1 + j])) {
                const double f = d / (d - D[(i + 1) * n1 + j]);
                out.push_back({x0_grid[i] + f * (x0_grid[i + 1] - x0_grid[i]), x1_grid[j]});
            }
        }
    }
    return out;
}

}  // namespace stepprop
