#include "stepprop/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stepprop/eigenstates.hpp"
#include "stepprop/errors.hpp"
#include "stepprop/quadrature.hpp"

namespace stepprop {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

struct Pair {
    cplx plus;
    cplx minus;
};

// Constants of one above-step node.
struct AboveNode {
    cplx k;
    cplx p;
    cplx P;   // WS relative phase
    cplx Dp;  // WS 2 hbar (Npp + |Npm|); Heaviside normalization of the + state
    cplx Dm;
};

struct BelowNode {
    cplx k;
    cplx mu;
    cplx norm;  // hbar Ncc (WS) or pi hbar m V0 (Heaviside)
};

// Spectral basis split into kets phi(x1) and duals phi~(x0), the analytic
// continuation of phi*(x0) off the real k axis, so that
// sum_b phi_b(x1) phi_b*(x0) = ket.plus * bra.plus + ket.minus * bra.minus.
class Basis {
public:
    explicit Basis(const StepModel& model) : model_(model) {}

    AboveNode above(cplx k, cplx p) const {
        AboveNode n{k, p, 1.0, 1.0, 1.0};
        const double hb = model_.hbar;
        if (model_.family == Family::Heaviside) {
            n.Dp = 2.0 * k / (kPi * hb * (k + p));
            n.Dm = 2.0 / (kPi * hb * p * (k + p));
            return n;
        }
        n.P = analytic::ws_phase(model_, k, p);
        n.Dp = analytic::ws_denominator(model_, k, p, true);
        n.Dm = analytic::ws_denominator(model_, k, p, false);
        return n;
    }

    Pair ket(const AboveNode& n, double x) const {
        const double hb = model_.hbar;
        if (model_.family == Family::Heaviside) {
            if (x <= 0.0) return {std::cos(n.k * x / hb), n.p * std::sin(n.k * x / hb)};
            return {std::cos(n.p * x / hb), n.k * std::sin(n.p * x / hb)};
        }
        const cplx u = analytic::ws_phi_plus(model_, n.k, n.p, x);
        const cplx w = analytic::ws_phi_plus(model_, n.k, -n.p, x);
        return {u + n.P * w, u - n.P * w};
    }

    Pair bra(const AboveNode& n, double x) const {
        if (model_.family == Family::Heaviside) {
            const Pair c = ket(n, x);
            return {c.plus * n.Dp, c.minus * n.Dm};
        }
        const cplx u = analytic::ws_phi_plus(model_, n.k, n.p, x);
        const cplx w = analytic::ws_phi_plus(model_, n.k, -n.p, x);
        return {(w + u / n.P) / n.Dp, (w - u / n.P) / n.Dm};
    }

    BelowNode below(cplx k, cplx mu) const {
        if (model_.family == Family::Heaviside) return {k, mu, kPi * model_.hbar * model_.m * model_.V0};
        return {k, mu, analytic::ws_hbar_ncc(model_, k, mu)};
    }

    cplx ket(const BelowNode& n, double x) const {
        const double hb = model_.hbar;
        if (model_.family == Family::Heaviside) {
            if (x <= 0.0) return n.k * std::cos(n.k * x / hb) - n.mu * std::sin(n.k * x / hb);
            return n.k * std::exp(-n.mu * x / hb);
        }
        return analytic::ws_phi_c(model_, n.k, n.mu, x);
    }

    cplx bra(const BelowNode& n, double x) const { return ket(n, x) / n.norm; }

    cplx above_kernel(cplx k, cplx p, double x1, double x0) const {
        const AboveNode n = above(k, p);
        const Pair a = ket(n, x1);
        const Pair b = bra(n, x0);
        return a.plus * b.plus + a.minus * b.minus;
    }

    cplx below_kernel(cplx k, cplx mu, double x1, double x0) const {
        const BelowNode n = below(k, mu);
        return ket(n, x1) * bra(n, x0);
    }

private:
    const StepModel& model_;
};

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}

QuadTolerance tolerance_of(const QuadratureConfig& cfg) { return {cfg.abs_tol, cfg.rel_tol, cfg.max_evals}; }

}  // namespace

void QuadratureConfig::validate() const {
    if (!(theta > 0.0 && theta < kPi / 4.0)) throw ValidationError("QuadratureConfig: theta must lie in (0, pi/4)");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ValidationError("QuadratureConfig: tolerances must be positive");
    if (!(k_max_factor > 1.0)) throw ValidationError("QuadratureConfig: k_max_factor must exceed 1");
    if (max_evals < 1000) throw ValidationError("QuadratureConfig: max_evals too small");
}

cplx free_propagator(double m, double hbar, double x0, double x1, double T) {
    if (T <= 0.0) return 0.0;
    const double d = x1 - x0;
    return std::sqrt(m / (2.0 * kPi * hbar * T)) * std::exp(cplx(0.0, -kPi / 4.0)) *
           std::exp(cplx(0.0, m * d * d / (2.0 * hbar * T)));
}

cplx free_energy_propagator(double m, double hbar, double x0, double x1, cplx E) {
    const cplx kE = std::sqrt(2.0 * m * E);
    return m / kE * std::exp(kI * kE * std::abs(x1 - x0) / hbar);
}

PropagatorSample propagate(const StepModel& model, double x0, double x1, double T, const QuadratureConfig& cfg) {
    model.validate();
    cfg.validate();
    require_finite(x0, "x0");
    require_finite(x1, "x1");
    require_finite(T, "T");
    PropagatorSample s;
    s.x0 = x0;
    s.x1 = x1;
    s.T = T;
    if (T <= 0.0) return s;

    const Basis basis(model);
    const double m = model.m;
    const double hb = model.hbar;
    const double K = model.threshold_momentum();
    const QuadTolerance tol = tolerance_of(cfg);
    auto time_factor = [&](cplx k) { return std::exp(-kI * k * k * T / (2.0 * m * hb)); };

    if (K > 0.0) {
        const ScalarIntegrand below = [&](double u) {
            const double k = K * std::sin(u);
            const double mu = K * std::cos(u);
            return basis.below_kernel(k, mu, x1, x0) * time_factor(k) * mu;
        };
        const QuadResult r = integrate_gk(below, 0.0, kPi / 2.0, tol);
        s.G += r.value;
        s.est_error += r.error;
        s.n_evals += r.n_evals;
    }

    // Above the step: k = sqrt(K^2 + q^2), q = r e^{-i theta}, p = q. The peak
    // of the envelope below is exp(tan(theta) m X^2 / (4 hbar T)); theta is
    // reduced for short times so that it stays below e^5.
    const double X = std::abs(x0) + std::abs(x1);
    double theta = cfg.theta;
    if (X > 0.0) theta = std::min(theta, std::atan(20.0 * hb * T / (m * X * X)));
    const cplx rot = std::exp(-kI * theta);
    const ScalarIntegrand above = [&](double r) {
        const cplx q = r * rot;
        const cplx k = std::sqrt(K * K + q * q);
        return basis.above_kernel(k, q, x1, x0) * time_factor(k) * (q / k) * rot;
    };

    // Gaussian damping e^{-r^2/rd^2} against growth e^{b r} of the deformed plane waves.
    const double rd2 = 2.0 * m * hb / (T * std::sin(2.0 * theta));
    const double b = std::sin(theta) * X / hb;
    const double L = -std::log(cfg.abs_tol * 1e-3 * std::min(hb, 1.0));
    double r_end = 0.5 * rd2 * (b + std::sqrt(b * b + 4.0 * L / rd2));
    const double r_cap = cfg.k_max_factor * std::max(K, std::sqrt(rd2));

    double r_lo = 0.0;
    for (;;) {
        const QuadResult r = integrate_gk(above, r_lo, r_end, tol);
        s.G += r.value;
        s.est_error += r.error;
        s.n_evals += r.n_evals;
        // Envelope test over 50 nodes past the truncation point.
        double env = 0.0;
        for (int j = 1; j <= 50; ++j) env = std::max(env, std::abs(above(r_end * (1.0 + 0.01 * j))));
        s.n_evals += 50;
        if (env * r_end < cfg.abs_tol * 1e-2) break;
        if (r_end >= r_cap) throw ConvergenceError("propagate: integrand envelope does not decay before the ray cap");
        r_lo = r_end;
        r_end = std::min(1.5 * r_end, r_cap);
    }
    return s;
}

namespace {

// Integral of f over [a, b] (real parameter) with a semicircular detour below
// the point c in the complex plane of the parameter.
template <class F>
QuadResult integrate_with_detour(const F& f, double a, double b, double c, double rho, const QuadTolerance& tol) {
    QuadResult out;
    auto add = [&](const QuadResult& r) {
        out.value += r.value;
        out.error += r.error;
        out.n_evals += r.n_evals;
    };
    if (c - rho > a) add(integrate_gk([&](double t) { return f(cplx(t, 0.0)); }, a, c - rho, tol));
    add(integrate_gk(
        [&](double phi) {
            const cplx e = std::exp(kI * phi);
            return f(c + rho * e) * kI * rho * e;
        },
        kPi, 2.0 * kPi, tol));
    if (c + rho < b) add(integrate_gk([&](double t) { return f(cplx(t, 0.0)); }, c + rho, b, tol));
    return out;
}

}  // namespace

EnergySample energy_propagator(const StepModel& model, double x0, double x1, cplx E, const QuadratureConfig& cfg) {
    model.validate();
    cfg.validate();
    require_finite(x0, "x0");
    require_finite(x1, "x1");
    if (!std::isfinite(E.real()) || !std::isfinite(E.imag()) || E.imag() < 0.0)
        throw ValidationError("energy_propagator: E must be finite with Im E >= 0");
    if (E.imag() == 0.0 && (E.real() == 0.0 || E.real() == model.V0))
        throw SingularityError("energy_propagator: E at a branch point of the spectrum");

    const Basis basis(model);
    const double m = model.m;
    const double hb = model.hbar;
    const double K = model.threshold_momentum();
    const QuadTolerance tol = tolerance_of(cfg);
    auto resolvent = [&](cplx k) { return kI * hb / (E - k * k / (2.0 * m)); };

    EnergySample s;
    auto add = [&](const QuadResult& r) {
        s.K += r.value;
        s.est_error += r.error;
        s.n_evals += r.n_evals;
    };

    if (K > 0.0) {
        const auto below = [&](cplx u) {
            const cplx k = K * std::sin(u);
            const cplx mu = K * std::cos(u);
            return basis.below_kernel(k, mu, x1, x0) * resolvent(k) * mu;
        };
        const double ER = E.real();
        if (ER > 0.0 && ER < model.V0) {
            const double uE = std::asin(std::sqrt(2.0 * m * ER) / K);
            const double rho = 0.5 * std::min(uE, kPi / 2.0 - uE);
            add(integrate_with_detour(below, 0.0, kPi / 2.0, uE, rho, tol));
        } else {
            add(integrate_gk([&](double u) { return below(cplx(u, 0.0)); }, 0.0, kPi / 2.0, tol));
        }
    }

    const auto above = [&](cplx q) {
        const cplx k = std::sqrt(K * K + q * q);
        return basis.above_kernel(k, q, x1, x0) * resolvent(k) * (q / k);
    };
    // Finite part: up to a few times every momentum scale in the problem.
    const double qE = E.real() > model.V0 ? std::sqrt(2.0 * m * E.real() - K * K) : 0.0;
    const double q_scale = std::max({K, qE, std::sqrt(2.0 * m * std::abs(E)), 1.0 * hb});
    double q0 = 4.0 * q_scale;
    if (qE > 0.0) {
        add(integrate_with_detour(above, 0.0, q0, qE, 0.25 * qE, tol));
    } else {
        add(integrate_gk([&](double q) { return above(cplx(q, 0.0)); }, 0.0, q0, tol));
    }

    // Oscillatory 1/q^2 tail: panels half a period of e^{i q |x1 - x0| / hbar}
    // long (geometric when x1 = x0), partial sums extrapolated by Wynn epsilon.
    const double d = std::abs(x1 - x0);
    const bool periodic = d > 0.0;
    const double h = periodic ? kPi * hb / d : q0;
    std::vector<cplx> partial;
    cplx acc = 0.0;
    double tail_err = 0.0;
    double est = std::numeric_limits<double>::infinity();
    cplx best = 0.0;
    double lo = q0;
    for (int j = 0; j < 80; ++j) {
        const double hi = periodic ? lo + h : 2.0 * lo;
        const QuadResult r = integrate_gk([&](double q) { return above(cplx(q, 0.0)); }, lo, hi, tol);
        s.n_evals += r.n_evals;
        tail_err += r.error;
        acc += r.value;
        partial.push_back(acc);
        lo = hi;
        if (partial.size() >= 6) {
            double e = 0.0;
            best = wynn_epsilon(partial, &e);
            est = e;
            if (e < std::max(cfg.abs_tol, cfg.rel_tol * std::abs(s.K + best))) break;
        }
    }
    if (!std::isfinite(est) || est > 1e3 * std::max(cfg.abs_tol, cfg.rel_tol * std::abs(s.K + best)))
        throw ConvergenceError("energy_propagator: tail extrapolation did not settle");
    s.K += best;
    s.est_error += tail_err + est;
    return s;
}

PacketResult propagate_packet(const StepModel& model, std::span<const double> x0_grid, std::span<const cplx> psi0,
                              std::span<const double> x1_grid, double T, const QuadratureConfig& cfg) {
    model.validate();
    cfg.validate();
    const std::size_t n0 = x0_grid.size();
    if (n0 < 2 || psi0.size() != n0) throw ValidationError("propagate_packet: psi0 must match a grid of >= 2 points");
    if (!(T > 0.0)) throw ValidationError("propagate_packet: T must be positive");
    const double dx = (x0_grid.back() - x0_grid.front()) / static_cast<double>(n0 - 1);
    for (std::size_t i = 1; i < n0; ++i) {
        if (std::abs(x0_grid[i] - x0_grid[i - 1] - dx) > 1e-6 * std::abs(dx))
            throw ValidationError("propagate_packet: x0 grid must be uniform");
    }
    std::vector<double> w(n0, dx);
    w.front() = w.back() = 0.5 * dx;

    const double m = model.m;
    const double hb = model.hbar;
    const double K = model.threshold_momentum();

    // Momentum support of the packet from its discrete Fourier transform.
    const double k_nyq = kPi * hb / dx;
    double peak = 0.0;
    std::vector<double> spec(1001);
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const double k = k_nyq * static_cast<double>(j) / static_cast<double>(spec.size() - 1);
        cplx fp = 0.0, fm = 0.0;
        for (std::size_t i = 0; i < n0; ++i) {
            fp += w[i] * psi0[i] * std::exp(-kI * k * x0_grid[i] / hb);
            fm += w[i] * psi0[i] * std::exp(kI * k * x0_grid[i] / hb);
        }
        spec[j] = std::max(std::abs(fp), std::abs(fm));
        peak = std::max(peak, spec[j]);
    }
    std::size_t j_last = 0;
    for (std::size_t j = 0; j < spec.size(); ++j)
        if (spec[j] > 1e-10 * peak) j_last = j;
    if (j_last + 1 >= spec.size()) throw ValidationError("propagate_packet: packet not resolved by the x0 grid");
    const double k_max = k_nyq * static_cast<double>(j_last + 2) / static_cast<double>(spec.size() - 1);

    const Basis basis(model);
    const std::size_t n1 = x1_grid.size();
    const QuadTolerance tol = tolerance_of(cfg);
    PacketResult out;
    out.psi.assign(n1, 0.0);
    auto add = [&](const VecQuadResult& r) {
        for (std::size_t j = 0; j < n1; ++j) out.psi[j] += r.value[j];
        out.est_error += r.error;
        out.n_evals += r.n_evals;
    };
    auto time_factor = [&](double k) { return std::exp(-kI * k * k * T / (2.0 * m * hb)); };

    if (K > 0.0) {
        const double u_max = k_max < K ? std::asin(k_max / K) : kPi / 2.0;
        const VectorIntegrand below = [&](double u, std::span<cplx> f) {
            const double k = K * std::sin(u);
            const double mu = K * std::cos(u);
            const BelowNode n = basis.below(k, mu);
            cplx c = 0.0;
            for (std::size_t i = 0; i < n0; ++i) c += w[i] * psi0[i] * basis.bra(n, x0_grid[i]);
            c *= time_factor(k) * mu;
            for (std::size_t j = 0; j < n1; ++j) f[j] = basis.ket(n, x1_grid[j]) * c;
        };
        add(integrate_gk(below, n1, 0.0, u_max, tol));
    }
    if (k_max > K) {
        const double q_max = std::sqrt(k_max * k_max - K * K);
        const VectorIntegrand above = [&](double q, std::span<cplx> f) {
            const double k = std::sqrt(K * K + q * q);
            const AboveNode n = basis.above(k, q);
            cplx cp = 0.0, cm = 0.0;
            for (std::size_t i = 0; i < n0; ++i) {
                const Pair b = basis.bra(n, x0_grid[i]);
                cp += w[i] * psi0[i] * b.plus;
                cm += w[i] * psi0[i] * b.minus;
            }
            const cplx jac = time_factor(k) * (q / k);
            cp *= jac;
            cm *= jac;
            for (std::size_t j = 0; j < n1; ++j) {
                const Pair a = basis.ket(n, x1_grid[j]);
                f[j] = a.plus * cp + a.minus * cm;
            }
        };
        add(integrate_gk(above, n1, 0.0, q_max, tol));
    }
    return out;
}

}  // namespace stepprop
