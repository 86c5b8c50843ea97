#include "stepprop/spectroscopy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>
#include <unsupported/Eigen/NonLinearOptimization>

#include "stepprop/errors.hpp"
#include "stepprop/wkb.hpp"

namespace stepprop {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

// sqrt(2 pi / (i omega)), principal branch.
cplx prefactor(double omega) { return std::sqrt(cplx(0.0, -2.0 * kPi / omega)); }

double trapezoid_weight(int i, int n, double h) { return (i == 0 || i == n - 1) ? 0.5 * h : h; }

template <class Kernel>
SpectrumSeries transform(const OmegaSamples& samples, const std::vector<double>& grid, SpectrumKind kind,
                         Kernel kernel) {
    const OmegaWindow& w = samples.window;
    w.validate();
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw ValidationError("spectrum: grid must be strictly increasing");
    const int n = w.n_omega;
    const double h = (w.B - w.A) / (n - 1);
    SpectrumSeries out;
    out.kind = kind;
    out.grid = grid;
    for (double g : grid) {
        cplx sum = 0.0;
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const double om = w.omega(i);
            const cplx k = trapezoid_weight(i, n, h) * prefactor(om) * kernel(om, g);
            sum += k * samples.G[i];
            if (!samples.err.empty()) err += std::abs(k) * samples.err[i];
        }
        out.transform.push_back(sum);
        out.values.push_back(std::norm(sum));
        out.errors.push_back(2.0 * std::abs(sum) * err + err * err);
    }
    out.peaks = detect_peaks(out.grid, out.values);
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
}

}  // namespace

void OmegaWindow::validate() const {
    if (!(A > 0.0) || !(B > A)) throw ValidationError("OmegaWindow: need 0 < A < B");
    if (n_omega < 64) throw ValidationError("OmegaWindow: n_omega must be at least 64");
}

std::string to_string(SpectrumKind k) { return k == SpectrumKind::Fourier ? "fourier" : "laplace"; }

SpectrumKind spectrum_kind_from_string(const std::string& s) {
    if (s == "fourier") return SpectrumKind::Fourier;
    if (s == "laplace") return SpectrumKind::Laplace;
    throw ValidationError("unknown spectrum kind '" + s + "'");
}

OmegaSamples sample_propagator(const StepModel& model, const BoundarySpec& bvp, const OmegaWindow& window,
                               const QuadratureConfig& cfg, int threads) {
    model.validate();
    bvp.validate();
    window.validate();
    OmegaSamples out{window, std::vector<cplx>(window.n_omega), std::vector<double>(window.n_omega)};
    const int nt = std::max(1, threads);
    std::vector<std::exception_ptr> errors(nt);
    auto work = [&](int t) {
        try {
            for (int i = t; i < window.n_omega; i += nt) {
                StepModel m = model;
                m.hbar = 1.0 / window.omega(i);
                const PropagatorSample s = propagate(m, bvp.x0, bvp.x1, bvp.T, cfg);
                out.G[i] = s.G;
                out.err[i] = s.est_error;
            }
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

OmegaSamples sample_wkb(const StepModel& model, const BoundarySpec& bvp, const OmegaWindow& window,
                        const std::vector<ClassicalSaddle>& saddles) {
    window.validate();
    OmegaSamples out{window, std::vector<cplx>(window.n_omega), {}};
    for (int i = 0; i < window.n_omega; ++i) out.G[i] = wkb_propagator(model, bvp, saddles, 1.0 / window.omega(i));
    return out;
}

OmegaSamples synthetic_samples(const OmegaWindow& window, const std::vector<SyntheticTerm>& terms) {
    window.validate();
    OmegaSamples out{window, std::vector<cplx>(window.n_omega), {}};
    for (int i = 0; i < window.n_omega; ++i) {
        const double om = window.omega(i);
        cplx g = 0.0;
        for (const SyntheticTerm& t : terms) g += t.c * std::sqrt(cplx(0.0, om / (2.0 * kPi))) * std::exp(kI * om * t.S);
        out.G[i] = g;
    }
    return out;
}

SpectrumSeries fourier_transform(const OmegaSamples& samples, const std::vector<double>& tau_grid) {
    return transform(samples, tau_grid, SpectrumKind::Fourier,
                     [](double om, double tau) { return std::exp(kI * (om * tau)); });
}

SpectrumSeries laplace_transform(const OmegaSamples& samples, const std::vector<double>& s_grid) {
    for (double s : s_grid)
        if (s < 0.0) throw ValidationError("laplace: s must be non-negative");
    return transform(samples, s_grid, SpectrumKind::Laplace,
                     [](double om, double s) { return cplx(std::exp(-om * s), 0.0); });
}

SpectrumSeries fourier_spectrum(const StepModel& model, const BoundarySpec& bvp, const OmegaWindow& window,
                                const std::vector<double>& tau_grid, const QuadratureConfig& cfg) {
    return fourier_transform(sample_propagator(model, bvp, window, cfg), tau_grid);
}

SpectrumSeries laplace_spectrum(const StepModel& model, const BoundarySpec& bvp, const OmegaWindow& window,
                                const std::vector<double>& s_grid, const QuadratureConfig& cfg) {
    return laplace_transform(sample_propagator(model, bvp, window, cfg), s_grid);
}

std::vector<Peak> detect_peaks(const std::vector<double>& grid, const std::vector<double>& values,
                               double threshold_factor) {
    std::vector<Peak> out;
    if (grid.size() < 3) return out;
    const double floor = threshold_factor * median(values);
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        const double a = values[i - 1];
        const double b = values[i];
        const double c = values[i + 1];
        if (!(b > a && b >= c) || !(b > floor)) continue;
        // Parabola through the three nodes (uniform spacing assumed locally).
        const double h = 0.5 * (grid[i + 1] - grid[i - 1]);
        const double den = a - 2.0 * b + c;
        double shift = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
        shift = std::clamp(shift, -0.5, 0.5);
        const double loc = grid[i] + shift * h;
        const double height = b - 0.25 * (a - c) * shift;
        // Full width at half maximum by walking out to the half-height crossings.
        auto crossing = [&](int dir) {
            std::size_t j = i;
            while (true) {
                const std::size_t k = dir < 0 ? j - 1 : j + 1;
                if ((dir < 0 && j == 0) || (dir > 0 && j + 1 >= values.size())) return grid[j];
                if (values[k] <= 0.5 * height) {
                    const double f = (values[j] - 0.5 * height) / (values[j] - values[k]);
                    return grid[j] + f * (grid[k] - grid[j]);
                }
                j = k;
            }
        };
        out.push_back({loc, height, crossing(+1) - crossing(-1)});
    }
    return out;
}

std::vector<PeakMatch> match_peaks(const SpectrumSeries& series, const std::vector<ClassicalSaddle>& saddles,
                                   double tol) {
    struct Cand {
        double d;
        std::size_t s;
        std::size_t p;
    };
    std::vector<Cand> cands;
    for (std::size_t s = 0; s < saddles.size(); ++s)
        for (std::size_t p = 0; p < series.peaks.size(); ++p) {
            const double d = std::abs(peak_action(series, series.peaks[p]) - saddles[s].S.real());
            if (d <= tol) cands.push_back({d, s, p});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.d < b.d; });
    std::vector<PeakMatch> out(saddles.size());
    for (std::size_t s = 0; s < saddles.size(); ++s) out[s].saddle = s;
    std::vector<bool> peak_used(series.peaks.size(), false);
    for (const Cand& c : cands) {
        if (out[c.s].peak || peak_used[c.p]) continue;
        out[c.s].peak = c.p;
        out[c.s].distance = c.d;
        peak_used[c.p] = true;
    }
    // Saddles left over whose nearest in-tolerance peak is taken share it.
    for (const Cand& c : cands) {
        if (out[c.s].peak) continue;
        out[c.s].peak = c.p;
        out[c.s].distance = c.d;
        out[c.s].degenerate = true;
        for (PeakMatch& m : out)
            if (m.peak == c.p) m.degenerate = true;
    }
    return out;
}

double residue_between(const SpectrumSeries& a, const SpectrumSeries& b) {
    if (a.grid.size() != b.grid.size()) throw ValidationError("residue: grids differ");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < a.grid.size(); ++i) {
        const double d0 = std::abs(a.transform[i]) - std::abs(b.transform[i]);
        const double d1 = std::abs(a.transform[i + 1]) - std::abs(b.transform[i + 1]);
        sum += 0.5 * (d0 * d0 + d1 * d1) * (a.grid[i + 1] - a.grid[i]);
    }
    return std::sqrt(sum);
}

std::vector<double> residue_against_wkb(const OmegaSamples& exact, const StepModel& model, const BoundarySpec& bvp,
                                        const std::vector<double>& s_grid,
                                        const std::vector<std::vector<ClassicalSaddle>>& saddle_sets) {
    const SpectrumSeries ref = laplace_transform(exact, s_grid);
    std::vector<double> out;
    for (const auto& set : saddle_sets)
        out.push_back(residue_between(ref, laplace_transform(sample_wkb(model, bvp, exact.window, set), s_grid)));
    return out;
}

std::vector<double> residue_against_wkb(const StepModel& model, const BoundarySpec& bvp, const OmegaWindow& window,
                                        const std::vector<double>& s_grid,
                                        const std::vector<std::vector<ClassicalSaddle>>& saddle_sets,
                                        const QuadratureConfig& cfg) {
    return residue_against_wkb(sample_propagator(model, bvp, window, cfg), model, bvp, s_grid, saddle_sets);
}

namespace {

// Windowed closed form of int_A^B e^{omega (iS - s)} d omega.
cplx pole_term(cplx S, double s, double A, double B) {
    const cplx z = kI * S - s;
    if (std::abs(z) < 1e-12) return B - A;
    return (std::exp(B * z) - std::exp(A * z)) / z;
}

struct FitFunctor {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const SpectrumSeries* series;
    double A, B;
    int n_terms;
    double scale;

    int inputs() const { return 4 * n_terms; }
    int values() const { return 2 * static_cast<int>(series->grid.size()); }

    // x = (Re S, Im S, Re c, Im c) per term.
    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
        for (std::size_t i = 0; i < series->grid.size(); ++i) {
            cplx model = 0.0;
            for (int j = 0; j < n_terms; ++j) {
                const cplx S(x[4 * j], x[4 * j + 1]);
                const cplx c(x[4 * j + 2], x[4 * j + 3]);
                model += c * pole_term(S, series->grid[i], A, B);
            }
            const cplx r = (model - series->transform[i]) / scale;
            f[2 * i] = r.real();
            f[2 * i + 1] = r.imag();
        }
        return 0;
    }
};

}  // namespace

ActionFit fit_actions(const SpectrumSeries& laplace, const OmegaWindow& window, const std::vector<double>& re_S_guess) {
    if (laplace.kind != SpectrumKind::Laplace) throw ValidationError("fit_actions: Laplace series required");
    if (re_S_guess.empty()) throw ValidationError("fit_actions: at least one term required");
    const int n = static_cast<int>(re_S_guess.size());
    double scale = 0.0;
    for (const cplx& v : laplace.transform) scale = std::max(scale, std::abs(v));
    if (!(scale > 0.0)) scale = 1.0;

    // Linear least squares for the amplitudes at Im S = 0.1 as a start.
    const std::size_t m = laplace.grid.size();
    Eigen::MatrixXcd M(m, n);
    Eigen::VectorXcd rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) M(i, j) = pole_term(cplx(re_S_guess[j], 0.1), laplace.grid[i], window.A, window.B);
        rhs[i] = laplace.transform[i];
    }
    const Eigen::VectorXcd c0 = M.colPivHouseholderQr().solve(rhs);

    Eigen::VectorXd x(4 * n);
    for (int j = 0; j < n; ++j) {
        x[4 * j] = re_S_guess[j];
        x[4 * j + 1] = 0.1;
        x[4 * j + 2] = c0[j].real();
        x[4 * j + 3] = c0[j].imag();
    }
    FitFunctor f{&laplace, window.A, window.B, n, scale};
    Eigen::NumericalDiff<FitFunctor> nd(f);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<FitFunctor>> lm(nd);
    lm.parameters.maxfev = 4000;
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-14;
    lm.minimize(x);

    Eigen::VectorXd res(f.values());
    f(x, res);
    ActionFit out;
    out.residual = res.norm();
    for (int j = 0; j < n; ++j)
        out.terms.push_back({cplx(x[4 * j + 2], x[4 * j + 3]), cplx(x[4 * j], x[4 * j + 1])});
    return out;
}

}  // namespace stepprop
