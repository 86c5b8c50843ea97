#include "stepprop/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>

#include "stepprop/errors.hpp"

namespace stepprop {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct Panel {
    double a;
    double b;
    std::vector<cplx> value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// One 21-point Kronrod panel with the embedded 10-point Gauss estimate.
Panel gk_panel(const VectorIntegrand& f, std::size_t dim, double a, double b, std::vector<cplx>& fp,
               std::vector<cplx>& fm) {
    const auto& xs = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::vector<cplx> kr(dim), ga(dim, 0.0);

    f(c, fp);
    for (std::size_t j = 0; j < dim; ++j) kr[j] = fp[j] * wk[0];
    for (std::size_t i = 1; i < xs.size(); ++i) {
        f(c + h * xs[i], fp);
        f(c - h * xs[i], fm);
        for (std::size_t j = 0; j < dim; ++j) {
            const cplx s = fp[j] + fm[j];
            kr[j] += s * wk[i];
            if (i % 2 == 1) ga[j] += s * wg[i / 2];
        }
    }
    double err2 = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        kr[j] *= h;
        ga[j] *= h;
        err2 += std::norm(kr[j] - ga[j]);
    }
    return {a, b, std::move(kr), std::sqrt(err2)};
}

}  // namespace

VecQuadResult integrate_gk(const VectorIntegrand& f, std::size_t dim, double a, double b, const QuadTolerance& tol) {
    if (!(tol.abs_tol > 0.0) || !(tol.rel_tol > 0.0)) throw ValidationError("integrate_gk: tolerances must be positive");
    VecQuadResult out;
    out.value.assign(dim, 0.0);
    if (a == b) return out;

    constexpr std::size_t kEvalsPerPanel = 21;
    std::vector<cplx> fp(dim), fm(dim);
    std::priority_queue<Panel> heap;
    heap.push(gk_panel(f, dim, a, b, fp, fm));
    out.n_evals = kEvalsPerPanel;

    auto totals = [&](std::vector<cplx>& sum, double& err) {
        std::fill(sum.begin(), sum.end(), cplx(0.0));
        err = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            const Panel& p = copy.top();
            for (std::size_t j = 0; j < dim; ++j) sum[j] += p.value[j];
            err += p.error;
            copy.pop();
        }
    };

    // Running totals are kept incrementally; a full resum guards drift at the end.
    std::vector<cplx> sum = heap.top().value;
    double err = heap.top().error;
    auto norm_of = [](const std::vector<cplx>& v) {
        double s = 0.0;
        for (const cplx& z : v) s += std::norm(z);
        return std::sqrt(s);
    };

    while (err > std::max(tol.abs_tol, tol.rel_tol * norm_of(sum))) {
        if (out.n_evals + 2 * kEvalsPerPanel > tol.max_evals) {
            totals(sum, err);
            if (err <= std::max(tol.abs_tol, tol.rel_tol * norm_of(sum))) break;
            throw ConvergenceError("integrate_gk: tolerance not met within the evaluation cap (error " +
                                   std::to_string(err) + ")");
        }
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel can no longer be split in double precision.
            heap.push(std::move(worst));
            totals(sum, err);
            if (err <= std::max(tol.abs_tol, tol.rel_tol * norm_of(sum))) break;
            throw ConvergenceError("integrate_gk: interval bisection exhausted");
        }
        Panel left = gk_panel(f, dim, worst.a, mid, fp, fm);
        Panel right = gk_panel(f, dim, mid, worst.b, fp, fm);
        out.n_evals += 2 * kEvalsPerPanel;
        for (std::size_t j = 0; j < dim; ++j) sum[j] += left.value[j] + right.value[j] - worst.value[j];
        err += left.error + right.error - worst.error;
        heap.push(std::move(left));
        heap.push(std::move(right));
    }
    totals(sum, err);
    out.value = std::move(sum);
    out.error = err;
    return out;
}

QuadResult integrate_gk(const ScalarIntegrand& f, double a, double b, const QuadTolerance& tol) {
    const VectorIntegrand g = [&f](double t, std::span<cplx> out) { out[0] = f(t); };
    const VecQuadResult r = integrate_gk(g, 1, a, b, tol);
    return {r.value[0], r.error, r.n_evals};
}

cplx wynn_epsilon(std::span<const cplx> s, double* err) {
    const std::size_t n = s.size();
    if (n == 0) throw ValidationError("wynn_epsilon: empty sequence");
    if (n < 3) {
        if (err) *err = n == 2 ? std::abs(s[1] - s[0]) : std::numeric_limits<double>::infinity();
        return s.back();
    }
    // e[k][j]: column k of the epsilon table, even columns hold estimates.
    std::vector<std::vector<cplx>> e(n + 1);
    e[0].assign(n, 0.0);
    e[1].assign(s.begin(), s.end());
    cplx best = s.back();
    cplx prev = s[n - 2];
    for (std::size_t k = 2; k <= n; ++k) {
        const std::size_t len = n - k + 1;
        e[k].resize(len);
        for (std::size_t j = 0; j < len; ++j) {
            const cplx d = e[k - 1][j + 1] - e[k - 1][j];
            if (std::abs(d) < 1e-300) {
                e[k][j] = std::numeric_limits<double>::infinity();
            } else {
                e[k][j] = e[k - 2][j + 1] + 1.0 / d;
            }
        }
        // Odd k of the table (k - 1 even in 0-based epsilon index) holds estimates.
        if (k % 2 == 1 && len >= 2 && std::isfinite(e[k][len - 1].real()) && std::isfinite(e[k][len - 2].real())) {
            best = e[k][len - 1];
            prev = e[k][len - 2];
        }
    }
    if (err) *err = std::abs(best - prev);
    return best;
}

}  // namespace stepprop
