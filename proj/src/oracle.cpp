#include "stepprop/oracle.hpp"

#include <cmath>
#include <numbers>

#include "stepprop/errors.hpp"

namespace stepprop {

namespace {
const cplx kI(0.0, 1.0);
}

void GridSpec::validate() const {
    if (!(x_min < x_max)) throw ValidationError("GridSpec: x_min must be below x_max");
    if (n_x < 1024) throw ValidationError("GridSpec: n_x must be at least 1024");
    if (!(dt > 0.0)) throw ValidationError("GridSpec: dt must be positive");
    if (!(absorbing_width >= 0.0) || 2.0 * absorbing_width >= x_max - x_min)
        throw ValidationError("GridSpec: absorbing layers overlap");
}

std::vector<double> GridSpec::points() const {
    std::vector<double> x(n_x);
    const double h = dx();
    for (std::size_t i = 0; i < n_x; ++i) x[i] = x_min + h * static_cast<double>(i);
    return x;
}

std::vector<cplx> gaussian_packet(std::span<const double> x, double center, double width, double k0, double hbar) {
    if (!(width > 0.0) || !(hbar > 0.0)) throw ValidationError("gaussian_packet: width and hbar must be positive");
    const double norm = std::pow(2.0 * std::numbers::pi * width * width, -0.25);
    std::vector<cplx> psi(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - center;
        psi[i] = norm * std::exp(cplx(-d * d / (4.0 * width * width), k0 * x[i] / hbar));
    }
    return psi;
}

double grid_norm(std::span<const cplx> psi, double dx) {
    if (psi.empty()) return 0.0;
    double s = 0.0;
    for (const cplx& v : psi) s += std::norm(v);
    s -= 0.5 * (std::norm(psi.front()) + std::norm(psi.back()));
    return std::sqrt(s * dx);
}

double momentum_extent(std::span<const cplx> psi, std::span<const double> x, double hbar, double rel) {
    if (psi.size() != x.size() || x.size() < 2) throw ValidationError("momentum_extent: size mismatch");
    const double dx = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    const double k_nyq = std::numbers::pi * hbar / dx;
    constexpr std::size_t n_k = 512;
    std::vector<double> amp(2 * n_k + 1);
    double peak = 0.0;
    for (std::size_t j = 0; j < amp.size(); ++j) {
        const double k = k_nyq * (static_cast<double>(j) / n_k - 1.0);
        cplx s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += psi[i] * std::exp(-kI * k * x[i] / hbar);
        amp[j] = std::abs(s);
        peak = std::max(peak, amp[j]);
    }
    double extent = 0.0;
    for (std::size_t j = 0; j < amp.size(); ++j) {
        if (amp[j] > rel * peak) extent = std::max(extent, std::abs(k_nyq * (static_cast<double>(j) / n_k - 1.0)));
    }
    return extent;
}

std::vector<cplx> evolve_packet(const StepModel& model, std::span<const cplx> psi0, const GridSpec& grid, double T) {
    model.validate();
    grid.validate();
    if (psi0.size() != grid.n_x) throw ValidationError("evolve_packet: psi0 does not match the grid");
    if (!(T >= 0.0)) throw ValidationError("evolve_packet: T must be non-negative");
    const std::vector<double> x = grid.points();
    const double dx = grid.dx();
    const double hb = model.hbar;
    const double k_nyq = std::numbers::pi * hb / dx;
    if (momentum_extent(psi0, x, hb) >= 0.5 * k_nyq)
        throw ValidationError("evolve_packet: grid too coarse for the packet momentum content");

    const std::size_t n = grid.n_x;
    const std::size_t steps = static_cast<std::size_t>(std::ceil(T / grid.dt));
    std::vector<cplx> psi(psi0.begin(), psi0.end());
    if (steps == 0) return psi;
    const double dt = T / static_cast<double>(steps);

    // Absorber strength: a few times the kinetic energy of the Nyquist half-band.
    const double w_max = 0.5 * (0.25 * k_nyq * k_nyq / (2.0 * model.m));
    std::vector<cplx> U(n);
    for (std::size_t i = 0; i < n; ++i) {
        double w = 0.0;
        if (grid.absorbing_width > 0.0) {
            const double s = std::max(grid.x_min + grid.absorbing_width - x[i], x[i] - (grid.x_max - grid.absorbing_width));
            if (s > 0.0) w = w_max * std::pow(s / grid.absorbing_width, 3);
        }
        U[i] = cplx(potential_value(model, x[i]), -w);
    }

    const double kin = hb * hb / (2.0 * model.m * dx * dx);
    const cplx f = kI * dt / (2.0 * hb);
    const cplx off = -f * kin;  // off-diagonal of A = 1 + f H
    std::vector<cplx> diag_a(n), diag_b(n);
    for (std::size_t i = 0; i < n; ++i) {
        diag_a[i] = 1.0 + f * (2.0 * kin + U[i]);
        diag_b[i] = 1.0 - f * (2.0 * kin + U[i]);
    }
    // Thomas factorization of A, reused every step.
    std::vector<cplx> cp(n), den(n);
    den[0] = diag_a[0];
    cp[0] = off / den[0];
    for (std::size_t i = 1; i < n; ++i) {
        den[i] = diag_a[i] - off * cp[i - 1];
        cp[i] = off / den[i];
    }

    std::vector<cplx> rhs(n);
    for (std::size_t s = 0; s < steps; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx r = diag_b[i] * psi[i];
            if (i > 0) r -= off * psi[i - 1];
            if (i + 1 < n) r -= off * psi[i + 1];
            rhs[i] = r;
        }
        psi[0] = rhs[0] / den[0];
        for (std::size_t i = 1; i < n; ++i) psi[i] = (rhs[i] - off * psi[i - 1]) / den[i];
        for (std::size_t i = n - 1; i-- > 0;) psi[i] -= cp[i] * psi[i + 1];
    }
    return psi;
}

}  // namespace stepprop
