#include <doctest.h>

#include <cmath>

#include "stepprop/errors.hpp"
#include "stepprop/oracle.hpp"

using namespace stepprop;

namespace {

// Free Gaussian with m = hbar = 1.
cplx free_gaussian(double x, double t, double c, double s, double k0) {
    const cplx a = 1.0 + cplx(0.0, t / (2.0 * s * s));
    const double d = x - c - k0 * t;
    return std::pow(2.0 * M_PI * s * s, -0.25) / std::sqrt(a) *
           std::exp(-d * d / (4.0 * s * s * a) + cplx(0.0, k0 * x - 0.5 * k0 * k0 * t));
}

}  // namespace

TEST_CASE("packet normalization") {
    GridSpec g;
    const auto x = g.points();
    const auto psi = gaussian_packet(x, -15.0, 1.0, 1.2, 1.0);
    CHECK(grid_norm(psi, g.dx()) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(psi[0]) < 1e-100);
    const double kmax = momentum_extent(psi, x, 1.0);
    CHECK(kmax > 1.2);
    CHECK(kmax < 1.2 + 12.0);
}

TEST_CASE("free evolution matches the spreading Gaussian") {
    GridSpec g;
    g.x_min = -60.0;
    g.x_max = 60.0;
    g.n_x = 6001;
    g.dt = 0.002;
    g.absorbing_width = 0.0;
    const auto x = g.points();
    const StepModel f = woods_saxon(1.0, 0.0, 1.0, 1.0);
    const auto psi = evolve_packet(f, gaussian_packet(x, -10.0, 1.0, 1.2, 1.0), g, 5.0);
    double err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) err += std::norm(psi[i] - free_gaussian(x[i], 5.0, -10.0, 1.0, 1.2)) * g.dx();
    CHECK(std::sqrt(err) < 1e-3);
    CHECK(grid_norm(psi, g.dx()) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("absorber removes outgoing flux only") {
    GridSpec g;
    g.x_min = -40.0;
    g.x_max = 40.0;
    g.n_x = 4001;
    const auto x = g.points();
    const auto psi = evolve_packet(woods_saxon(1.0, 1.0, 1.0, 1.0), gaussian_packet(x, -10.0, 1.0, 1.2, 1.0), g, 2.0);
    CHECK(grid_norm(psi, g.dx()) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("grid validation") {
    GridSpec g;
    g.n_x = 2;
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g = GridSpec{};
    g.x_max = g.x_min;
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g = GridSpec{};
    g.dt = 0.0;
    CHECK_THROWS_AS(g.validate(), ValidationError);
}
