#include <doctest.h>

#include <cmath>
#include <random>

#include "stepprop/errors.hpp"
#include "stepprop/propagator.hpp"
#include "stepprop/quadrature.hpp"

using namespace stepprop;

TEST_CASE("free particle reduction") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> x(-6.0, 6.0), t(0.5, 12.0);
    for (int i = 0; i < 6; ++i) {
        const double x0 = x(rng), x1 = x(rng), T = t(rng);
        const cplx G = propagate(woods_saxon(1.0, 0.0, 1.0, 1.0), x0, x1, T).G;
        CHECK(std::abs(G - free_propagator(1.0, 1.0, x0, x1, T)) < 1e-8);
    }
    const cplx G = propagate(heaviside(2.0, 0.0, 0.7), -1.0, 2.0, 3.0).G;
    CHECK(std::abs(G - free_propagator(2.0, 0.7, -1.0, 2.0, 3.0)) < 1e-8);
}

TEST_CASE("retarded convention") {
    const StepModel m = woods_saxon(1.0, 1.0, 1.0, 1.0);
    CHECK(propagate(m, -1.0, 1.0, 0.0).G == cplx(0.0));
    CHECK(propagate(m, -1.0, 1.0, -2.0).G == cplx(0.0));
}

TEST_CASE("reciprocity") {
    const StepModel m = woods_saxon(1.0, 1.0, 1.0, 1.0);
    const PropagatorSample a = propagate(m, -3.0, 1.5, 4.0);
    const PropagatorSample b = propagate(m, 1.5, -3.0, 4.0);
    CHECK(std::abs(a.G - b.G) < 1e-7);
    CHECK(a.est_error >= 0.0);
}

TEST_CASE("deformation angle independence") {
    const StepModel m = woods_saxon(1.0, 1.0, 1.0, 1.0);
    QuadratureConfig lo, hi;
    lo.theta = 0.05;
    hi.theta = 0.15;
    for (auto [x0, x1] : {std::pair{-4.0, -3.0}, std::pair{-2.0, 2.0}, std::pair{1.0, 3.0}}) {
        const PropagatorSample a = propagate(m, x0, x1, 10.0, lo);
        const PropagatorSample b = propagate(m, x0, x1, 10.0, hi);
        CHECK(std::abs(a.G - b.G) < std::max(1e-7, 10.0 * std::max(a.est_error, b.est_error)));
    }
}

TEST_CASE("steep step approaches Heaviside") {
    const StepModel w = woods_saxon(1.0, 1.0, 50.0, 1.0);
    const StepModel h = heaviside(1.0, 1.0, 1.0);
    for (auto [x0, x1] : {std::pair{-4.0, -3.0}, std::pair{-2.0, 3.0}, std::pair{1.5, 4.0}})
        CHECK(std::abs(propagate(w, x0, x1, 10.0).G - propagate(h, x0, x1, 10.0).G) < 1e-3);
}

TEST_CASE("quadrature settings are validated") {
    QuadratureConfig c;
    c.theta = 1.0;
    CHECK_THROWS_AS(propagate(woods_saxon(1.0, 1.0, 1.0, 1.0), 0.0, 1.0, 1.0, c), ValidationError);
    c.theta = 0.1;
    c.abs_tol = -1.0;
    CHECK_THROWS_AS(propagate(woods_saxon(1.0, 1.0, 1.0, 1.0), 0.0, 1.0, 1.0, c), ValidationError);
}

TEST_CASE("free energy propagator") {
    const StepModel f = woods_saxon(1.0, 0.0, 1.0, 1.0);
    for (cplx E : {cplx(0.8, 0.3), cplx(0.8, 0.0), cplx(-0.5, 0.0)}) {
        const cplx K = energy_propagator(f, -3.0, -2.0, E).K;
        CHECK(std::abs(K - free_energy_propagator(1.0, 1.0, -3.0, -2.0, E)) < 1e-6);
    }
}

TEST_CASE("energy propagator equals the damped time integral") {
    // K - K_free = int_0^inf (G - G_free) e^{iET} dT; the difference vanishes
    // as T -> 0 and is damped by Im E at large T.
    const StepModel m = woods_saxon(1.0, 1.0, 1.0, 1.0);
    const cplx E(0.8, 0.3);
    const double x0 = -3.0, x1 = -2.0;
    auto f = [&](double T) {
        return (propagate(m, x0, x1, T).G - free_propagator(1.0, 1.0, x0, x1, T)) * std::exp(cplx(0.0, 1.0) * E * T);
    };
    const QuadResult I = integrate_gk(f, 0.05, 60.0, {1e-6, 1e-6, 20000});
    const cplx dK = energy_propagator(m, x0, x1, E).K - free_energy_propagator(1.0, 1.0, x0, x1, E);
    CHECK(std::abs(I.value - dK) < 1e-3);
    MESSAGE("time-integral deviation " << std::abs(I.value - dK));
}
