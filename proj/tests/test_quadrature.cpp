#include <doctest.h>

#include <cmath>
#include <vector>

#include "stepprop/errors.hpp"
#include "stepprop/quadrature.hpp"

using namespace stepprop;

TEST_CASE("oscillatory scalar integral") {
    const QuadResult r = integrate_gk([](double t) { return std::exp(cplx(0.0, 3.0 * t)); }, 0.0, 10.0, {});
    const cplx exact = (std::exp(cplx(0.0, 30.0)) - 1.0) / cplx(0.0, 3.0);
    CHECK(std::abs(r.value - exact) < 1e-9);
    CHECK(r.error >= 0.0);
    CHECK(r.n_evals > 0);
}

TEST_CASE("endpoint singularity") {
    const QuadResult r = integrate_gk([](double t) { return cplx(1.0 / std::sqrt(t)); }, 0.0, 1.0, {1e-10, 1e-10, 200000});
    CHECK(std::abs(r.value - 2.0) < 1e-8);
}

TEST_CASE("vector integrand") {
    const VecQuadResult r = integrate_gk(
        [](double t, std::span<cplx> out) {
            out[0] = t * t;
            out[1] = std::exp(-t);
        },
        2, 0.0, 2.0, {});
    CHECK(std::abs(r.value[0] - 8.0 / 3.0) < 1e-12);
    CHECK(std::abs(r.value[1] - (1.0 - std::exp(-2.0))) < 1e-12);
}

TEST_CASE("evaluation cap") {
    auto f = [](double t) { return std::exp(cplx(0.0, 1e4 * t * t)); };
    CHECK_THROWS_AS(integrate_gk(f, 0.0, 10.0, {1e-14, 1e-14, 500}), ConvergenceError);
}

TEST_CASE("Wynn epsilon accelerates an alternating series") {
    std::vector<cplx> sums;
    cplx s = 0.0;
    for (int n = 1; n <= 14; ++n) {
        s += (n % 2 ? 1.0 : -1.0) / n;
        sums.push_back(s);
    }
    double err = 0.0;
    const cplx v = wynn_epsilon(sums, &err);
    CHECK(std::abs(v - std::log(2.0)) < 1e-9);
    CHECK(std::abs(sums.back() - std::log(2.0)) > 1e-2);
}
