#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stepprop/eigenstates.hpp"
#include "stepprop/errors.hpp"

using namespace stepprop;

namespace {

const StepModel ws1 = woods_saxon(1.0, 1.0, 1.0, 1.0);
const StepModel hv1 = heaviside(1.0, 1.0, 1.0);
const double kth = std::sqrt(2.0);

}  // namespace

TEST_CASE("momentum bookkeeping") {
    const MomentumSpec a = momentum_spec(ws1, 2.0);
    CHECK(a.E == 2.0);
    CHECK(std::abs(a.p * a.p + 2.0 - 4.0) < 1e-14);
    CHECK_FALSE(a.mu.has_value());
    const MomentumSpec b = momentum_spec(ws1, 0.7);
    REQUIRE(b.mu.has_value());
    CHECK(*b.mu * *b.mu + 0.49 == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("plane-wave limits on the right") {
    const double x = 25.0;
    const double k = 2.0, p = std::sqrt(k * k - 2.0);
    const cplx minus = eigenstate_ws(ws1, Branch::Minus, k, x) * std::exp(cplx(0.0, p * x));
    const cplx plus = eigenstate_ws(ws1, Branch::Plus, k, x) * std::exp(cplx(0.0, -p * x));
    CHECK(std::abs(minus - 1.0) < 1e-12);
    CHECK(std::abs(plus - 1.0) < 1e-12);
    const double kc = 0.8, mu = std::sqrt(2.0 - kc * kc);
    const cplx c = eigenstate_ws(ws1, Branch::C, kc, 12.0) * std::exp(mu * 12.0);
    CHECK(std::abs(c - 1.0) < 1e-9);
}

TEST_CASE("asymptotic forms match the closed forms") {
    for (Branch b : {Branch::C, Branch::Plus, Branch::Minus}) {
        const double k = b == Branch::C ? 0.9 : 1.8;
        const cplx exact = eigenstate_ws(ws1, b, k, -29.0);
        const cplx asym = eigenstate_ws_asymptotic(ws1, b, k, -29.0, Side::Left);
        CHECK(std::abs(exact - asym) < 1e-8 * std::abs(asym));
    }
}

TEST_CASE("Schroedinger residual") {
    const double k = 1.5 * kth, E = k * k / 2.0, x = 0.37, h = 2e-4;
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const cplx f0 = eigenstate_ws(ws1, b, k, x);
        const cplx fpp = (eigenstate_ws(ws1, b, k, x + h) - 2.0 * f0 + eigenstate_ws(ws1, b, k, x - h)) / (h * h);
        const cplx res = -0.5 * fpp + (potential_value(ws1, x) - E) * f0;
        CHECK(std::abs(res) < 1e-6 * std::abs(E * f0));
    }
    const double kc = 0.6, Ec = kc * kc / 2.0;
    const cplx f0 = eigenstate_ws(ws1, Branch::C, kc, x);
    const cplx fpp = (eigenstate_ws(ws1, Branch::C, kc, x + h) - 2.0 * f0 + eigenstate_ws(ws1, Branch::C, kc, x - h)) / (h * h);
    CHECK(std::abs(-0.5 * fpp + (potential_value(ws1, x) - Ec) * f0) < 1e-6 * std::abs(f0));
}

TEST_CASE("branch and energy mismatch") {
    CHECK_THROWS_AS(eigenstate_ws(ws1, Branch::C, 2.0, 0.0), ValidationError);
    CHECK_THROWS_AS(eigenstate_ws(ws1, Branch::Plus, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(scatter_amplitudes(ws1, 1.0), ValidationError);
}

TEST_CASE("unitarity of the rates") {
    for (double a : {0.1, 1.0, 2.0, 3.0, 4.0}) {
        const StepModel m = woods_saxon(1.0, 1.0, a, 1.0);
        for (double k : {1.4143, 1.6, 2.5, 6.0, 10.0})
            CHECK(std::abs(reflection_rate(m, k) + transmission_rate(m, k) - 1.0) < 1e-12);
    }
    const ScatterAmplitudes s = scatter_amplitudes(hv1, 3.0);
    CHECK(std::abs(std::norm(s.R) + std::norm(s.T) - 1.0) < 1e-12);
}

TEST_CASE("closed-form rates") {
    CHECK(reflection_rate(ws1, 1.7) == doctest::Approx(0.0021942577291664708295).epsilon(1e-11));
    const double k = 2.2, p = std::sqrt(k * k - 2.0);
    CHECK(reflection_rate(hv1, k) == doctest::Approx((k - p) * (k - p) / ((k + p) * (k + p))).epsilon(1e-13));
    CHECK(reflection_rate(hv1, kth * (1.0 + 1e-14)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("steep step approaches the Heaviside rates") {
    // Leading correction: R_ws / R_h - 1 = -pi^2 k p / (3 alpha^2 hbar^2).
    for (double a : {100.0, 1000.0}) {
        const StepModel m = woods_saxon(1.0, 1.0, a, 1.0);
        for (double k : {1.5, 2.0, 3.0, 5.0}) {
            const double p = std::sqrt(k * k - 2.0);
            const double lead = -std::numbers::pi * std::numbers::pi * k * p / (3.0 * a * a);
            CHECK(reflection_rate(m, k) / reflection_rate(hv1, k) - 1.0 == doctest::Approx(lead).epsilon(0.02));
        }
    }
    const StepModel m = woods_saxon(1.0, 1.0, 1e4, 1.0);
    for (double k : {1.5, 2.0, 3.0, 5.0}) CHECK(std::abs(reflection_rate(m, k) - reflection_rate(hv1, k)) < 1e-6);
}

TEST_CASE("small hbar instanton asymptote") {
    const double k = 2.0, p = std::sqrt(2.0);
    double prev = 1e9;
    for (double h : {0.1, 0.05, 0.025}) {
        const StepModel m = woods_saxon(1.0, 1.0, 1.0, h);
        const InstantonAsymptote a = reflection_rate_smallhbar_asymptote(m, k);
        CHECK(a.rate == doctest::Approx(std::exp(-2.0 * std::numbers::pi * p / h)).epsilon(1e-12));
        CHECK(std::abs(std::exp(2.0 * cplx(0.0, 1.0) * a.S_I / h) - a.rate) < 1e-12 * a.rate);
        const double ratio = std::log(reflection_rate(m, k)) / std::log(a.rate);
        CHECK(std::abs(ratio - 1.0) <= prev);
        prev = std::abs(ratio - 1.0);
    }
    CHECK(prev < 0.02);
}

TEST_CASE("normalization coefficients") {
    const NormalizationCoeffs below = normalization_coeffs(ws1, 0.9);
    REQUIRE(below.Ncc.has_value());
    CHECK(*below.Ncc > 0.0);
    const NormalizationCoeffs above = normalization_coeffs(ws1, 2.0);
    REQUIRE(above.Npp.has_value());
    REQUIRE(above.Npm.has_value());
    CHECK(*above.Npp >= std::abs(*above.Npm));
    CHECK(*above.sum_plus == doctest::Approx(*above.Npp + std::abs(*above.Npm)).epsilon(1e-10));
    CHECK(*above.sum_minus == doctest::Approx(*above.Npp - std::abs(*above.Npm)).epsilon(1e-8));
    const double k = 0.8;
    const NormalizationCoeffs h = normalization_coeffs(hv1, k);
    CHECK(*h.Ncc == doctest::Approx(std::numbers::pi / (k * k)).epsilon(1e-13));
}

TEST_CASE("log reflection rate agrees with the rate and survives underflow") {
    const StepModel w = woods_saxon(1.0, 1.0, 1.0, 1.0);
    for (double k : {1.5, 2.0, 4.0}) CHECK(log_reflection_rate(w, k) == doctest::Approx(std::log(reflection_rate(w, k))).epsilon(1e-12));
    const StepModel s = woods_saxon(1.0, 1.0, 1.0, 0.02);
    const double p = std::sqrt(23.0);
    CHECK(reflection_rate(s, 5.0) == 0.0);
    CHECK(log_reflection_rate(s, 5.0) == doctest::Approx(-2.0 * std::numbers::pi * p / 0.02).epsilon(1e-12));
}
