#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stepprop/errors.hpp"
#include "stepprop/specfun.hpp"

using namespace stepprop;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

// 2F1 with the full-precision argument, for the contiguous relation.
cplx F(cplx a, cplx b, cplx c, double z) { return hyp2f1(a, b, c, z); }

}  // namespace

TEST_CASE("log_gamma closed values") {
    CHECK(std::abs(log_gamma(1.0)) < 1e-15);
    CHECK(std::abs(log_gamma(0.5) - std::log(std::sqrt(std::numbers::pi))) < 1e-14);
    CHECK(std::abs(log_gamma(2.0)) < 1e-15);
}

TEST_CASE("log_gamma against high-precision values") {
    CHECK(rel(log_gamma({3.0, 4.0}), {-1.7566267846037841105, 4.7426644380346579282}) < 1e-13);
    CHECK(rel(log_gamma({0.01, -0.02}), {3.7944367207828294344, 1.1183633070517473198}) < 1e-13);
    // exp removes the branch ambiguity to the left of the imaginary axis
    const cplx ref = std::exp(cplx(-0.43208889261320192052, -9.0933454212897415073));
    CHECK(rel(gamma({-2.5, 0.3}), ref) < 1e-12);
    CHECK(rel(gamma({0.5, 1.5}), {0.1544309761869628434, -0.18052756337372853947}) < 1e-12);
}

TEST_CASE("gamma poles") {
    CHECK_THROWS_AS(log_gamma(0.0), SingularityError);
    CHECK_THROWS_AS(log_gamma(-3.0), SingularityError);
    CHECK(std::abs(rgamma(-2.0)) == 0.0);
}

TEST_CASE("reflection formula") {
    for (cplx z : {cplx(0.3, 0.2), cplx(-1.7, 0.4), cplx(2.2, -1.3), cplx(0.5, 3.0)}) {
        const cplx lhs = gamma(z) * gamma(1.0 - z);
        const cplx rhs = std::numbers::pi / std::sin(std::numbers::pi * z);
        CHECK(rel(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("log_gamma_ratio for small shifts") {
    const cplx v = log_gamma_ratio({2.3, 1.1}, {1e-7, 2e-7});
    CHECK(rel(v, {-3.3013103699671903088e-8, 2.0423153298426716857e-7}) < 1e-9);
}

TEST_CASE("hyp2f1 closed forms") {
    CHECK(std::abs(hyp2f1({0.3, 1.0}, {2.0, -0.5}, {1.5, 0.2}, 0.0) - 1.0) < 1e-15);
    CHECK(std::abs(hyp2f1(1.0, 1.0, 2.0, 0.5) - 2.0 * std::log(2.0)) < 1e-13);
    const double z = 0.9;
    CHECK(rel(hyp2f1(1.0, 1.0, 2.0, z), -std::log1p(-z) / z) < 1e-10);
}

TEST_CASE("hyp2f1 against high-precision values") {
    CHECK(rel(hyp2f1({1.0, 0.3}, {0.0, 0.3}, {1.0, 0.6}, 0.999), {1.0350909034666380082, 1.8356376523910552693}) < 1e-10);
    CHECK(rel(hyp2f1({1.0, 0.7}, {0.0, 0.7}, {1.0, -1.1}, 0.3), {0.82719121672889169067, -0.011386872944777664086}) <
          1e-10);
    CHECK(rel(hyp2f1({1.2, 0.4}, {0.2, 0.4}, 2.5, 0.85), {0.94889925787962616819, 0.29289014276206050305}) < 1e-10);
}

TEST_CASE("Gauss summation near z = 1") {
    const cplx a(0.4, 0.3), b(-0.2, 0.5), c(2.1, -0.2);
    const cplx lim = gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b));
    CHECK(rel(hyp2f1(a, b, c, 1.0 - 1e-8, 1e-8), lim) < 1e-6);
}

TEST_CASE("contiguous relation in c") {
    const cplx a(0.7, 0.4), b(-0.3, 0.9), c(1.6, -0.5);
    for (double z : {0.2, 0.55, 0.93}) {
        const cplx r = c * (c - 1.0) * (z - 1.0) * F(a, b, c - 1.0, z) +
                       c * (c - 1.0 - (2.0 * c - a - b - 1.0) * z) * F(a, b, c, z) +
                       (c - a) * (c - b) * z * F(a, b, c + 1.0, z);
        CHECK(std::abs(r) < 1e-9 * std::abs(c * c * F(a, b, c, z)));
    }
}

TEST_CASE("complex log1p and expm1") {
    const cplx u(1e-12, -3e-13);
    CHECK(rel(log1p(u), u - u * u / 2.0) < 1e-15);
    CHECK(rel(expm1(u), u + u * u / 2.0) < 1e-15);
    CHECK(rel(log1p(cplx(0.5, 0.5)), std::log(cplx(1.5, 0.5))) < 1e-15);
}
