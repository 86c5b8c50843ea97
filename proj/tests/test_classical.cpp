#include <doctest.h>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

#include "stepprop/classical.hpp"
#include "stepprop/errors.hpp"
#include "stepprop/quadrature.hpp"

using namespace stepprop;

namespace {

const StepModel ws5 = woods_saxon(1.0, 1.0, 5.0, 1.0);
const StepModel ws1 = woods_saxon(1.0, 1.0, 1.0, 1.0);
const StepModel hv = heaviside(1.0, 1.0, 1.0);
const BoundarySpec fig{-5.0, -9.25, 10.0};

const ClassicalSaddle* find(const std::vector<ClassicalSaddle>& v, SaddleKind k) {
    const auto it = std::find_if(v.begin(), v.end(), [k](const ClassicalSaddle& s) { return s.kind == k; });
    return it == v.end() ? nullptr : &*it;
}

}  // namespace

TEST_CASE("turning point") {
    CHECK(std::abs(turning_point(ws1, 0.5)) < 1e-15);
    CHECK(std::abs(potential_value(ws1, turning_point(ws1, cplx(0.3, 0.1))) - cplx(0.3, 0.1)) < 1e-13);
}

TEST_CASE("direct time against quadrature") {
    const double E = 0.7, x0 = -3.0, x1 = 0.2;
    auto inv_v = [&](double x) { return cplx(1.0 / std::sqrt(2.0 * (E - potential_value(ws1, x)))); };
    const double T = integrate_gk(inv_v, x0, x1, {1e-12, 1e-12, 100000}).value.real();
    CHECK(direct_time(ws1, E, x0, x1) == doctest::Approx(T).epsilon(1e-10));
    const double h = 1e-6;
    CHECK(direct_time_derivative(ws1, E, x0, x1) ==
          doctest::Approx((direct_time(ws1, E + h, x0, x1) - direct_time(ws1, E - h, x0, x1)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("bounce time against quadrature") {
    const double E = 0.6, x0 = -2.0, x1 = -1.0;
    const double xt = turning_point(ws1, E).real();
    // x = x_t - u^2 removes the square-root singularity at the turning point.
    auto leg = [&](double u) {
        const double x = xt - u * u;
        if (u < 1e-6) return cplx(2.0 / std::sqrt(2.0 * potential_derivative(ws1, xt)));
        return cplx(2.0 * u / std::sqrt(2.0 * (E - potential_value(ws1, x))));
    };
    const QuadTolerance tol{1e-11, 1e-11, 200000};
    const double T =
        (integrate_gk(leg, 0.0, std::sqrt(xt - x0), tol).value + integrate_gk(leg, 0.0, std::sqrt(xt - x1), tol).value)
            .real();
    CHECK(bounce_time(ws1, E, x0, x1) == doctest::Approx(T).epsilon(1e-8));
    const double h = 1e-6;
    CHECK(bounce_time_derivative(ws1, E, x0, x1) ==
          doctest::Approx((bounce_time(ws1, E + h, x0, x1) - bounce_time(ws1, E - h, x0, x1)) / (2 * h)).epsilon(1e-5));
}

TEST_CASE("time and action from the implicit solutions") {
    const cplx E(0.4, 0.0);
    const cplx t0 = time_of_flight(ws1, E, cplx(-3.0)), t1 = time_of_flight(ws1, E, cplx(-1.0));
    CHECK(std::abs((-(t0 + t1)).real() - bounce_time(ws1, 0.4, -3.0, -1.0)) < 1e-10);
    const cplx xt = turning_point(ws1, E);
    CHECK(std::abs(time_of_flight(ws1, E, xt)) < 1e-12);
    CHECK(std::abs(reduced_action(ws1, E, xt)) < 1e-12);
}

TEST_CASE("single direct path at the reference configuration") {
    const auto paths = solve_real_paths(ws5, fig);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].kind == SaddleKind::Direct);
    CHECK(paths[0].S.real() == doctest::Approx(0.903125).epsilon(1e-9));
    CHECK(paths[0].vv.real() == doctest::Approx(-0.1).epsilon(1e-9));
    const auto mn = bounce_time_minimum(ws5, -5.0, -9.25);
    REQUIRE(mn.has_value());
    CHECK(mn->E == doctest::Approx(0.88777).epsilon(1e-4));
    CHECK(mn->T == doctest::Approx(11.9222).epsilon(1e-5));
    CHECK(mn->curvature > 0.0);
}

TEST_CASE("three paths inside the caustic") {
    const BoundarySpec b{-4.0, -3.0, 10.0};
    const auto paths = solve_real_paths(ws1, b);
    REQUIRE(paths.size() == 3);
    CHECK(find(paths, SaddleKind::Direct));
    CHECK(find(paths, SaddleKind::LowBounce));
    CHECK(find(paths, SaddleKind::HighBounce));
    for (const ClassicalSaddle& s : paths) {
        // dS/dT = -E
        const double h = 1e-5;
        auto S_at = [&](double T) {
            const auto p = solve_real_paths(ws1, {b.x0, b.x1, T});
            return find(p, s.kind)->S.real();
        };
        CHECK((S_at(b.T + h) - S_at(b.T - h)) / (2 * h) == doctest::Approx(-s.E.real()).epsilon(1e-5));
        // Van Vleck factor against the mixed finite difference.
        auto S_x = [&](double x0, double x1) { return find(solve_real_paths(ws1, {x0, x1, b.T}), s.kind)->S.real(); };
        const double d = 1e-4;
        const double fd =
            (S_x(b.x0 + d, b.x1 + d) - S_x(b.x0 + d, b.x1 - d) - S_x(b.x0 - d, b.x1 + d) + S_x(b.x0 - d, b.x1 - d)) /
            (4 * d * d);
        CHECK(s.vv.real() == doctest::Approx(fd).epsilon(1e-4));
    }
}

TEST_CASE("Heaviside closed-form paths") {
    const auto p = heaviside_paths(hv, {-4.0, -3.0, 10.0});
    REQUIRE(p.size() == 3);
    CHECK(find(p, SaddleKind::Direct)->S.real() == doctest::Approx(0.05));
    CHECK(find(p, SaddleKind::LowBounce)->S.real() == doctest::Approx(2.45));
    CHECK(find(p, SaddleKind::HighBounce)->S.real() == doctest::Approx(7.0 * std::sqrt(2.0) - 10.0));
    CHECK(find(p, SaddleKind::HighBounce)->E.real() == 1.0);
    // Outside the triangle only the direct path remains.
    CHECK(heaviside_paths(hv, {-9.0, -8.0, 10.0}).size() == 1);
    // Both ends on the right: direct path and the step reflection.
    const auto rr = heaviside_paths(hv, {5.0, 4.0, 10.0});
    REQUIRE(rr.size() == 2);
    CHECK(find(rr, SaddleKind::Direct)->S.real() == doctest::Approx(0.05 - 10.0));
    CHECK(find(rr, SaddleKind::LowBounce)->S.real() == doctest::Approx(81.0 / 20.0 - 10.0));
    CHECK_THROWS_AS(heaviside_paths(ws1, {-4.0, -3.0, 10.0}), ValidationError);
}

TEST_CASE("Heaviside crossing path") {
    const BoundarySpec b{-3.0, 2.0, 10.0};
    const auto p = heaviside_paths(hv, b);
    REQUIRE(p.size() == 1);
    const double E = p[0].E.real();
    const double pl = std::sqrt(2.0 * E), pr = std::sqrt(2.0 * (E - 1.0));
    CHECK(3.0 / pl + 2.0 / pr == doctest::Approx(10.0).epsilon(1e-10));
}

TEST_CASE("caustic saddle") {
    const ClassicalSaddle c = caustic_saddle(ws5, fig, caustic_seed(ws5, fig));
    CHECK(c.kind == SaddleKind::CausticSaddle);
    CHECK(c.E.real() == doctest::Approx(1.087528667).epsilon(1e-8));
    CHECK(c.E.imag() == doctest::Approx(0.1906064118).epsilon(1e-8));
    CHECK(c.S.real() == doctest::Approx(10.3844613).epsilon(1e-8));
    CHECK(c.S.imag() == doctest::Approx(0.2562310669).epsilon(1e-8));
    CHECK(std::abs(c.vv - cplx(0.0689, 0.0030)) < 1e-3);
}

TEST_CASE("topological saddle pinned at the threshold") {
    const ClassicalSaddle t = topological_saddle(ws5, fig);
    CHECK(t.kind == SaddleKind::TopologicalSaddle);
    CHECK(t.at_threshold);
    CHECK(t.E.real() == 1.0);
    CHECK(topological_time(ws5, 1.0, -5.0, -9.25) == doctest::Approx(9.989481).epsilon(1e-6));
    CHECK(t.S.real() == doctest::Approx(10.55517).epsilon(1e-6));
}

TEST_CASE("topological saddle above the threshold") {
    // Short times push the root above the step, where Im S = pi sqrt(2m(E - V0)) / (2 alpha).
    const BoundarySpec b{-5.0, -9.25, 6.0};
    const ClassicalSaddle t = topological_saddle(ws5, b);
    CHECK_FALSE(t.at_threshold);
    CHECK(t.E.real() > 1.0);
    CHECK(topological_time(ws5, t.E.real(), b.x0, b.x1) == doctest::Approx(b.T).epsilon(1e-9));
    CHECK(t.S.imag() == doctest::Approx(std::numbers::pi * std::sqrt(2.0 * (t.E.real() - 1.0)) / 10.0).epsilon(1e-12));
}

TEST_CASE("free particle") {
    const auto p = solve_real_paths(woods_saxon(1.0, 0.0, 1.0, 1.0), {-1.0, 2.0, 3.0});
    REQUIRE(p.size() == 1);
    CHECK(p[0].S.real() == doctest::Approx(1.5));
}

TEST_CASE("boundary validation") {
    CHECK_THROWS_AS(solve_real_paths(ws1, {0.0, 1.0, -1.0}), ValidationError);
}

TEST_CASE("direct paths with endpoints on the upper plateau") {
    const StepModel w = woods_saxon(1.0, 1.0, 5.0, 1.0);
    for (auto [x0, x1] : {std::pair{-5.0, 5.0}, {5.0, -10.0}, {5.0, 10.0}, {2.0, 9.0}}) {
        const BoundarySpec b{x0, x1, 10.0};
        const auto paths = solve_real_paths(w, b);
        REQUIRE(paths.size() >= 1);
        const double E = paths[0].E.real();
        CHECK(E > 1.0);
        auto inv_speed = [&](double x) { return std::sqrt(0.5 / (E - potential_value(w, x))); };
        const double T = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            inv_speed, std::min(x0, x1), std::max(x0, x1), 15, 1e-13);
        CHECK(T == doctest::Approx(10.0).epsilon(1e-9));
    }
}
