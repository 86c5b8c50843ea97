#include <doctest.h>

#include <cmath>

#include "stepprop/caustics.hpp"
#include "stepprop/errors.hpp"

using namespace stepprop;

namespace {

const StepModel ws1 = woods_saxon(1.0, 1.0, 1.0, 1.0);
const StepModel ws5 = woods_saxon(1.0, 1.0, 5.0, 1.0);
const StepModel hv = heaviside(1.0, 1.0, 1.0);

}  // namespace

TEST_CASE("free flight and energy conservation") {
    const IvpResult far = integrate_ivp(ws1, -40.0, 0.5, 10.0);
    CHECK(far.x == doctest::Approx(-35.0).epsilon(1e-12));
    CHECK(far.J == doctest::Approx(10.0).epsilon(1e-12));
    const IvpResult r = integrate_ivp(ws5, -5.0, 1.3, 10.0);
    CHECK(r.max_energy_drift < 1e-8);
}

TEST_CASE("variational equation matches finite differences") {
    const double v0 = 1.2, h = 1e-6;
    const IvpResult r = integrate_ivp(ws1, -4.0, v0, 10.0);
    const double fd = (integrate_ivp(ws1, -4.0, v0 + h, 10.0).x - integrate_ivp(ws1, -4.0, v0 - h, 10.0).x) / (2 * h);
    CHECK(r.J == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("reflection off a steep wall") {
    // Below the step the particle turns around.
    const IvpResult r = integrate_ivp(woods_saxon(1.0, 1.0, 50.0, 1.0), -2.0, 1.0, 10.0);
    CHECK(r.x < 0.0);
    CHECK(r.v < 0.0);
    CHECK_THROWS_AS(integrate_ivp(hv, -2.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("Heaviside triangle") {
    const double L = heaviside_caustic_extent(hv, 10.0);
    CHECK(L == doctest::Approx(10.0 * std::sqrt(2.0)));
    for (const CausticPoint& p : caustic_curve(hv, 10.0, {-12.0, -7.0, -2.0, -0.5})) {
        const bool on_edge = std::abs(p.x0) < 1e-12 || std::abs(p.x1) < 1e-12 || std::abs(p.x0 + p.x1 + L) < 1e-9;
        CHECK(on_edge);
        CHECK(p.x0 <= 0.0);
        CHECK(p.x1 <= 0.0);
    }
}

TEST_CASE("fold points are minima of the bounce time") {
    // Points on the hypotenuse; the others hug the axes near the wall.
    const auto pts = caustic_curve(ws5, 10.0, {-6.0, -3.0});
    REQUIRE(pts.size() == 8);
    int hyp = 0;
    for (const CausticPoint& p : pts) {
        if (std::max(p.x0, p.x1) > -1.0) {
            CHECK(std::max(p.x0, p.x1) > -0.5);
            continue;
        }
        ++hyp;
        const auto mn = bounce_time_minimum(ws5, p.x0, p.x1);
        REQUIRE(mn.has_value());
        CHECK(mn->T == doctest::Approx(10.0).epsilon(1e-6));
    }
    CHECK(hyp == 4);
}

TEST_CASE("two cusps, mirror images of each other") {
    const auto c = caustic_cusps(ws1, 10.0, -14.0, 2.0);
    REQUIRE(c.size() == 2);
    CHECK(c[0].x0 == doctest::Approx(c[1].x1).epsilon(1e-3));
    CHECK(c[0].x1 == doctest::Approx(c[1].x0).epsilon(1e-3));
}

TEST_CASE("relevance of the caustic saddle") {
    CHECK(relevance_flag(ws5, {-5.0, -9.25, 10.0}));
    CHECK_THROWS_AS(relevance_flag(ws1, {-4.0, -3.0, 10.0}), ValidationError);
    const auto s = relevant_caustic_saddle(ws5, {-5.0, -9.25, 10.0});
    REQUIRE(s.has_value());
    CHECK(s->relevant);
    CHECK(s->S.imag() >= 0.0);
}

TEST_CASE("Heaviside Stokes lines run along the axes") {
    const double L = heaviside_caustic_extent(hv, 10.0);
    std::vector<double> ax;
    for (int i = 0; i <= 40; ++i) ax.push_back(-20.0 + 0.5 * i);
    const auto lines = stokes_lines(hv, 10.0, ax, ax);
    REQUIRE_FALSE(lines.empty());
    for (const CausticPoint& p : lines) {
        const bool on_axis = (std::abs(p.x0) < 1e-12 && p.x1 <= -L) || (std::abs(p.x1) < 1e-12 && p.x0 <= -L);
        CHECK(on_axis);
    }
}
