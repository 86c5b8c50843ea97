#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stepprop/errors.hpp"
#include "stepprop/propagator.hpp"
#include "stepprop/wkb.hpp"

using namespace stepprop;

namespace {

const BoundarySpec fig{-5.0, -9.25, 10.0};

}  // namespace

TEST_CASE("exact for the free particle") {
    const StepModel f = woods_saxon(1.0, 0.0, 1.0, 0.7);
    const BoundarySpec b{-1.0, 2.5, 3.0};
    const cplx w = wkb_propagator(f, b, collect_saddles(f, b, SaddleSelection::Real));
    CHECK(std::abs(w - free_propagator(1.0, 0.7, -1.0, 2.5, 3.0)) < 1e-12);
}

TEST_CASE("saddle selections") {
    const StepModel m = woods_saxon(1.0, 1.0, 5.0, 1.0);
    CHECK(collect_saddles(m, fig, SaddleSelection::Real).size() == 1);
    CHECK(collect_saddles(m, fig, SaddleSelection::RealCaustic).size() == 2);
    CHECK(collect_saddles(m, fig, SaddleSelection::RealCausticTopological).size() == 3);
    for (SaddleSelection s : {SaddleSelection::Real, SaddleSelection::RealCaustic, SaddleSelection::RealCausticTopological})
        CHECK(saddle_selection_from_string(to_string(s)) == s);
    CHECK(to_string(SaddleSelection::RealCaustic) == "real+caustic");
    CHECK_THROWS_AS(saddle_selection_from_string("caustic"), ValidationError);
}

TEST_CASE("Maslov phases of the Heaviside paths") {
    const StepModel h = heaviside(1.0, 1.0, 1.0);
    const auto saddles = collect_saddles(h, {-4.0, -3.0, 10.0}, SaddleSelection::Real);
    REQUIRE(saddles.size() == 3);
    const auto terms = wkb_terms(h, {-4.0, -3.0, 10.0}, {saddles[0], saddles[1]});
    for (const WkbTerm& t : terms) {
        // Strip e^{iS/hbar} and the (2 pi i hbar)^{-1/2} phase.
        const double phase = std::arg(t.amplitude * std::exp(cplx(0.0, -t.saddle.S.real())) * std::exp(cplx(0.0, std::numbers::pi / 4)));
        const double expect = t.saddle.kind == SaddleKind::Direct ? 0.0 : -std::numbers::pi / 2.0;
        CHECK(phase == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("lingering path has a singular prefactor") {
    const StepModel h = heaviside(1.0, 1.0, 1.0);
    ClassicalSaddle s;
    s.kind = SaddleKind::Direct;
    s.S = 0.0;
    s.vv = cplx(-2e6, 0.0);
    CHECK_THROWS_AS(wkb_terms(h, {-4.0, -3.0, 10.0}, {s}), CausticError);
    s.vv = -1.0;
    s.relevant = false;
    CHECK_THROWS_AS(wkb_terms(h, {-4.0, -3.0, 10.0}, {s}), ValidationError);
}

TEST_CASE("caustic saddle improves the reconstruction at small hbar") {
    const StepModel m = woods_saxon(1.0, 1.0, 5.0, 0.1);
    const cplx G = propagate(m, fig.x0, fig.x1, fig.T).G;
    const cplx real = wkb_propagator(m, fig, collect_saddles(m, fig, SaddleSelection::Real));
    const cplx both = wkb_propagator(m, fig, collect_saddles(m, fig, SaddleSelection::RealCaustic));
    CHECK(std::abs(G - both) < 0.5 * std::abs(G - real));
}

TEST_CASE("hbar override") {
    const StepModel m = woods_saxon(1.0, 0.0, 1.0, 1.0);
    const BoundarySpec b{0.0, 1.0, 2.0};
    const auto s = collect_saddles(m, b, SaddleSelection::Real);
    CHECK(std::abs(wkb_propagator(m, b, s, 0.5) - free_propagator(1.0, 0.5, 0.0, 1.0, 2.0)) < 1e-12);
}
