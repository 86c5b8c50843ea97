#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "stepprop/errors.hpp"
#include "stepprop/spectroscopy.hpp"

using namespace stepprop;

namespace {

std::vector<double> grid(double a, double b, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(a + (b - a) * i / (n - 1));
    return g;
}

}  // namespace

TEST_CASE("window validation") {
    CHECK_THROWS_AS((OmegaWindow{2.0, 1.0, 256}.validate()), ValidationError);
    CHECK_THROWS_AS((OmegaWindow{0.0, 1.0, 256}.validate()), ValidationError);
    CHECK_THROWS_AS((OmegaWindow{1.0, 12.0, 8}.validate()), ValidationError);
    const OmegaWindow w;
    CHECK(w.omega(0) == 1.0);
    CHECK(w.omega(w.n_omega - 1) == 12.0);
}

TEST_CASE("kind strings") {
    CHECK(spectrum_kind_from_string("fourier") == SpectrumKind::Fourier);
    CHECK(to_string(SpectrumKind::Laplace) == "laplace");
    CHECK_THROWS_AS(spectrum_kind_from_string("wavelet"), ValidationError);
}

TEST_CASE("Laplace transform of one term matches the closed form") {
    const OmegaWindow w{1.0, 12.0, 4096};
    const cplx c(0.7, -0.2), S(2.0, 0.1);
    const SpectrumSeries L = laplace_transform(synthetic_samples(w, {{c, S}}), grid(0.0, 2.0, 21));
    for (std::size_t i = 0; i < L.grid.size(); ++i) {
        const cplx q = cplx(0.0, 1.0) * S - L.grid[i];
        const cplx exact = c * (std::exp(w.B * q) - std::exp(w.A * q)) / q;
        CHECK(std::abs(L.transform[i] - exact) < 1e-4 * std::abs(exact) + 1e-6);
    }
    CHECK_THROWS_AS(laplace_transform(synthetic_samples(w, {{c, S}}), {-1.0, 0.0}), ValidationError);
}

TEST_CASE("Fourier peaks sit at minus the action") {
    const OmegaWindow w{1.0, 12.0, 2048};
    const std::vector<SyntheticTerm> terms{{1.0, -3.0}, {0.8, 2.0}};
    const SpectrumSeries F = fourier_transform(synthetic_samples(w, terms), grid(-6.0, 6.0, 1201));
    // Sidelobes also clear the median threshold; the main lobes are the two tallest.
    std::vector<Peak> p = F.peaks;
    REQUIRE(p.size() >= 2);
    std::sort(p.begin(), p.end(), [](const Peak& a, const Peak& b) { return a.height > b.height; });
    const double step = F.grid[1] - F.grid[0];
    CHECK(std::abs(peak_action(F, p[0]) + 3.0) <= step);
    CHECK(std::abs(peak_action(F, p[1]) - 2.0) <= step);
    // Width of |sinc|^2 at half maximum: 2.7831 / ((B - A) / 2).
    CHECK(p[0].width == doctest::Approx(2.0 * 2.7831 / 11.0).epsilon(0.05));
    CHECK(p[1].height < p[0].height);
}

TEST_CASE("peak width scales with the window") {
    const std::vector<double> g = grid(-6.0, 0.0, 1201);
    auto width = [&](double B) {
        const SpectrumSeries F = fourier_transform(synthetic_samples({1.0, B, 2048}, {{1.0, 3.0}}), g);
        return std::max_element(F.peaks.begin(), F.peaks.end(),
                                [](const Peak& a, const Peak& b) { return a.height < b.height; })
            ->width;
    };
    CHECK(width(12.0) * 11.0 == doctest::Approx(width(23.0) * 22.0).epsilon(0.2));
}

TEST_CASE("spectral power is stable under grid refinement") {
    const OmegaWindow w{1.0, 12.0, 1024};
    const OmegaSamples s = synthetic_samples(w, {{1.0, -3.0}, {0.5, 2.0}});
    auto power = [&](int n) {
        const SpectrumSeries F = fourier_transform(s, grid(-40.0, 40.0, n));
        double acc = 0.0;
        for (std::size_t i = 1; i < F.grid.size(); ++i)
            acc += 0.5 * (F.values[i] + F.values[i - 1]) * (F.grid[i] - F.grid[i - 1]);
        return acc;
    };
    CHECK(power(8001) == doctest::Approx(power(16001)).epsilon(1e-6));
}

TEST_CASE("peak detection and refinement") {
    const std::vector<double> g = grid(-5.0, 5.0, 201);
    std::vector<double> v;
    for (double x : g) v.push_back(std::exp(-0.5 * (x - 1.013) * (x - 1.013) / 0.04) + 1e-3);
    const auto p = detect_peaks(g, v);
    REQUIRE(p.size() == 1);
    CHECK(p[0].location == doctest::Approx(1.013).epsilon(1e-3));
    CHECK(p[0].width == doctest::Approx(2.3548 * 0.2).epsilon(0.03));
    CHECK(detect_peaks(g, std::vector<double>(g.size(), 1.0)).empty());
}

TEST_CASE("matching saddles to peaks") {
    const OmegaWindow w{1.0, 12.0, 1024};
    const SpectrumSeries F = fourier_transform(synthetic_samples(w, {{1.0, -3.0}}), grid(-6.0, 6.0, 601));
    ClassicalSaddle a, b, far;
    a.S = -3.01;
    b.S = -2.98;
    far.S = 4.0;
    const auto m = match_peaks(F, {a, b, far}, 0.1);
    REQUIRE(m.size() == 3);
    CHECK(m[0].peak.has_value());
    CHECK(m[1].peak.has_value());
    CHECK(m[0].degenerate);
    CHECK(m[1].degenerate);
    CHECK_FALSE(m[2].peak.has_value());
}

TEST_CASE("residue between series") {
    const OmegaWindow w{1.0, 12.0, 512};
    const auto s = grid(0.0, 2.0, 101);
    const SpectrumSeries a = laplace_transform(synthetic_samples(w, {{1.0, 2.0}}), s);
    CHECK(residue_between(a, a) == 0.0);
    const SpectrumSeries b = laplace_transform(synthetic_samples(w, {{1.0, 2.0}, {0.1, 5.0}}), s);
    CHECK(residue_between(a, b) > 0.0);
    const SpectrumSeries zero = laplace_transform(synthetic_samples(w, {}), s);
    double norm = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i)
        norm += 0.5 * (std::norm(a.transform[i]) + std::norm(a.transform[i - 1])) * (s[i] - s[i - 1]);
    CHECK(residue_between(a, zero) == doctest::Approx(std::sqrt(norm)).epsilon(1e-12));
}

TEST_CASE("least-squares action fit") {
    const OmegaWindow w{1.0, 12.0, 2048};
    const std::vector<SyntheticTerm> terms{{cplx(1.0, 0.2), cplx(-3.0, 0.05)}, {cplx(0.5, -0.1), cplx(2.0, 0.15)}};
    const SpectrumSeries L = laplace_transform(synthetic_samples(w, terms), grid(0.0, 2.0, 201));
    const ActionFit fit = fit_actions(L, w, {-2.9, 2.1});
    REQUIRE(fit.terms.size() == 2);
    CHECK(std::abs(fit.terms[0].S - terms[0].S) < 1e-4);
    CHECK(std::abs(fit.terms[1].S - terms[1].S) < 1e-4);
    CHECK(std::abs(fit.terms[0].c - terms[0].c) < 1e-3);
    CHECK(fit.residual < 1e-6);
}
