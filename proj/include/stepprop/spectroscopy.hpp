#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stepprop/classical.hpp"
#include "stepprop/propagator.hpp"

namespace stepprop {

struct OmegaWindow {
    double A = 1.0;
    double B = 12.0;
    int n_omega = 2048;

    void validate() const;
    double omega(int i) const { return A + (B - A) * i / (n_omega - 1); }
};

enum class SpectrumKind { Fourier, Laplace };
std::string to_string(SpectrumKind k);
SpectrumKind spectrum_kind_from_string(const std::string& s);

struct Peak {
    double location;
    double height;
    double width;  // full width at half maximum
};

struct SpectrumSeries {
    SpectrumKind kind = SpectrumKind::Fourier;
    std::vector<double> grid;
    std::vector<double> values;  // |F|^2 or |L|^2
    std::vector<double> errors;
    std::vector<cplx> transform;  // F or L itself
    std::vector<Peak> peaks;
};

// Cached G at omega = 1/hbar on the uniform window grid.
struct OmegaSamples {
    OmegaWindow window;
    std::vector<cplx> G;
    std::vector<double> err;
};

OmegaSamples sample_propagator(const StepModel& model, const BoundarySpec& bvp, const OmegaWindow& window,
                               const QuadratureConfig& cfg = {}, int threads = 1);
OmegaSamples sample_wkb(const StepModel& model, const BoundarySpec& bvp, const OmegaWindow& window,
                        const std::vector<ClassicalSaddle>& saddles);

struct SyntheticTerm {
    cplx c;
    cplx S;
};
// G(omega) = sum_j c_j sqrt(i omega / 2 pi) e^{i omega S_j}, so that each term
// enters the transforms as c_j e^{i omega S_j}.
OmegaSamples synthetic_samples(const OmegaWindow& window, const std::vector<SyntheticTerm>& terms);

// F(tau) = int_A^B sqrt(2 pi/(i omega)) G e^{i omega tau} d omega and
// L(s) = int_A^B sqrt(2 pi/(i omega)) G e^{-omega s} d omega (trapezoid).
SpectrumSeries fourier_transform(const OmegaSamples& samples, const std::vector<double>& tau_grid);
SpectrumSeries laplace_transform(const OmegaSamples& samples, const std::vector<double>& s_grid);

SpectrumSeries fourier_spectrum(const StepModel& model, const BoundarySpec& bvp, const OmegaWindow& window,
                                const std::vector<double>& tau_grid, const QuadratureConfig& cfg = {});
SpectrumSeries laplace_spectrum(const StepModel& model, const BoundarySpec& bvp, const OmegaWindow& window,
                                const std::vector<double>& s_grid, const QuadratureConfig& cfg = {});

// Local maxima above 5x the median, refined by a parabola through three nodes.
std::vector<Peak> detect_peaks(const std::vector<double>& grid, const std::vector<double>& values,
                               double threshold_factor = 5.0);

// Fourier peaks report the action -tau.
inline double peak_action(const SpectrumSeries& s, const Peak& p) {
    return s.kind == SpectrumKind::Fourier ? -p.location : p.location;
}

struct PeakMatch {
    std::size_t saddle;
    std::optional<std::size_t> peak;
    double distance = 0.0;
    bool degenerate = false;  // shares its peak with another saddle
};

// Greedy nearest matching of Re S against the peak actions within tol.
std::vector<PeakMatch> match_peaks(const SpectrumSeries& series, const std::vector<ClassicalSaddle>& saddles,
                                   double tol);

// L2 norm over s of |L_exact(s)| - |L_model(s)| for each saddle set.
std::vector<double> residue_against_wkb(const StepModel& model, const BoundarySpec& bvp, const OmegaWindow& window,
                                        const std::vector<double>& s_grid,
                                        const std::vector<std::vector<ClassicalSaddle>>& saddle_sets,
                                        const QuadratureConfig& cfg = {});
std::vector<double> residue_against_wkb(const OmegaSamples& exact, const StepModel& model, const BoundarySpec& bvp,
                                        const std::vector<double>& s_grid,
                                        const std::vector<std::vector<ClassicalSaddle>>& saddle_sets);
double residue_between(const SpectrumSeries& a, const SpectrumSeries& b);

// Least-squares fit of sum_j c_j (e^{B(iS_j - s)} - e^{A(iS_j - s)})/(iS_j - s)
// to the complex Laplace transform, started from the given real parts.
struct ActionFit {
    std::vector<SyntheticTerm> terms;
    double residual;
};
ActionFit fit_actions(const SpectrumSeries& laplace, const OmegaWindow& window, const std::vector<double>& re_S_guess);

}  // namespace stepprop
