#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stepprop/potential.hpp"

namespace stepprop {

struct GridSpec {
    double x_min = -80.0;
    double x_max = 60.0;
    std::size_t n_x = 8192;
    double dt = 0.005;
    double absorbing_width = 14.0;  // each side; 0 disables the absorber

    void validate() const;
    double dx() const { return (x_max - x_min) / static_cast<double>(n_x - 1); }
    std::vector<double> points() const;
};

// (2 pi width^2)^{-1/4} exp(-(x - center)^2 / (4 width^2) + i k0 x / hbar);
// width is the standard deviation of |psi|^2.
std::vector<cplx> gaussian_packet(std::span<const double> x, double center, double width, double k0, double hbar);

// Trapezoid L2 norm on a uniform grid.
double grid_norm(std::span<const cplx> psi, double dx);

// Largest momentum at which the discrete Fourier transform of psi exceeds
// rel * max (used for the Nyquist guard).
double momentum_extent(std::span<const cplx> psi, std::span<const double> x, double hbar, double rel = 1e-8);

// Crank-Nicolson evolution to time T with Dirichlet ends and a cubic
// imaginary absorbing ramp of the given width at both ends.
std::vector<cplx> evolve_packet(const StepModel& model, std::span<const cplx> psi0, const GridSpec& grid, double T);

}  // namespace stepprop
