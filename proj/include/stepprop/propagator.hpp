#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stepprop/potential.hpp"

namespace stepprop {

struct QuadratureConfig {
    double theta = 0.1;  // deformation angle of the above-step ray
    double abs_tol = 1e-9;
    double rel_tol = 1e-8;
    // Hard cap on the ray length in units of the natural momentum scale
    // max(sqrt(2 m V0), sqrt(2 m hbar / T)).
    double k_max_factor = 400.0;
    std::size_t max_evals = 400000;

    void validate() const;
};

struct PropagatorSample {
    double x0 = 0.0;
    double x1 = 0.0;
    double T = 0.0;
    cplx G;
    double est_error = 0.0;
    std::size_t n_evals = 0;
};

// G(x1, x0; T) from the spectral representation. T <= 0 returns exactly zero.
PropagatorSample propagate(const StepModel& model, double x0, double x1, double T, const QuadratureConfig& cfg = {});

struct EnergySample {
    cplx K;
    double est_error = 0.0;
    std::size_t n_evals = 0;
};

// K(x1, x0; E) = int_0^inf dT G e^{iET/hbar}. Real E takes the retarded
// prescription E + i0; Im E > 0 is also accepted.
EnergySample energy_propagator(const StepModel& model, double x0, double x1, cplx E,
                               const QuadratureConfig& cfg = {});

struct PacketResult {
    std::vector<cplx> psi;
    double est_error = 0.0;
    std::size_t n_evals = 0;
};

// psi(x1, T) = int dx0 G(x1, x0; T) psi0(x0), with the x0 integral done first
// for every spectral node (trapezoid on the uniform x0 grid).
PacketResult propagate_packet(const StepModel& model, std::span<const double> x0_grid, std::span<const cplx> psi0,
                              std::span<const double> x1_grid, double T, const QuadratureConfig& cfg = {});

// Closed forms for V0 = 0.
cplx free_propagator(double m, double hbar, double x0, double x1, double T);
cplx free_energy_propagator(double m, double hbar, double x0, double x1, cplx E);

}  // namespace stepprop
