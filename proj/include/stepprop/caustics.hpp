#pragma once

#include <vector>

#include "stepprop/classical.hpp"

namespace stepprop {

struct CriticalPoint {
    double x0 = 0.0;
    double v0 = 0.0;
    double T = 0.0;
    double jacobian = 0.0;  // dx(T)/dv0
};

struct IvpResult {
    double x;
    double v;
    double J;  // dx(T)/dv0
    double max_energy_drift;
};

// m x'' = -V'(x) with x(0) = x0, x'(0) = v0, together with the variational
// equation m J'' = -V''(x) J, J(0) = 0, J'(0) = 1. Woods-Saxon only.
IvpResult integrate_ivp(const StepModel& model, double x0, double v0, double T);

struct CausticPoint {
    double x0;
    double x1;
};

// Images x1 = x(T) of the roots of J(T; x0, v0) = 0, plus their mirror points
// (x1, x0). Heaviside returns the analytic triangle sampled at x0_grid.
std::vector<CausticPoint> caustic_curve(const StepModel& model, double T, const std::vector<double>& x0_grid);

// Non-differentiable points of the caustic loop, where the two v0 roots at
// fixed x0 merge. Two points for a closed Woods-Saxon loop.
std::vector<CausticPoint> caustic_cusps(const StepModel& model, double T, double x0_lo, double x0_hi);

// Heaviside triangle vertex distance sqrt(2 V0 / m) T.
double heaviside_caustic_extent(const StepModel& model, double T);

// Zero set of Re S_caustic - Re S_real on the tensor grid, by linear
// interpolation along grid rows and columns.
std::vector<CausticPoint> stokes_lines(const StepModel& model, double T, const std::vector<double>& x0_grid,
                                       const std::vector<double>& x1_grid);

// Whether the caustic saddle contributes at bvp. Throws ValidationError inside
// the caustic, where three real paths exist. Ties count as relevant.
bool relevance_flag(const StepModel& model, const BoundarySpec& bvp);

// Caustic saddle with its relevance flag set, or nothing if none is found.
std::optional<ClassicalSaddle> relevant_caustic_saddle(const StepModel& model, const BoundarySpec& bvp);

}  // namespace stepprop
