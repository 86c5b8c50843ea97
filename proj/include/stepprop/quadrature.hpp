#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "stepprop/specfun.hpp"

namespace stepprop {

struct QuadResult {
    cplx value;
    double error = 0.0;
    std::size_t n_evals = 0;
};

struct VecQuadResult {
    std::vector<cplx> value;
    double error = 0.0;  // Euclidean norm of the per-component Kronrod estimates
    std::size_t n_evals = 0;
};

struct QuadTolerance {
    double abs_tol = 1e-9;
    double rel_tol = 1e-8;
    std::size_t max_evals = 400000;
};

using ScalarIntegrand = std::function<cplx(double)>;
// Fills out[0..dim) with the integrand at t.
using VectorIntegrand = std::function<void(double, std::span<cplx>)>;

// Globally adaptive Gauss-Kronrod (21-point) on [a, b]. Throws ConvergenceError
// if the tolerance is not met within max_evals.
QuadResult integrate_gk(const ScalarIntegrand& f, double a, double b, const QuadTolerance& tol);
VecQuadResult integrate_gk(const VectorIntegrand& f, std::size_t dim, double a, double b, const QuadTolerance& tol);

// Wynn epsilon extrapolation of a sequence of partial sums. Returns the last
// diagonal estimate; *err receives the difference of the two latest estimates.
cplx wynn_epsilon(std::span<const cplx> partial_sums, double* err);

}  // namespace stepprop
