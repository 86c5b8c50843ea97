#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stepprop/potential.hpp"

namespace stepprop {

struct BoundarySpec {
    double x0 = 0.0;
    double x1 = 0.0;
    double T = 1.0;

    void validate() const;
};

enum class SaddleKind { Direct, LowBounce, HighBounce, CausticSaddle, TopologicalSaddle };

std::string to_string(SaddleKind k);
SaddleKind saddle_kind_from_string(const std::string& s);

struct ClassicalSaddle {
    SaddleKind kind = SaddleKind::Direct;
    cplx E;
    cplx S;
    cplx vv;  // d^2 S / dx0 dx1
    bool relevant = true;
    // Topological saddle pinned at E = V0 because Re T(E) = T has no root above the step.
    bool at_threshold = false;
};

// x_t = atanh((2E - V0)/V0)/alpha, principal branch.
cplx turning_point(const StepModel& model, cplx E);

// t(x) and s(x) with t(x_t) = s(x_t) = 0 on principal branches.
cplx time_of_flight(const StepModel& model, cplx E, cplx x);
cplx reduced_action(const StepModel& model, cplx E, cplx x);

// Real-energy time relations for Woods-Saxon. The bounce relation is defined
// for V(max(x0, x1)) < E < V0, the direct one for E > V(max(x0, x1)).
double direct_time(const StepModel& model, double E, double x0, double x1);
double bounce_time(const StepModel& model, double E, double x0, double x1);
double direct_time_derivative(const StepModel& model, double E, double x0, double x1);
double bounce_time_derivative(const StepModel& model, double E, double x0, double x1);

std::vector<ClassicalSaddle> solve_real_paths(const StepModel& model, const BoundarySpec& bvp);
std::vector<ClassicalSaddle> heaviside_paths(const StepModel& model, const BoundarySpec& bvp);

// d^2 S / dx0 dx1 for a saddle of the given kind at energy saddle.E.
cplx van_vleck(const StepModel& model, const ClassicalSaddle& saddle, const BoundarySpec& bvp);

// Minimum of the real bounce time over E in (V(max(x0,x1)), V0).
struct BounceMinimum {
    double E;
    double T;
    double curvature;  // d^2 T / dE^2 at the minimum
};
std::optional<BounceMinimum> bounce_time_minimum(const StepModel& model, double x0, double x1);

// Complex-energy root of the continued bounce relation T_b(E) = T by damped
// Newton from seed, with branch tracking along the iterate path.
ClassicalSaddle caustic_saddle(const StepModel& model, const BoundarySpec& bvp, cplx seed);
// Seed from the quadratic expansion of T_b about its real minimum (upper half plane).
cplx caustic_seed(const StepModel& model, const BoundarySpec& bvp);

// Reflecting saddle with E >= V0 whose contour passes the potential pole.
ClassicalSaddle topological_saddle(const StepModel& model, const BoundarySpec& bvp);
// Real part of the topological elapsed time for E > V0 (E = V0 gives the limit).
double topological_time(const StepModel& model, double E, double x0, double x1);

// Energy-parametrized IVP data of a real saddle: initial velocity at x0.
double initial_velocity(const StepModel& model, const ClassicalSaddle& saddle, const BoundarySpec& bvp);

}  // namespace stepprop
