#pragma once

#include <string>
#include <vector>

#include "stepprop/specfun.hpp"

namespace stepprop {

enum class Family { WoodsSaxon, Heaviside };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct StepModel {
    Family family = Family::WoodsSaxon;
    double m = 1.0;
    double V0 = 1.0;
    double alpha = 1.0;  // ignored for Heaviside
    double hbar = 1.0;

    // Throws ValidationError. V0 = 0 is accepted (free particle).
    void validate() const;

    double threshold_momentum() const;  // sqrt(2 m V0)
};

StepModel woods_saxon(double m, double V0, double alpha, double hbar);
StepModel heaviside(double m, double V0, double hbar);

// V(x). For Heaviside x must be real; Theta(0) = 1/2.
cplx potential_value(const StepModel& model, cplx x);
double potential_value(const StepModel& model, double x);
// V'(x) and V''(x) for real x (Woods-Saxon only).
double potential_derivative(const StepModel& model, double x);
double potential_second_derivative(const StepModel& model, double x);

// Poles i*pi*(n + 1/2)/alpha for n in [n_lo, n_hi].
std::vector<cplx> singularity_locations(const StepModel& model, int n_lo, int n_hi);

struct Rescaled {
    StepModel model;
    double x0;
    double x1;
    double T;
};

// alpha -> C alpha, hbar -> hbar / C, x -> x / C, T -> T / C.
Rescaled rescale(const StepModel& model, double x0, double x1, double T, double C);

}  // namespace stepprop
