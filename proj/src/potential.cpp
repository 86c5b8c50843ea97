#include "stepprop/potential.hpp"

#include <cmath>
#include <numbers>

#include "stepprop/errors.hpp"

namespace stepprop {

namespace {

constexpr double kPoleGuard = 1e-8;

bool positive_finite(double v) {
    return std::isfinite(v) && v > 0.0;
}

}  // namespace

std::string to_string(Family f) {
    return f == Family::WoodsSaxon ? "woods-saxon" : "heaviside";
}

Family family_from_string(const std::string& s) {
    if (s == "woods-saxon" || s == "woods_saxon" || s == "ws" || s == "WoodsSaxon") return Family::WoodsSaxon;
    if (s == "heaviside" || s == "Heaviside") return Family::Heaviside;
    throw ValidationError("unknown potential family '" + s + "'");
}

void StepModel::validate() const {
    if (!positive_finite(m)) throw ValidationError("model: m must be positive");
    if (!std::isfinite(V0) || V0 < 0.0) throw ValidationError("model: V0 must be non-negative");
    if (!positive_finite(hbar)) throw ValidationError("model: hbar must be positive");
    if (family == Family::WoodsSaxon && !positive_finite(alpha))
        throw ValidationError("model: alpha must be positive for the Woods-Saxon step");
}

double StepModel::threshold_momentum() const {
    return std::sqrt(2.0 * m * V0);
}

StepModel woods_saxon(double m, double V0, double alpha, double hbar) {
    StepModel s{Family::WoodsSaxon, m, V0, alpha, hbar};
    s.validate();
    return s;
}

StepModel heaviside(double m, double V0, double hbar) {
    StepModel s{Family::Heaviside, m, V0, 1.0, hbar};
    s.validate();
    return s;
}

cplx potential_value(const StepModel& model, cplx x) {
    if (model.family == Family::Heaviside) {
        if (x.imag() != 0.0) throw ValidationError("potential_value: Heaviside step is not defined off the real axis");
        return potential_value(model, x.real());
    }
    const double a = model.alpha;
    // Nearest pole i pi (n + 1/2) / a.
    const double n = std::floor(x.imag() * a / std::numbers::pi);
    const cplx pole(0.0, std::numbers::pi * (n + 0.5) / a);
    if (std::abs((x - pole) * a) < kPoleGuard)
        throw SingularityError("potential_value: x is at a pole of the Woods-Saxon potential");
    return model.V0 / (1.0 + std::exp(-2.0 * a * x));
}

double potential_value(const StepModel& model, double x) {
    if (model.family == Family::Heaviside) {
        if (x > 0.0) return model.V0;
        if (x < 0.0) return 0.0;
        return 0.5 * model.V0;
    }
    const double e = std::exp(-2.0 * model.alpha * x);
    return model.V0 / (1.0 + e);
}

double potential_derivative(const StepModel& model, double x) {
    if (model.family != Family::WoodsSaxon) throw ValidationError("potential_derivative: smooth family only");
    // V' = 2 a V0 s (1 - s), s = 1/(1+e^{-2ax}) = (1 + tanh(ax))/2
    const double t = std::tanh(model.alpha * x);
    return 0.5 * model.alpha * model.V0 * (1.0 - t * t);
}

double potential_second_derivative(const StepModel& model, double x) {
    if (model.family != Family::WoodsSaxon) throw ValidationError("potential_second_derivative: smooth family only");
    const double t = std::tanh(model.alpha * x);
    return -model.alpha * model.alpha * model.V0 * t * (1.0 - t * t);
}

std::vector<cplx> singularity_locations(const StepModel& model, int n_lo, int n_hi) {
    if (model.family != Family::WoodsSaxon)
        throw ValidationError("singularity_locations: the Heaviside step has no complex poles");
    std::vector<cplx> out;
    for (int n = n_lo; n <= n_hi; ++n) out.emplace_back(0.0, std::numbers::pi * (n + 0.5) / model.alpha);
    return out;
}

Rescaled rescale(const StepModel& model, double x0, double x1, double T, double C) {
    if (!positive_finite(C)) throw ValidationError("rescale: C must be positive");
    StepModel out = model;
    out.alpha = model.alpha * C;
    out.hbar = model.hbar / C;
    return {out, x0 / C, x1 / C, T / C};
}

}  // namespace stepprop
