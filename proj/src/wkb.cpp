#include "stepprop/wkb.hpp"

#include <cmath>
#include <numbers>

#include "stepprop/caustics.hpp"
#include "stepprop/errors.hpp"

namespace stepprop {

namespace {

constexpr double kPi = std::numbers::pi;

double maslov_phase(SaddleKind k) {
    switch (k) {
        case SaddleKind::Direct:
            return 0.0;
        case SaddleKind::LowBounce:
        case SaddleKind::TopologicalSaddle:
            return -kPi / 2.0;
        case SaddleKind::HighBounce:
            return -kPi;
        case SaddleKind::CausticSaddle:
            return -3.0 * kPi / 4.0;
    }
    return 0.0;
}

double phase_distance(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

}  // namespace

std::string to_string(SaddleSelection s) {
    switch (s) {
        case SaddleSelection::Real:
            return "real";
        case SaddleSelection::RealCaustic:
            return "real+caustic";
        case SaddleSelection::RealCausticTopological:
            return "real+caustic+topological";
    }
    return "real";
}

SaddleSelection saddle_selection_from_string(const std::string& s) {
    for (SaddleSelection v : {SaddleSelection::Real, SaddleSelection::RealCaustic, SaddleSelection::RealCausticTopological})
        if (to_string(v) == s) return v;
    throw ValidationError("unknown saddle selection '" + s + "'");
}

std::vector<ClassicalSaddle> collect_saddles(const StepModel& model, const BoundarySpec& bvp, SaddleSelection sel) {
    std::vector<ClassicalSaddle> out = solve_real_paths(model, bvp);
    if (sel == SaddleSelection::Real || model.family != Family::WoodsSaxon || model.V0 == 0.0) return out;
    if (out.size() < 3) {
        if (auto c = relevant_caustic_saddle(model, bvp); c && c->relevant) out.push_back(*c);
    }
    if (sel == SaddleSelection::RealCausticTopological) {
        try {
            out.push_back(topological_saddle(model, bvp));
        } catch (const NoSolutionError&) {
        }
    }
    return out;
}

std::vector<WkbTerm> wkb_terms(const StepModel& model, const BoundarySpec& bvp,
                               const std::vector<ClassicalSaddle>& saddles, std::optional<double> hbar) {
    model.validate();
    bvp.validate();
    const double h = hbar.value_or(model.hbar);
    if (!(h > 0.0)) throw ValidationError("wkb: hbar must be positive");
    const cplx pref = 1.0 / std::sqrt(cplx(0.0, 2.0 * kPi * h));
    std::vector<WkbTerm> out;
    for (const ClassicalSaddle& s : saddles) {
        if (!s.relevant) throw ValidationError("wkb: saddle '" + to_string(s.kind) + "' is not flagged relevant");
        if (std::abs(s.vv) > 1e6) throw CausticError("wkb: |vv| > 1e6 near a caustic");
        cplx root = std::sqrt(-s.vv);
        if (phase_distance(std::arg(-root), maslov_phase(s.kind)) < phase_distance(std::arg(root), maslov_phase(s.kind)))
            root = -root;
        out.push_back({s, pref * root * std::exp(cplx(0.0, 1.0) * s.S / h)});
    }
    return out;
}

cplx wkb_propagator(const StepModel& model, const BoundarySpec& bvp, const std::vector<ClassicalSaddle>& saddles,
                    std::optional<double> hbar) {
    cplx sum = 0.0;
    for (const WkbTerm& t : wkb_terms(model, bvp, saddles, hbar)) sum += t.amplitude;
    return sum;
}

}  // namespace stepprop
