#pragma once

#include <optional>
#include <vector>

#include "stepprop/classical.hpp"

namespace stepprop {

struct WkbTerm {
    ClassicalSaddle saddle;
    cplx amplitude;  // sqrt(i/(2 pi hbar)) sqrt(vv) e^{iS/hbar}
};

// Saddle sets used by the CLI and the residue comparison.
enum class SaddleSelection { Real, RealCaustic, RealCausticTopological };

std::string to_string(SaddleSelection s);
SaddleSelection saddle_selection_from_string(const std::string& s);

// Real saddles plus, on request, the caustic and topological saddles that
// exist at bvp. Irrelevant caustic saddles are dropped.
std::vector<ClassicalSaddle> collect_saddles(const StepModel& model, const BoundarySpec& bvp, SaddleSelection sel);

// One term per saddle. The sign of sqrt(vv) follows the Maslov phase of the
// saddle kind: 0 direct, -pi/2 low bounce and topological, -pi high bounce,
// -3pi/4 caustic. Throws CausticError when |vv| > 1e6.
std::vector<WkbTerm> wkb_terms(const StepModel& model, const BoundarySpec& bvp,
                               const std::vector<ClassicalSaddle>& saddles, std::optional<double> hbar = {});

cplx wkb_propagator(const StepModel& model, const BoundarySpec& bvp, const std::vector<ClassicalSaddle>& saddles,
                    std::optional<double> hbar = {});

}  // namespace stepprop
