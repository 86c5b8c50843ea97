#pragma once

#include <optional>

#include "stepprop/potential.hpp"
#include "stepprop/specfun.hpp"

namespace stepprop {

enum class Branch { C, Plus, Minus };
enum class Side { Left, Right };

// Beyond |alpha x| > kAsymptoticSwitch the closed forms are replaced by their
// plane-wave asymptotics.
inline constexpr double kAsymptoticSwitch = 30.0;

struct MomentumSpec {
    double k = 0.0;
    double E = 0.0;
    cplx p;                   // sqrt(k^2 - 2 m V0), principal branch
    std::optional<double> mu;  // sqrt(2 m V0 - k^2) below the step
};

MomentumSpec momentum_spec(const StepModel& model, double k);

struct ScatterAmplitudes {
    cplx R;
    cplx T;
};

struct NormalizationCoeffs {
    std::optional<double> Ncc;  // below the step
    std::optional<double> Npp;  // above the step
    std::optional<cplx> Npm;
    std::optional<double> sum_plus;   // Npp + |Npm| from the factorized form
    std::optional<double> sum_minus;  // Npp - |Npm| from the factorized form
};

struct InstantonAsymptote {
    double rate;  // e^{-2 pi p / (alpha hbar)}
    cplx S_I;     // i pi sqrt(2 m (E - V0)) / alpha
};

// Unnormalized Woods-Saxon eigenstates phi^c, phi^+, phi^-.
cplx eigenstate_ws(const StepModel& model, Branch branch, double k, double x);
cplx eigenstate_ws_asymptotic(const StepModel& model, Branch branch, double k, double x, Side side);

ScatterAmplitudes scatter_amplitudes(const StepModel& model, double k);
double reflection_rate(const StepModel& model, double k);
// log |R|^2, finite where the rate itself underflows.
double log_reflection_rate(const StepModel& model, double k);
double transmission_rate(const StepModel& model, double k);
InstantonAsymptote reflection_rate_smallhbar_asymptote(const StepModel& model, double k);

NormalizationCoeffs normalization_coeffs(const StepModel& model, double k);

// Orthonormal states with  int phi^a_k phi^b_k'* dx = delta_ab delta(k - k').
cplx orthonormal_state(const StepModel& model, Branch branch, double k, double x);

// Analytic continuation in complex k. p and mu are passed explicitly so the
// caller controls their branch along a deformed contour.
namespace analytic {

cplx ws_phi_plus(const StepModel& model, cplx k, cplx p, double x);  // phi^- is p -> -p
cplx ws_phi_c(const StepModel& model, cplx k, cplx mu, double x);
// N+-/|N+-| from the gamma-ratio formula.
cplx ws_phase(const StepModel& model, cplx k, cplx p);
// 2 hbar (Npp +- |Npm|) from the factorized forms.
cplx ws_denominator(const StepModel& model, cplx k, cplx p, bool plus);
// hbar * Ncc.
cplx ws_hbar_ncc(const StepModel& model, cplx k, cplx mu);

}  // namespace analytic

}  // namespace stepprop
