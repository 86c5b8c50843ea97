#include "stepprop/eigenstates.hpp"

#include <cmath>
#include <numbers>

#include "stepprop/errors.hpp"

namespace stepprop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
const cplx kI(0.0, 1.0);

cplx log_sinh(cplx z) {
    if (z.real() >= 0.0) return z - kLn2 + std::log(-expm1(-2.0 * z));
    return cplx(0.0, kPi) - z - kLn2 + std::log(-expm1(2.0 * z));
}

// u / (1 - e^{-u}) with the removable singularity at u = 0.
cplx u_over_one_minus_exp(cplx u) {
    if (std::abs(u) < 1e-8) return 1.0 + 0.5 * u;
    return u / (-expm1(-u));
}

struct HypArgs {
    double L;  // log(2^{-1} sech(alpha x))
    double z;  // 1/(1+e^{2 alpha x})
    double w;  // 1 - z
};

HypArgs hyp_args(double y) {
    const double ay = std::abs(y);
    const double e = std::exp(-2.0 * ay);
    HypArgs h;
    h.L = -ay - std::log1p(e);
    if (y >= 0.0) {
        h.z = e / (1.0 + e);
        h.w = 1.0 / (1.0 + e);
    } else {
        h.z = 1.0 / (1.0 + e);
        h.w = e / (1.0 + e);
    }
    return h;
}

void require_ws(const StepModel& model, const char* what) {
    if (model.family != Family::WoodsSaxon)
        throw ValidationError(std::string(what) + ": Woods-Saxon family required");
}

void require_branch(const StepModel& model, Branch branch, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("eigenstate: k must be positive");
    const double K = model.threshold_momentum();
    if (branch == Branch::C && !(k < K)) throw ValidationError("eigenstate: branch c requires k < sqrt(2 m V0)");
    if (branch != Branch::C && !(k > K)) throw ValidationError("eigenstate: branches +/- require k > sqrt(2 m V0)");
}

// phi^+ as x -> -infinity: coefficients of e^{-ikx} and e^{ikx}.
cplx ws_plus_left(const StepModel& model, cplx k, cplx p, double x) {
    const double ah = model.alpha * model.hbar;
    const cplx pre = std::log(kPi) + log_gamma(1.0 - kI * p / ah) - std::log(2.0 * ah) - log_sinh(kPi * k / ah);
    const cplx phase = kI * k * x / model.hbar;
    const cplx t_minus =
        (k - p) * std::exp(pre - log_gamma(1.0 - kI * k / ah) - 2.0 * log_gamma(1.0 + kI * (k - p) / (2.0 * ah)) - phase);
    const cplx t_plus =
        (k + p) * std::exp(pre - log_gamma(1.0 + kI * k / ah) - 2.0 * log_gamma(1.0 - kI * (k + p) / (2.0 * ah)) + phase);
    return t_minus + t_plus;
}

cplx ws_c_left(const StepModel& model, cplx k, cplx mu, double x) {
    const double ah = model.alpha * model.hbar;
    const cplx pre = std::log(kPi) + log_gamma(1.0 + mu / ah) - std::log(2.0 * ah) - log_sinh(kPi * k / ah);
    const cplx phase = kI * k * x / model.hbar;
    const cplx t_minus = (k - kI * mu) * std::exp(pre - log_gamma(1.0 - kI * k / ah) -
                                                  2.0 * log_gamma(1.0 + (kI * k + mu) / (2.0 * ah)) - phase);
    const cplx t_plus = (k + kI * mu) * std::exp(pre - log_gamma(1.0 + kI * k / ah) -
                                                 2.0 * log_gamma(1.0 - (kI * k - mu) / (2.0 * ah)) + phase);
    return t_minus + t_plus;
}

}  // namespace

namespace analytic {

cplx ws_phi_plus(const StepModel& model, cplx k, cplx p, double x) {
    const double y = model.alpha * x;
    if (y > kAsymptoticSwitch) return std::exp(kI * p * x / model.hbar);
    if (y < -kAsymptoticSwitch) return ws_plus_left(model, k, p, x);
    const double ah = model.alpha * model.hbar;
    const HypArgs h = hyp_args(y);
    const cplx nu = kI * (k - p) / (2.0 * ah);
    const cplx pref = std::exp(nu * h.L + kI * (k + p) * x / (2.0 * model.hbar));
    return pref * hyp2f1(1.0 + nu, nu, 1.0 - kI * p / ah, h.z, h.w);
}

cplx ws_phi_c(const StepModel& model, cplx k, cplx mu, double x) {
    const double y = model.alpha * x;
    if (y > kAsymptoticSwitch) return std::exp(-mu * x / model.hbar);
    if (y < -kAsymptoticSwitch) return ws_c_left(model, k, mu, x);
    const double ah = model.alpha * model.hbar;
    const HypArgs h = hyp_args(y);
    const cplx lam = (kI * k + mu) / (2.0 * ah);
    const cplx pref = std::exp(lam * h.L + (kI * k - mu) * x / (2.0 * model.hbar));
    return pref * hyp2f1(1.0 + lam, lam, 1.0 + mu / ah, h.z, h.w);
}

cplx ws_phase(const StepModel& model, cplx k, cplx p) {
    const double ah = model.alpha * model.hbar;
    const cplx qm = kI * (k - p) / (2.0 * ah);
    const cplx qp = kI * (k + p) / (2.0 * ah);
    const cplx r = kI * p / ah;
    return std::exp(log_gamma(1.0 - qm) + log_gamma(1.0 - r) + log_gamma(1.0 + qp) - log_gamma(1.0 + qm) -
                    log_gamma(1.0 + r) - log_gamma(1.0 - qp));
}

cplx ws_denominator(const StepModel& model, cplx k, cplx p, bool plus) {
    const double ah = model.alpha * model.hbar;
    const cplx uk = kPi * k / ah;
    const cplx up = kPi * p / ah;
    const cplx num = -expm1(-(uk + up));
    // (2 pi p / k) / (1 -+ e^{-pi p/ah}) written through u/(1-e^{-u}) so p = 0 is regular.
    if (plus) {
        const cplx lead = 2.0 * ah / k * u_over_one_minus_exp(up);
        return 2.0 * model.hbar * lead * num / (1.0 + std::exp(-uk));
    }
    const cplx lead = 2.0 * kPi * p / k / (1.0 + std::exp(-up));
    return 2.0 * model.hbar * lead * num / (-expm1(-uk));
}

cplx ws_hbar_ncc(const StepModel& model, cplx k, cplx mu) {
    const double ah = model.alpha * model.hbar;
    const cplx lg = 2.0 * log_gamma(1.0 + mu / ah) - 2.0 * log_gamma(1.0 + (mu + kI * k) / (2.0 * ah)) -
                    2.0 * log_gamma(1.0 + (mu - kI * k) / (2.0 * ah)) - std::log(ah * k) - log_sinh(kPi * k / ah);
    return model.hbar * model.m * model.V0 * kPi * kPi * std::exp(lg);
}

}  // namespace analytic

MomentumSpec momentum_spec(const StepModel& model, double k) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw ValidationError("momentum_spec: k must be non-negative");
    MomentumSpec s;
    s.k = k;
    s.E = k * k / (2.0 * model.m);
    const double d = k * k - 2.0 * model.m * model.V0;
    s.p = std::sqrt(cplx(d, 0.0));
    if (d < 0.0) s.mu = std::sqrt(-d);
    return s;
}

cplx eigenstate_ws(const StepModel& model, Branch branch, double k, double x) {
    require_ws(model, "eigenstate_ws");
    require_branch(model, branch, k);
    const MomentumSpec s = momentum_spec(model, k);
    switch (branch) {
        case Branch::C:
            return analytic::ws_phi_c(model, k, *s.mu, x);
        case Branch::Plus:
            return analytic::ws_phi_plus(model, k, s.p, x);
        case Branch::Minus:
            return analytic::ws_phi_plus(model, k, -s.p, x);
    }
    return 0.0;
}

cplx eigenstate_ws_asymptotic(const StepModel& model, Branch branch, double k, double x, Side side) {
    require_ws(model, "eigenstate_ws_asymptotic");
    require_branch(model, branch, k);
    const MomentumSpec s = momentum_spec(model, k);
    const double hb = model.hbar;
    if (branch == Branch::C) {
        if (side == Side::Right) return std::exp(-*s.mu * x / hb);
        return ws_c_left(model, k, *s.mu, x);
    }
    const cplx p = (branch == Branch::Plus) ? s.p : -s.p;
    if (side == Side::Right) return std::exp(kI * p * x / hb);
    return ws_plus_left(model, k, p, x);
}

ScatterAmplitudes scatter_amplitudes(const StepModel& model, double k) {
    const double K = model.threshold_momentum();
    if (!(k >= K) || !(k > 0.0)) throw ValidationError("scatter_amplitudes: energy below the step");
    const double p = std::sqrt(std::max(0.0, k * k - K * K));
    if (model.family == Family::Heaviside) return {(k - p) / (k + p), 2.0 * std::sqrt(k * p) / (k + p)};
    const double ah = model.alpha * model.hbar;
    const cplx g_num = log_gamma(cplx(1.0, k / ah)) + 2.0 * log_gamma(cplx(1.0, -(k + p) / (2.0 * ah)));
    const cplx R = (k - p) / (k + p) *
                   std::exp(g_num - log_gamma(cplx(1.0, -k / ah)) - 2.0 * log_gamma(cplx(1.0, (k - p) / (2.0 * ah))));
    const cplx T = 2.0 * ah * std::sqrt(p / k) / (k + p) / kPi *
                   std::exp(log_sinh(kPi * k / ah) + g_num - log_gamma(cplx(1.0, -p / ah)));
    return {R, T};
}

double reflection_rate(const StepModel& model, double k) {
    const double K = model.threshold_momentum();
    if (!(k >= K) || !(k > 0.0)) throw ValidationError("reflection_rate: energy below the step");
    const double p = std::sqrt(std::max(0.0, k * k - K * K));
    if (model.family == Family::Heaviside) {
        const double r = (k - p) / (k + p);
        return r * r;
    }
    const double ah = model.alpha * model.hbar;
    const double A = kPi * (k - p) / (2.0 * ah);
    const double B = kPi * (k + p) / (2.0 * ah);
    if (A == 0.0) return 0.0;
    const double ratio = std::exp(A - B) * std::expm1(-2.0 * A) / std::expm1(-2.0 * B);
    return ratio * ratio;
}

double log_reflection_rate(const StepModel& model, double k) {
    const double K = model.threshold_momentum();
    if (!(k >= K) || !(k > 0.0)) throw ValidationError("log_reflection_rate: energy below the step");
    const double p = std::sqrt(std::max(0.0, k * k - K * K));
    if (model.family == Family::Heaviside) return 2.0 * std::log((k - p) / (k + p));
    const double ah = model.alpha * model.hbar;
    const double A = kPi * (k - p) / (2.0 * ah);
    const double B = kPi * (k + p) / (2.0 * ah);
    return 2.0 * (A - B + std::log(-std::expm1(-2.0 * A)) - std::log(-std::expm1(-2.0 * B)));
}

double transmission_rate(const StepModel& model, double k) {
    const double K = model.threshold_momentum();
    if (!(k >= K) || !(k > 0.0)) throw ValidationError("transmission_rate: energy below the step");
    const double p = std::sqrt(std::max(0.0, k * k - K * K));
    if (model.family == Family::Heaviside) return 4.0 * k * p / ((k + p) * (k + p));
    const double ah = model.alpha * model.hbar;
    const double B = kPi * (k + p) / (2.0 * ah);
    const double e = std::expm1(-2.0 * B);
    return std::expm1(-2.0 * kPi * k / ah) * std::expm1(-2.0 * kPi * p / ah) / (e * e);
}

InstantonAsymptote reflection_rate_smallhbar_asymptote(const StepModel& model, double k) {
    require_ws(model, "reflection_rate_smallhbar_asymptote");
    const double K = model.threshold_momentum();
    if (!(k >= K)) throw ValidationError("reflection_rate_smallhbar_asymptote: energy below the step");
    const double p = std::sqrt(std::max(0.0, k * k - K * K));
    return {std::exp(-2.0 * kPi * p / (model.alpha * model.hbar)), cplx(0.0, kPi * p / model.alpha)};
}

NormalizationCoeffs normalization_coeffs(const StepModel& model, double k) {
    if (!(k > 0.0)) throw ValidationError("normalization_coeffs: k must be positive");
    const double K = model.threshold_momentum();
    NormalizationCoeffs n;
    if (model.family == Family::Heaviside) {
        const double base = kPi * model.m * model.V0 / (k * k);
        if (k < K) {
            n.Ncc = base;
            return n;
        }
        const double p = std::sqrt(std::max(0.0, k * k - K * K));
        n.Npp = kPi * (p / k + (k * k + p * p) / (2.0 * k * k));
        n.Npm = base;
        n.sum_plus = kPi * ((k + p) * (k + p) + K * K) / (2.0 * k * k);
        n.sum_minus = kPi * ((k + p) * (k + p) - K * K) / (2.0 * k * k);
        return n;
    }
    const double ah = model.alpha * model.hbar;
    if (k < K) {
        n.Ncc = (analytic::ws_hbar_ncc(model, k, std::sqrt(K * K - k * k)) / model.hbar).real();
        return n;
    }
    const double p = std::sqrt(std::max(0.0, k * k - K * K));
    // Npp = pi p/k [1 + (sinh^2 A + sinh^2 B) / (sinh(A+B) sinh(B-A))]
    const double A = kPi * (k - p) / (2.0 * ah);
    const double B = kPi * (k + p) / (2.0 * ah);
    const double den = std::expm1(-2.0 * (A + B)) * std::expm1(-2.0 * (B - A));
    const double eA = std::expm1(-2.0 * A);
    const double eB = std::expm1(-2.0 * B);
    const double ratio = (eB * eB + std::exp(2.0 * (A - B)) * eA * eA) / den;
    n.Npp = kPi * p / k * (1.0 + ratio);
    const cplx lg = std::log(model.m * model.V0 * kPi * kPi / (ah * k)) - log_sinh(kPi * k / ah) +
                    2.0 * log_gamma(cplx(1.0, -p / ah)) - 2.0 * log_gamma(cplx(1.0, (k - p) / (2.0 * ah))) -
                    2.0 * log_gamma(cplx(1.0, -(k + p) / (2.0 * ah)));
    n.Npm = (model.V0 == 0.0) ? cplx(0.0) : std::exp(lg);
    n.sum_plus = (analytic::ws_denominator(model, k, p, true) / (2.0 * model.hbar)).real();
    n.sum_minus = (analytic::ws_denominator(model, k, p, false) / (2.0 * model.hbar)).real();
    return n;
}

cplx orthonormal_state(const StepModel& model, Branch branch, double k, double x) {
    require_branch(model, branch, k);
    const MomentumSpec s = momentum_spec(model, k);
    const double hb = model.hbar;
    if (model.family == Family::Heaviside) {
        const double V = 2.0 * model.m * model.V0;
        if (branch == Branch::C) {
            const double mu = *s.mu;
            const double v = (x <= 0.0) ? k * std::cos(k * x / hb) - mu * std::sin(k * x / hb) : k * std::exp(-mu * x / hb);
            return v / std::sqrt(kPi * hb * model.m * model.V0);
        }
        const double p = s.p.real();
        if (branch == Branch::Plus) {
            const double v = (x <= 0.0) ? k * std::cos(k * x / hb) : k * std::cos(p * x / hb);
            return 2.0 * v / std::sqrt(kPi * hb * ((k + p) * (k + p) + V));
        }
        const double v = (x <= 0.0) ? p * std::sin(k * x / hb) : k * std::sin(p * x / hb);
        return 2.0 * kI * v / std::sqrt(kPi * hb * ((k + p) * (k + p) - V));
    }
    if (branch == Branch::C) {
        const cplx mu = *s.mu;
        return analytic::ws_phi_c(model, k, mu, x) / std::sqrt(analytic::ws_hbar_ncc(model, k, mu).real());
    }
    const cplx p = s.p;
    const cplx P = analytic::ws_phase(model, k, p);
    const cplx u = analytic::ws_phi_plus(model, k, p, x);
    const cplx w = analytic::ws_phi_plus(model, k, -p, x);
    const bool plus = branch == Branch::Plus;
    const cplx num = plus ? u + P * w : u - P * w;
    return num / std::sqrt(analytic::ws_denominator(model, k, p, plus).real());
}

}  // namespace stepprop
