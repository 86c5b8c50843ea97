#include "stepprop/classical.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stepprop/errors.hpp"

namespace stepprop {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

void require_ws(const StepModel& model, const char* what) {
    model.validate();
    if (model.family != Family::WoodsSaxon) throw ValidationError(std::string(what) + ": Woods-Saxon family required");
}

double ct(const StepModel& model) { return std::sqrt(model.m) / (std::numbers::sqrt2 * model.alpha); }
double cs(const StepModel& model) { return std::sqrt(2.0 * model.m) / model.alpha; }

double softplus(double y) { return std::max(y, 0.0) + std::log1p(std::exp(-std::abs(y))); }

// z = 1/(1 + e^{2 alpha x}) and w = 1 - z, each to full relative precision,
// with their logs (which survive when z or w underflow); V(x) = V0 w.
struct ZW {
    double z, w;
    double log_z, log_w;
};

ZW zw_of(const StepModel& model, double x) {
    const double y = 2.0 * model.alpha * x;
    const double e = std::exp(-std::abs(y));
    const double small = e / (1.0 + e);
    const double big = 1.0 / (1.0 + e);
    ZW r = y > 0.0 ? ZW{small, big, 0.0, 0.0} : ZW{big, small, 0.0, 0.0};
    r.log_z = -softplus(y);
    r.log_w = -softplus(-y);
    return r;
}

// The two differences A - u entering t(x) and s(x): V(x) for the far side and
// -V0 z(x) for the step, with logs.
struct Site {
    cplx V;
    cplx neg_v0z;
    cplx log_V;
    cplx log_neg_v0z;
};

Site site_of(const StepModel& model, cplx x) {
    if (x.imag() == 0.0) {
        const ZW r = zw_of(model, x.real());
        const double lv0 = std::log(model.V0);
        // Same sheet as std::log(cplx(-a, -0.0)).
        return {model.V0 * r.w, cplx(-model.V0 * r.z, -0.0), lv0 + r.log_w, cplx(lv0 + r.log_z, -kPi)};
    }
    const cplx z = 1.0 / (1.0 + std::exp(2.0 * model.alpha * x));
    const cplx V = model.V0 * (1.0 - z);
    return {V, -model.V0 * z, std::log(V), std::log(-model.V0 * z)};
}

// atanh(su/sA) from 1 - y = (A - u)/(sA (sA + su)), which keeps digits when
// su/sA is close to 1. log(A - u) is used when A - u underflows.
cplx atanh_stable(cplx su, cplx sA, cplx a_minus_u, cplx log_a_minus_u) {
    const cplx y = su / sA;
    const cplx d = sA * (sA + su);
    const cplx log_one_minus_y =
        std::abs(a_minus_u) > 1e-250 ? std::log(a_minus_u / d) : log_a_minus_u - std::log(d);
    return 0.5 * (log1p(y) - log_one_minus_y);
}

// atanh(q)/q for real 0 <= q < 1.
double atanh_over(double q) {
    if (q < 1e-4) return 1.0 + q * q / 3.0 + q * q * q * q / 5.0;
    return std::atanh(q) / q;
}

// Real-energy pieces of t(x) = ct (g1 - g2) and s(x) = cs (r1 - r2). For
// E > V0 the constant i pi/2 branch term of the step part is dropped (it
// cancels in differences and is the topological contribution in sums).
struct RealPieces {
    double g1, g2, r1, r2;
    double dg1, dg2;  // dg/dE
    double u;
};

RealPieces real_pieces(const StepModel& model, double E, double x) {
    const double V0 = model.V0;
    const ZW zw = zw_of(model, x);
    const double V = V0 * zw.w;
    const double u = E - V;
    if (!(u > 0.0)) throw ValidationError("classical: endpoint is not classically allowed at this energy");
    RealPieces p{};
    p.u = u;
    const double su = std::sqrt(u);
    // Far side of the step: A = E, A - u = V.
    const double y2 = std::sqrt(u / E);
    const double ath2 = std::log1p(y2) + 0.5 * (std::log(E / V0) - zw.log_w);
    p.g2 = ath2 / std::sqrt(E);
    p.r2 = std::sqrt(E) * ath2;
    p.dg2 = (1.0 / su - p.g2) / (2.0 * E);
    // Step part: A = E - V0.
    if (E < V0) {
        const double B = V0 - E;
        const double w = std::sqrt(u / B);
        const double at = std::atan(w);
        p.g1 = -at / std::sqrt(B);
        p.r1 = std::sqrt(B) * at;
        p.dg1 = -(1.0 / su - p.g1) / (2.0 * B);
    } else {
        const double A = E - V0;
        const double q = std::sqrt(A / u);
        if (q < 0.5) {
            const double ao = atanh_over(q);
            p.g1 = ao / su;
            p.r1 = A * ao / su;
        } else {
            // 1 - q = V0 z / (u (1 + q)); z may underflow on the right plateau.
            const double ath = std::log1p(q) + 0.5 * (std::log(u / V0) - zw.log_z);
            p.g1 = ath / std::sqrt(A);
            p.r1 = std::sqrt(A) * ath;
        }
        const double q2 = q * q;
        if (q2 < 1e-3) {
            p.dg1 = -(1.0 / (2.0 * u * su)) * (1.0 / 3.0 + q2 / 5.0 + q2 * q2 / 7.0 + q2 * q2 * q2 / 9.0);
        } else {
            p.dg1 = (1.0 / su - p.g1) / (2.0 * A);
        }
    }
    return p;
}

double t_real(const StepModel& model, const RealPieces& p) { return ct(model) * (p.g1 - p.g2); }
double dt_real(const StepModel& model, const RealPieces& p) { return ct(model) * (p.dg1 - p.dg2); }
double s_real(const StepModel& model, const RealPieces& p) { return cs(model) * (p.r1 - p.r2); }

double v_max(const StepModel& model, double x0, double x1) { return potential_value(model, std::max(x0, x1)); }

// ---- complex energy with branch tracking ----

struct PointBranch {
    cplx su;  // sqrt(E - V(x))
    cplx a1;  // atanh(su / sA1)
    cplx a2;  // atanh(su / sE)
};

struct Branches {
    cplx sA1;  // sqrt(E - V0)
    cplx sE;
    PointBranch p0;
    PointBranch p1;
};

cplx nearest_sign(cplx v, cplx ref) { return std::abs(v - ref) <= std::abs(v + ref) ? v : -v; }

cplx nearest_branch(cplx v, cplx ref) {
    const double n = std::round((ref - v).imag() / kPi);
    return v + kI * (kPi * n);
}

PointBranch point_branch(const StepModel& model, cplx E, double x, cplx sA1, cplx sE, const PointBranch* ref) {
    const Site st = site_of(model, cplx(x, 0.0));
    PointBranch b;
    b.su = std::sqrt(E - st.V);
    if (ref) b.su = nearest_sign(b.su, ref->su);
    b.a1 = atanh_stable(b.su, sA1, st.neg_v0z, st.log_neg_v0z);
    b.a2 = atanh_stable(b.su, sE, st.V, st.log_V);
    if (ref) {
        b.a1 = nearest_branch(b.a1, ref->a1);
        b.a2 = nearest_branch(b.a2, ref->a2);
    }
    return b;
}

Branches branches_at(const StepModel& model, cplx E, double x0, double x1, const Branches* ref) {
    Branches b;
    b.sA1 = std::sqrt(E - model.V0);
    b.sE = std::sqrt(E);
    if (ref) {
        b.sA1 = nearest_sign(b.sA1, ref->sA1);
        b.sE = nearest_sign(b.sE, ref->sE);
    }
    b.p0 = point_branch(model, E, x0, b.sA1, b.sE, ref ? &ref->p0 : nullptr);
    b.p1 = point_branch(model, E, x1, b.sA1, b.sE, ref ? &ref->p1 : nullptr);
    return b;
}

// Walk from the branches at E_from to E_to in small steps so that every
// square root and atanh stays on the sheet reached by continuity.
Branches continue_branches(const StepModel& model, const Branches& from, cplx E_from, cplx E_to, double x0,
                           double x1) {
    const double step = 0.005 * std::max(model.V0, std::abs(E_from));
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(E_to - E_from) / step)));
    Branches b = from;
    for (int i = 1; i <= n; ++i) {
        const cplx E = E_from + (E_to - E_from) * (static_cast<double>(i) / n);
        b = branches_at(model, E, x0, x1, &b);
    }
    return b;
}

struct BounceEval {
    cplx T;
    cplx dT;
    cplx S_red;  // -(s0 + s1)
};

BounceEval bounce_eval(const StepModel& model, cplx E, const Branches& b) {
    auto g1 = [&](const PointBranch& p) { return p.a1 / b.sA1; };
    auto g2 = [&](const PointBranch& p) { return p.a2 / b.sE; };
    const cplx A1 = E - model.V0;
    auto t = [&](const PointBranch& p) { return ct(model) * (g1(p) - g2(p)); };
    auto dt = [&](const PointBranch& p) {
        return ct(model) * ((1.0 / p.su - g1(p)) / (2.0 * A1) - (1.0 / p.su - g2(p)) / (2.0 * E));
    };
    auto s = [&](const PointBranch& p) { return cs(model) * (b.sA1 * p.a1 - b.sE * p.a2); };
    return {-(t(b.p0) + t(b.p1)), -(dt(b.p0) + dt(b.p1)), -(s(b.p0) + s(b.p1))};
}

// Principal-branch state at a real energy inside the bounce window, nudged
// off the axis.
Branches real_start(const StepModel& model, double x0, double x1, double E_real) {
    return branches_at(model, cplx(E_real, 1e-12), x0, x1, nullptr);
}

double bounce_start_energy(const StepModel& model, double x0, double x1) {
    const double vm = v_max(model, x0, x1);
    return vm + 0.5 * (model.V0 - vm);
}

// Logistic map of s in R onto the open bounce window (Vmax, V0).
struct BounceWindow {
    double lo;
    double hi;
    double energy(double s) const { return lo + (hi - lo) / (1.0 + std::exp(-s)); }
};

constexpr double kWindowS = 36.0;
constexpr int kWindowNodes = 1441;

}  // namespace

void BoundarySpec::validate() const {
    if (!std::isfinite(x0) || !std::isfinite(x1)) throw ValidationError("BoundarySpec: positions must be finite");
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("BoundarySpec: T must be positive");
}

std::string to_string(SaddleKind k) {
    switch (k) {
        case SaddleKind::Direct:
            return "direct";
        case SaddleKind::LowBounce:
            return "low_bounce";
        case SaddleKind::HighBounce:
            return "high_bounce";
        case SaddleKind::CausticSaddle:
            return "caustic";
        case SaddleKind::TopologicalSaddle:
            return "topological";
    }
    return "unknown";
}

SaddleKind saddle_kind_from_string(const std::string& s) {
    for (SaddleKind k : {SaddleKind::Direct, SaddleKind::LowBounce, SaddleKind::HighBounce, SaddleKind::CausticSaddle,
                         SaddleKind::TopologicalSaddle})
        if (to_string(k) == s) return k;
    throw ValidationError("unknown saddle kind '" + s + "'");
}

cplx turning_point(const StepModel& model, cplx E) {
    require_ws(model, "turning_point");
    if (E == 0.0 || E == model.V0) throw ValidationError("turning_point: E in {0, V0} is branch-degenerate");
    return std::atanh((2.0 * E - model.V0) / model.V0) / model.alpha;
}

cplx time_of_flight(const StepModel& model, cplx E, cplx x) {
    require_ws(model, "time_of_flight");
    if (E == 0.0 || E == model.V0) throw ValidationError("time_of_flight: E in {0, V0} is branch-degenerate");
    const Site st = site_of(model, x);
    const cplx su = std::sqrt(E - st.V);
    const cplx sA1 = std::sqrt(E - model.V0);
    const cplx sE = std::sqrt(E);
    const cplx g1 = atanh_stable(su, sA1, st.neg_v0z, st.log_neg_v0z) / sA1;
    const cplx g2 = atanh_stable(su, sE, st.V, st.log_V) / sE;
    return ct(model) * (g1 - g2);
}

cplx reduced_action(const StepModel& model, cplx E, cplx x) {
    require_ws(model, "reduced_action");
    if (E == 0.0 || E == model.V0) throw ValidationError("reduced_action: E in {0, V0} is branch-degenerate");
    const Site st = site_of(model, x);
    const cplx su = std::sqrt(E - st.V);
    const cplx sA1 = std::sqrt(E - model.V0);
    const cplx sE = std::sqrt(E);
    return cs(model) * (sA1 * atanh_stable(su, sA1, st.neg_v0z, st.log_neg_v0z) -
                        sE * atanh_stable(su, sE, st.V, st.log_V));
}

double direct_time(const StepModel& model, double E, double x0, double x1) {
    require_ws(model, "direct_time");
    return std::abs(t_real(model, real_pieces(model, E, x1)) - t_real(model, real_pieces(model, E, x0)));
}

double direct_time_derivative(const StepModel& model, double E, double x0, double x1) {
    require_ws(model, "direct_time_derivative");
    const RealPieces p0 = real_pieces(model, E, x0);
    const RealPieces p1 = real_pieces(model, E, x1);
    const double sign = (t_real(model, p1) >= t_real(model, p0)) ? 1.0 : -1.0;
    return sign * (dt_real(model, p1) - dt_real(model, p0));
}

double bounce_time(const StepModel& model, double E, double x0, double x1) {
    require_ws(model, "bounce_time");
    if (!(E < model.V0)) throw ValidationError("bounce_time: E must lie below V0");
    return -(t_real(model, real_pieces(model, E, x0)) + t_real(model, real_pieces(model, E, x1)));
}

double bounce_time_derivative(const StepModel& model, double E, double x0, double x1) {
    require_ws(model, "bounce_time_derivative");
    if (!(E < model.V0)) throw ValidationError("bounce_time_derivative: E must lie below V0");
    return -(dt_real(model, real_pieces(model, E, x0)) + dt_real(model, real_pieces(model, E, x1)));
}

double topological_time(const StepModel& model, double E, double x0, double x1) {
    require_ws(model, "topological_time");
    if (!(E >= model.V0)) throw ValidationError("topological_time: E must be at least V0");
    return -(t_real(model, real_pieces(model, E, x0)) + t_real(model, real_pieces(model, E, x1)));
}

namespace {

double topological_time_derivative(const StepModel& model, double E, double x0, double x1) {
    return -(dt_real(model, real_pieces(model, E, x0)) + dt_real(model, real_pieces(model, E, x1)));
}

cplx momentum(const StepModel& model, double E, double x) {
    return std::sqrt(2.0 * model.m * (E - potential_value(model, x)));
}

ClassicalSaddle real_saddle(const StepModel& model, const BoundarySpec& bvp, SaddleKind kind, double E) {
    ClassicalSaddle s;
    s.kind = kind;
    s.E = E;
    const RealPieces p0 = real_pieces(model, E, bvp.x0);
    const RealPieces p1 = real_pieces(model, E, bvp.x1);
    if (kind == SaddleKind::Direct) {
        const double sign = (t_real(model, p1) >= t_real(model, p0)) ? 1.0 : -1.0;
        s.S = -E * bvp.T + sign * (s_real(model, p1) - s_real(model, p0));
    } else {
        s.S = -E * bvp.T - (s_real(model, p0) + s_real(model, p1));
    }
    s.vv = van_vleck(model, s, bvp);
    return s;
}

std::string table_note(const std::vector<std::pair<double, double>>& table) {
    std::ostringstream os;
    os << " (scanned T(E):";
    const std::size_t stride = std::max<std::size_t>(1, table.size() / 8);
    for (std::size_t i = 0; i < table.size(); i += stride) os << " [" << table[i].first << ", " << table[i].second << "]";
    os << ")";
    return os.str();
}

// Sign-change scan of f on the nodes followed by TOMS 748 on each bracket.
template <class F>
std::vector<double> bracket_roots(const F& f, const std::vector<double>& nodes) {
    std::vector<double> roots;
    std::vector<double> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = f(nodes[i]);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (vals[i] == 0.0) {
            roots.push_back(nodes[i]);
            continue;
        }
        if ((vals[i] < 0.0) != (vals[i + 1] < 0.0) && std::isfinite(vals[i]) && std::isfinite(vals[i + 1])) {
            std::uintmax_t it = 200;
            const auto r = boost::math::tools::toms748_solve(f, nodes[i], nodes[i + 1], vals[i], vals[i + 1],
                                                             boost::math::tools::eps_tolerance<double>(52), it);
            roots.push_back(0.5 * (r.first + r.second));
        }
    }
    return roots;
}

}  // namespace

std::optional<BounceMinimum> bounce_time_minimum(const StepModel& model, double x0, double x1) {
    require_ws(model, "bounce_time_minimum");
    const BounceWindow win{v_max(model, x0, x1), model.V0};
    if (!(win.hi > win.lo)) return std::nullopt;
    auto Tb = [&](double s) {
        const double E = win.energy(s);
        if (!(E > win.lo) || !(E < win.hi)) return std::numeric_limits<double>::infinity();
        return bounce_time(model, E, x0, x1);
    };
    double best_s = 0.0;
    double best = std::numeric_limits<double>::infinity();
    int best_i = -1;
    for (int i = 0; i < kWindowNodes; ++i) {
        const double s = -kWindowS + 2.0 * kWindowS * i / (kWindowNodes - 1);
        const double v = Tb(s);
        if (v < best) {
            best = v;
            best_s = s;
            best_i = i;
        }
    }
    if (best_i <= 0 || best_i >= kWindowNodes - 1) return std::nullopt;
    const double h = 2.0 * kWindowS / (kWindowNodes - 1);
    const auto r = boost::math::tools::brent_find_minima(Tb, best_s - h, best_s + h, 50);
    const double E = win.energy(r.first);
    // Curvature in E by central differences of T_b'(E).
    const double dE = 1e-5 * std::min(E - win.lo, win.hi - E);
    const double curv =
        (bounce_time_derivative(model, E + dE, x0, x1) - bounce_time_derivative(model, E - dE, x0, x1)) / (2.0 * dE);
    return BounceMinimum{E, r.second, curv};
}

std::vector<ClassicalSaddle> heaviside_paths(const StepModel& model, const BoundarySpec& bvp) {
    model.validate();
    bvp.validate();
    if (model.family != Family::Heaviside) throw ValidationError("heaviside_paths: Heaviside family required");
    const double m = model.m;
    const double V0 = model.V0;
    const double T = bvp.T;
    const double x0 = bvp.x0;
    const double x1 = bvp.x1;
    const bool left0 = x0 <= 0.0;
    const bool left1 = x1 <= 0.0;
    std::vector<ClassicalSaddle> out;
    auto push = [&](SaddleKind kind, double E, double S, double vv) {
        ClassicalSaddle s;
        s.kind = kind;
        s.E = E;
        s.S = S;
        s.vv = vv;
        out.push_back(s);
    };
    const double d = x1 - x0;
    const double sum = x0 + x1;
    if (left0 && left1) {
        push(SaddleKind::Direct, m * d * d / (2.0 * T * T), m * d * d / (2.0 * T), -m / T);
        const double Eb = m * sum * sum / (2.0 * T * T);
        if (Eb < V0) push(SaddleKind::LowBounce, Eb, m * sum * sum / (2.0 * T), m / T);
        const double L = std::abs(x0) + std::abs(x1);
        if (T >= std::sqrt(m / (2.0 * V0)) * L && V0 > 0.0)
            push(SaddleKind::HighBounce, V0, std::sqrt(2.0 * m * V0) * L - V0 * T, 0.0);
        return out;
    }
    if (!left0 && !left1) {
        push(SaddleKind::Direct, V0 + m * d * d / (2.0 * T * T), m * d * d / (2.0 * T) - V0 * T, -m / T);
        // Reflection at the discontinuity from the high side.
        push(SaddleKind::LowBounce, V0 + m * sum * sum / (2.0 * T * T), m * sum * sum / (2.0 * T) - V0 * T, m / T);
        return out;
    }
    // Crossing: T = m|xL|/pL + m|xR|/pR with pL = sqrt(2mE), pR = sqrt(2m(E - V0)).
    const double xl = left0 ? std::abs(x0) : std::abs(x1);
    const double xr = left0 ? std::abs(x1) : std::abs(x0);
    auto time = [&](double E) { return m * xl / std::sqrt(2.0 * m * E) + m * xr / std::sqrt(2.0 * m * (E - V0)); };
    double lo = V0 * (1.0 + 1e-15) + 1e-300;
    if (xr == 0.0) lo = V0;
    double hi = std::max(2.0 * V0, 1.0) + m * (xl + xr) * (xl + xr) / (2.0 * T * T);
    while (time(hi) > T) hi *= 2.0;
    std::uintmax_t it = 300;
    const auto r = boost::math::tools::toms748_solve([&](double E) { return time(E) - T; }, std::max(lo, V0 + 1e-300),
                                                     hi, boost::math::tools::eps_tolerance<double>(52), it);
    const double E = 0.5 * (r.first + r.second);
    const double pl = std::sqrt(2.0 * m * E);
    const double pr = std::sqrt(2.0 * m * (E - V0));
    const double S = -E * T + pl * xl + pr * xr;
    const double dT = -m * m * xl / (pl * pl * pl) - m * m * xr / (pr * pr * pr);
    push(SaddleKind::Direct, E, S, m * m / (pl * pr * dT));
    return out;
}

std::vector<ClassicalSaddle> solve_real_paths(const StepModel& model, const BoundarySpec& bvp) {
    model.validate();
    bvp.validate();
    if (model.family == Family::Heaviside) return heaviside_paths(model, bvp);
    if (model.V0 == 0.0) {
        const double d = bvp.x1 - bvp.x0;
        ClassicalSaddle s;
        s.E = model.m * d * d / (2.0 * bvp.T * bvp.T);
        s.S = model.m * d * d / (2.0 * bvp.T);
        s.vv = -model.m / bvp.T;
        return {s};
    }
    const double x0 = bvp.x0;
    const double x1 = bvp.x1;
    const double T = bvp.T;
    const double V0 = model.V0;
    const double vm = v_max(model, x0, x1);
    std::vector<ClassicalSaddle> out;
    std::vector<std::pair<double, double>> table;

    // Direct branch: E = Vmax + delta, delta log-spaced (60 per decade).
    if (x0 != x1) {
        std::vector<double> nodes;
        const double lo = std::log10(1e-6 * std::max(V0, 1e-300));
        const double hi = std::log10(50.0 * std::max(V0, 1.0) + 1e3 * model.m * (x1 - x0) * (x1 - x0) / (T * T));
        for (double e = lo; e <= hi; e += 1.0 / 60.0) nodes.push_back(e);
        auto f = [&](double e) {
            const double E = vm + std::pow(10.0, e);
            const double t = direct_time(model, E, x0, x1);
            return t - T;
        };
        for (double e : nodes) table.emplace_back(vm + std::pow(10.0, e), f(e) + T);
        for (double e : bracket_roots(f, nodes))
            out.push_back(real_saddle(model, bvp, SaddleKind::Direct, vm + std::pow(10.0, e)));
    }

    // Bounce branch on (Vmax, V0).
    if (V0 > vm) {
        const BounceWindow win{vm, V0};
        std::vector<double> nodes;
        for (int i = 0; i < kWindowNodes; ++i) nodes.push_back(-kWindowS + 2.0 * kWindowS * i / (kWindowNodes - 1));
        auto f = [&](double s) {
            const double E = win.energy(s);
            if (!(E > vm) || !(E < V0)) return s < 0 ? direct_time(model, vm * (1 + 1e-15) + 1e-300, x0, x1) - T : 1e300;
            return bounce_time(model, E, x0, x1) - T;
        };
        std::vector<double> Es;
        for (double s : bracket_roots(f, nodes)) Es.push_back(win.energy(s));
        std::sort(Es.begin(), Es.end());
        std::optional<BounceMinimum> mn;
        if (Es.size() == 1) mn = bounce_time_minimum(model, x0, x1);
        for (std::size_t i = 0; i < Es.size(); ++i) {
            SaddleKind kind = i == 0 ? SaddleKind::LowBounce : SaddleKind::HighBounce;
            if (Es.size() == 1 && mn && Es[0] > mn->E) kind = SaddleKind::HighBounce;
            out.push_back(real_saddle(model, bvp, kind, Es[i]));
        }
    }
    if (out.empty()) throw NoSolutionError("solve_real_paths: no real root bracketed" + table_note(table));
    return out;
}

cplx van_vleck(const StepModel& model, const ClassicalSaddle& saddle, const BoundarySpec& bvp) {
    model.validate();
    bvp.validate();
    const double m = model.m;
    auto check = [](cplx dT) {
        if (std::abs(dT) < 1e-12) throw CausticError("van_vleck: dT/dE vanishes (caustic)");
    };
    if (model.family == Family::Heaviside) {
        // Closed forms; the crossing path goes through the energy relation.
        const std::vector<ClassicalSaddle> all = heaviside_paths(model, bvp);
        for (const ClassicalSaddle& s : all)
            if (s.kind == saddle.kind) return s.vv;
        throw ValidationError("van_vleck: no Heaviside path of this kind at the configuration");
    }
    const double x0 = bvp.x0;
    const double x1 = bvp.x1;
    switch (saddle.kind) {
        case SaddleKind::Direct: {
            const double E = saddle.E.real();
            const double dT = direct_time_derivative(model, E, x0, x1);
            check(dT);
            return m * m / (momentum(model, E, x0) * momentum(model, E, x1) * dT);
        }
        case SaddleKind::LowBounce:
        case SaddleKind::HighBounce: {
            const double E = saddle.E.real();
            const double dT = bounce_time_derivative(model, E, x0, x1);
            check(dT);
            return -m * m / (momentum(model, E, x0) * momentum(model, E, x1) * dT);
        }
        case SaddleKind::TopologicalSaddle: {
            const double E = saddle.E.real();
            const double dT = topological_time_derivative(model, E, x0, x1);
            check(dT);
            return -m * m / (momentum(model, E, x0) * momentum(model, E, x1) * dT);
        }
        case SaddleKind::CausticSaddle: {
            const double E0 = bounce_start_energy(model, x0, x1);
            const Branches b = continue_branches(model, real_start(model, x0, x1, E0), cplx(E0, 1e-12), saddle.E, x0, x1);
            const BounceEval ev = bounce_eval(model, saddle.E, b);
            check(ev.dT);
            return -m * m / (2.0 * m * b.p0.su * b.p1.su * ev.dT);
        }
    }
    return 0.0;
}

cplx caustic_seed(const StepModel& model, const BoundarySpec& bvp) {
    require_ws(model, "caustic_seed");
    bvp.validate();
    const auto mn = bounce_time_minimum(model, bvp.x0, bvp.x1);
    if (!mn) throw NoSolutionError("caustic_seed: the bounce time has no interior minimum");
    const double gap = mn->T - bvp.T;
    if (gap <= 0.0 || !(mn->curvature > 0.0)) return cplx(mn->E, 1e-3 * model.V0);
    return cplx(mn->E, std::sqrt(2.0 * gap / mn->curvature));
}

ClassicalSaddle caustic_saddle(const StepModel& model, const BoundarySpec& bvp, cplx seed) {
    require_ws(model, "caustic_saddle");
    bvp.validate();
    const double x0 = bvp.x0;
    const double x1 = bvp.x1;
    const double T = bvp.T;
    const double E0 = bounce_start_energy(model, x0, x1);
    const double E_start = std::clamp(seed.real(), v_max(model, x0, x1) + 1e-9, model.V0 - 1e-9);
    Branches b = continue_branches(model, real_start(model, x0, x1, E0), cplx(E0, 1e-12), cplx(E_start, 1e-12), x0, x1);
    b = continue_branches(model, b, cplx(E_start, 1e-12), seed, x0, x1);

    cplx E = seed;
    BounceEval ev = bounce_eval(model, E, b);
    bool converged = false;
    for (int iter = 0; iter < 200 && !converged; ++iter) {
        const cplx F = ev.T - T;
        const cplx step = -F / ev.dT;
        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h < 40; ++h) {
            const cplx En = E + lambda * step;
            try {
                const Branches bn = continue_branches(model, b, E, En, x0, x1);
                const BounceEval en = bounce_eval(model, En, bn);
                if (std::abs(en.T - T) < std::abs(F) || std::abs(lambda * step) < 1e-15 * std::abs(E)) {
                    E = En;
                    b = bn;
                    ev = en;
                    accepted = true;
                    break;
                }
            } catch (const ValidationError&) {
            }
            lambda *= 0.5;
        }
        if (!accepted) throw ConvergenceError("caustic_saddle: damped Newton stalled");
        if (std::abs(lambda * step) < 1e-14 * std::max(1.0, std::abs(E)) || std::abs(ev.T - T) < 1e-13 * T)
            converged = true;
    }
    if (!converged) throw ConvergenceError("caustic_saddle: Newton did not converge");
    ClassicalSaddle s;
    s.kind = SaddleKind::CausticSaddle;
    s.E = E;
    s.S = -E * T + ev.S_red;
    if (std::abs(ev.dT) < 1e-12) throw CausticError("caustic_saddle: dT/dE vanishes (caustic)");
    s.vv = -model.m * model.m / (2.0 * model.m * b.p0.su * b.p1.su * ev.dT);
    s.relevant = s.S.imag() >= 0.0;
    return s;
}

ClassicalSaddle topological_saddle(const StepModel& model, const BoundarySpec& bvp) {
    require_ws(model, "topological_saddle");
    bvp.validate();
    const double x0 = bvp.x0;
    const double x1 = bvp.x1;
    const double T = bvp.T;
    const double V0 = model.V0;
    if (!(V0 > 0.0)) throw NoSolutionError("topological_saddle: no step");
    auto f = [&](double e) { return topological_time(model, V0 + std::pow(10.0, e), x0, x1) - T; };
    std::vector<double> nodes;
    for (double e = -10.0; e <= std::log10(50.0 * V0); e += 1.0 / 60.0) nodes.push_back(e);
    const std::vector<double> roots = bracket_roots(f, nodes);

    ClassicalSaddle s;
    s.kind = SaddleKind::TopologicalSaddle;
    auto action_real = [&](double E, double elapsed) {
        const RealPieces p0 = real_pieces(model, E, x0);
        const RealPieces p1 = real_pieces(model, E, x1);
        return -E * elapsed - (s_real(model, p0) + s_real(model, p1));
    };
    if (!roots.empty()) {
        const double E = V0 + std::pow(10.0, roots.front());
        s.E = E;
        s.S = cplx(action_real(E, T), kPi * std::sqrt(2.0 * model.m * (E - V0)) / (2.0 * model.alpha));
        s.vv = van_vleck(model, s, bvp);
        return s;
    }
    const double t_thr = topological_time(model, V0, x0, x1);
    const double deficit = T - t_thr;
    if (deficit > 0.0 && deficit <= 0.01 * T) {
        s.E = V0;
        // Action of the threshold path itself, which takes T(V0+) rather than T.
        s.S = action_real(V0, t_thr);
        s.at_threshold = true;
        s.vv = van_vleck(model, s, bvp);
        return s;
    }
    std::ostringstream os;
    os << "topological_saddle: Re T(E) = T has no solution above the step (T(V0+) = " << t_thr << ")";
    throw NoSolutionError(os.str());
}

double initial_velocity(const StepModel& model, const ClassicalSaddle& saddle, const BoundarySpec& bvp) {
    const double E = saddle.E.real();
    const double V = potential_value(model, bvp.x0);
    const double speed = std::sqrt(std::max(0.0, 2.0 * (E - V) / model.m));
    switch (saddle.kind) {
        case SaddleKind::Direct:
            return bvp.x1 >= bvp.x0 ? speed : -speed;
        case SaddleKind::LowBounce:
        case SaddleKind::HighBounce:
            return bvp.x0 <= 0.0 || model.family == Family::WoodsSaxon ? speed : -speed;
        default:
            throw ValidationError("initial_velocity: real saddles only");
    }
}

}  // namespace stepprop
