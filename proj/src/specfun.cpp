#include "stepprop/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "stepprop/errors.hpp"

namespace stepprop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;
constexpr int kMaxTerms = 10000;
constexpr double kSeriesEps = 1e-17;

// B_{2n} / (2n (2n-1)) for n = 1..8
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,         -1.0 / 360.0,       1.0 / 1260.0,        -1.0 / 1680.0,
    1.0 / 1188.0,       -691.0 / 360360.0,  1.0 / 156.0,         -3617.0 / 122400.0};

bool is_gamma_pole(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::nearbyint(z.real());
}

cplx stirling_series(cplx z) {
    const cplx zinv = 1.0 / z;
    const cplx zinv2 = zinv * zinv;
    cplx acc = 0.0;
    for (auto it = kStirling.rbegin(); it != kStirling.rend(); ++it) acc = acc * zinv2 + *it;
    return acc * zinv;
}

// Number of upward unit shifts so that the Stirling series is accurate.
int stirling_shift(cplx z) {
    if (z.real() < 10.0 && std::abs(z.imag()) < 10.0) return static_cast<int>(std::ceil(10.0 - z.real()));
    if (z.real() < 0.5) return static_cast<int>(std::ceil(0.5 - z.real()));
    return 0;
}

struct Series {
    cplx sum;
    double loss;  // sum |t_n| / |sum|: the number of digits lost to cancellation
};

// 2F1 power series with a conservative stopping rule (past the growth hump of
// the coefficients and with decreasing term ratio).
Series gauss_series(cplx a, cplx b, cplx c, double z) {
    if (z == 0.0) return {1.0, 1.0};
    cplx term = 1.0;
    cplx sum = 1.0;
    double abs_total = 1.0;
    int quiet = 0;
    for (int n = 0; n < kMaxTerms; ++n) {
        const double dn = n;
        const cplx ratio = (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
        term *= ratio;
        sum += term;
        const double at = std::abs(term);
        abs_total += at;
        if (at == 0.0) return {sum, abs_total / std::abs(sum)};
        const bool past_hump = dn + 1.0 > std::abs(a) && dn + 1.0 > std::abs(b);
        if (at <= kSeriesEps * std::abs(sum) && std::abs(ratio) < 0.9 && past_hump) {
            if (++quiet >= 2) return {sum, abs_total / std::abs(sum)};
        } else {
            quiet = 0;
        }
    }
    throw ConvergenceError("hyp2f1: power series did not converge within the term cap");
}

Series scaled(Series s, cplx factor) {
    return {s.sum * factor, s.loss};
}

Series better(const Series& x, const Series& y) {
    return (y.loss < x.loss) ? y : x;
}

// Direct series in z and its Euler/Pfaff transforms; the variant with the
// smallest cancellation wins.
Series hyp2f1_small_z(cplx a, cplx b, cplx c, double z, double w) {
    Series best = gauss_series(a, b, c, z);
    if (best.loss < 1e2) return best;
    const double logw = std::log(w);
    try {
        best = better(best, scaled(gauss_series(c - a, c - b, c, z), std::exp((c - a - b) * logw)));
    } catch (const ConvergenceError&) {
    }
    if (best.loss < 1e4 || z > 0.4) return best;
    const double zeta = z / (z - 1.0);
    try {
        best = better(best, scaled(gauss_series(a, c - b, c, zeta), std::exp(-a * logw)));
        best = better(best, scaled(gauss_series(c - a, b, c, zeta), std::exp(-b * logw)));
    } catch (const ConvergenceError&) {
    }
    return best;
}

// exp(sum of log gammas) with the convention that a pole in the denominator
// gives zero.
cplx gamma_quotient(std::initializer_list<cplx> num, std::initializer_list<cplx> den) {
    cplx acc = 0.0;
    for (cplx d : den) {
        if (is_gamma_pole(d)) return 0.0;
        acc -= log_gamma(d);
    }
    for (cplx n : num) acc += log_gamma(n);
    return std::exp(acc);
}

// Connection formula z -> 1 - z for c - a - b away from the integers.
Series hyp2f1_connection(cplx a, cplx b, cplx c, double z, double w) {
    const cplx s = c - a - b;
    const double logw = std::log(w);
    const cplx zpow = std::exp((1.0 - c) * std::log(z));

    const cplx coef1 = gamma_quotient({c, s}, {c - a, c - b});
    const cplx coef2 = std::exp(s * logw) * gamma_quotient({c, -s}, {a, b});

    Series f1{0.0, 1.0};
    if (coef1 != 0.0) {
        f1 = gauss_series(a, b, 1.0 - s, w);
        if (f1.loss > 1e2) f1 = better(f1, scaled(gauss_series(b - c + 1.0, a - c + 1.0, 1.0 - s, w), zpow));
    }
    Series f2{0.0, 1.0};
    if (coef2 != 0.0) {
        f2 = gauss_series(c - a, c - b, 1.0 + s, w);
        if (f2.loss > 1e2) f2 = better(f2, scaled(gauss_series(1.0 - b, 1.0 - a, 1.0 + s, w), zpow));
    }
    const cplx t1 = coef1 * f1.sum;
    const cplx t2 = coef2 * f2.sum;
    const cplx total = t1 + t2;
    const double loss =
        (std::abs(t1) * f1.loss + std::abs(t2) * f2.loss) / std::max(std::abs(total), std::numeric_limits<double>::min());
    return {total, loss};
}

cplx pochhammer(cplx a, int n) {
    cplx r = 1.0;
    for (int i = 0; i < n; ++i) r *= a + static_cast<double>(i);
    return r;
}

// c - a - b = m + eps with integer m >= 0 and small eps: the connection
// formula regrouped so that the 1/sin(pi eps) poles of the two halves cancel
// analytically. Reduces to the logarithmic form as eps -> 0.
Series hyp2f1_degenerate(cplx a, cplx b, cplx c, double w, int m, cplx eps) {
    if (std::abs(eps) < 1e-12) eps = (eps == 0.0) ? cplx(1e-12, 0.0) : eps * (1e-12 / std::abs(eps));
    const double logw = std::log(w);

    cplx part_a = 0.0;
    double abs_a = 0.0;
    if (m > 0) {
        const cplx pref = gamma_quotient({c, static_cast<double>(m) + eps}, {c - a, c - b});
        cplx term = 1.0;
        cplx sum = 1.0;
        abs_a = 1.0;
        for (int n = 0; n + 1 < m; ++n) {
            const double dn = n;
            term *= (a + dn) * (b + dn) / ((1.0 - static_cast<double>(m) - eps + dn) * (dn + 1.0)) * w;
            sum += term;
            abs_a += std::abs(term);
        }
        part_a = pref * sum;
        abs_a *= std::abs(pref);
    }

    const double dm = m;
    double mfact = 1.0;
    for (int i = 2; i <= m; ++i) mfact *= i;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    cplx lj = sign * kPi / std::sin(kPi * eps) * pochhammer(a, m) * pochhammer(b, m) / mfact *
              gamma_quotient({c}, {c - b, c - a, 1.0 - eps});
    cplx dj = log_gamma_ratio(a + dm, eps) + log_gamma_ratio(b + dm, eps) - log_gamma_ratio(1.0 + dm, eps) -
              log_gamma_ratio(1.0 - eps, eps);
    const cplx em1 = expm1(eps * logw);
    cplx wpow = std::pow(w, m);

    cplx sum = 0.0;
    double abs_total = 0.0;
    int quiet = 0;
    for (int j = 0; j < kMaxTerms; ++j) {
        const double dj_idx = j;
        const cplx term = wpow * lj * (-expm1(dj) - em1 * std::exp(dj));
        sum += term;
        const double at = std::abs(term);
        abs_total += at;
        const cplx ap = a + dm + dj_idx;
        const cplx bp = b + dm + dj_idx;
        const cplx ratio = ap * bp / ((1.0 + dm + dj_idx) * (1.0 + dj_idx - eps)) * w;
        if (lj == 0.0 || ratio == 0.0) break;
        const bool past_hump = dj_idx + 1.0 > std::abs(a + dm) && dj_idx + 1.0 > std::abs(b + dm);
        if (j > 0 && at <= kSeriesEps * std::abs(sum) && std::abs(ratio) < 0.9 && past_hump) {
            if (++quiet >= 2) {
                const cplx total = part_a + sum;
                return {total, (abs_a + abs_total) / std::abs(total)};
            }
        } else {
            quiet = 0;
        }
        lj *= ap * bp / ((1.0 + dm + dj_idx) * (1.0 + dj_idx - eps));
        dj += log1p(eps / ap) + log1p(eps / bp) - log1p(eps / (1.0 + dm + dj_idx)) + log1p(-eps / (1.0 + dj_idx));
        wpow *= w;
        if (j == kMaxTerms - 1) throw ConvergenceError("hyp2f1: logarithmic series did not converge");
    }
    const cplx total = part_a + sum;
    return {total, (abs_a + abs_total) / std::max(std::abs(total), std::numeric_limits<double>::min())};
}

Series hyp2f1_large_z(cplx a, cplx b, cplx c, double z, double w) {
    const cplx s = c - a - b;
    const double m_near = std::nearbyint(s.real());
    const cplx eps = s - m_near;
    if (std::abs(eps) < 0.25) {
        const int m = static_cast<int>(m_near);
        if (m >= 0) return hyp2f1_degenerate(a, b, c, w, m, eps);
        // Euler transform flips the sign of c - a - b.
        const cplx factor = std::exp(s * std::log(w));
        return scaled(hyp2f1_degenerate(c - a, c - b, c, w, -m, -eps), factor);
    }
    return hyp2f1_connection(a, b, c, z, w);
}

}  // namespace

cplx log1p(cplx u) {
    const cplx w = 1.0 + u;
    if (w == 1.0) return u;
    const cplx d = w - 1.0;
    if (std::abs(u) < 0.5) return std::log(w) * (u / d);
    return std::log(w);
}

cplx expm1(cplx u) {
    const double x = u.real();
    const double y = u.imag();
    const double sh = std::sin(0.5 * y);
    const double re = std::expm1(x) * std::cos(y) - 2.0 * sh * sh;
    return {re, std::exp(x) * std::sin(y)};
}

cplx log_gamma(cplx z) {
    if (is_gamma_pole(z)) throw SingularityError("log_gamma: pole of Gamma at a non-positive integer");
    const int shift = stirling_shift(z);
    cplx correction = 0.0;
    cplx zz = z;
    for (int i = 0; i < shift; ++i) {
        correction += std::log(zz);
        zz += 1.0;
    }
    return (zz - 0.5) * std::log(zz) - zz + kHalfLog2Pi + stirling_series(zz) - correction;
}

cplx gamma(cplx z) {
    return std::exp(log_gamma(z));
}

cplx rgamma(cplx z) {
    if (is_gamma_pole(z)) return 0.0;
    return std::exp(-log_gamma(z));
}

cplx log_gamma_ratio(cplx x, cplx eps) {
    if (std::abs(eps) > 0.25 * std::max(1.0, std::abs(x))) return log_gamma(x + eps) - log_gamma(x);
    // Shift x upward until the Stirling difference is accurate.
    cplx acc = 0.0;
    cplx xx = x;
    while (std::abs(xx) < 12.0 || xx.real() < 0.5) {
        acc -= log1p(eps / xx);
        xx += 1.0;
    }
    // (x+eps-1/2) log(x+eps) - (x-1/2) log x - eps + series(x+eps) - series(x)
    const cplx l1 = log1p(eps / xx);
    cplx d = (xx - 0.5) * l1 + eps * std::log(xx + eps) - eps;
    const cplx zinv = 1.0 / xx;
    const cplx zinv2 = zinv * zinv;
    cplx zpow = zinv;
    for (std::size_t n = 0; n < kStirling.size(); ++n) {
        const double expo = -(2.0 * static_cast<double>(n) + 1.0);
        d += kStirling[n] * zpow * expm1(expo * l1);
        zpow *= zinv2;
    }
    return acc + d;
}

cplx hyp2f1(cplx a, cplx b, cplx c, double z) {
    return hyp2f1(a, b, c, z, 1.0 - z);
}

cplx hyp2f1(cplx a, cplx b, cplx c, double z, double w) {
    if (!(z >= 0.0 && z <= 1.0) || !(w > 0.0 && w <= 1.0))
        throw ValidationError("hyp2f1: argument must satisfy 0 <= z < 1");
    if (is_gamma_pole(c)) throw SingularityError("hyp2f1: c is a non-positive integer");
    if (z == 0.0 || a == 0.0 || b == 0.0) return 1.0;
    // 2F1(a, b; a; z) = (1 - z)^{-b}; also used when c - a is at rounding level.
    const double near = 1e-13 * std::max(1.0, std::abs(c));
    if (std::abs(c - a) < near) return std::exp(-b * std::log(w));
    if (std::abs(c - b) < near) return std::exp(-a * std::log(w));
    if (z <= 0.5) return hyp2f1_small_z(a, b, c, z, w).sum;
    Series best = hyp2f1_large_z(a, b, c, z, w);
    if (best.loss > 1e4 && z < 0.9) {
        try {
            best = better(best, hyp2f1_small_z(a, b, c, z, w));
        } catch (const ConvergenceError&) {
        }
    }
    return best.sum;
}

}  // namespace stepprop
