#pragma once

#include <complex>

namespace stepprop {

using cplx = std::complex<double>;

// Principal branch of log Gamma. Throws SingularityError at 0, -1, -2, ...
cplx log_gamma(cplx z);
cplx gamma(cplx z);
// 1/Gamma(z); entire, exactly zero at the poles of Gamma.
cplx rgamma(cplx z);

// log Gamma(x + eps) - log Gamma(x), accurate when |eps| is small.
cplx log_gamma_ratio(cplx x, cplx eps);

// Gauss hypergeometric 2F1(a, b; c; z) for real 0 <= z < 1.
cplx hyp2f1(cplx a, cplx b, cplx c, double z);
// Same, with w = 1 - z supplied by the caller so that z close to 1 keeps full
// relative precision in w.
cplx hyp2f1(cplx a, cplx b, cplx c, double z, double w);

// Complex log1p / expm1 that stay accurate for small arguments.
cplx log1p(cplx u);
cplx expm1(cplx u);

}  // namespace stepprop
