#pragma once

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "racah/core.hpp"

// Extended-precision ground truth. Evaluates the weighted polynomial
// directly from the terminating hypergeometric definition, so every
// fast algorithm can be validated against it at small N.

namespace racah::oracle {

// ~50 decimal digits; enough headroom for the gamma log-magnitudes
// reached by the Table 1 parameter regimes at N <= 256.
using BigReal = boost::multiprecision::cpp_bin_float_50;

inline BigReal log_gamma(const BigReal& x) {
    if (x <= 0)
        throw DomainError("log_gamma: x <= 0");
    return boost::math::lgamma(x);
}

inline BigReal pochhammer(const BigReal& a, int m) {
    BigReal r = 1;
    for (int i = 0; i < m; ++i) r *= (a + i);
    return r;
}

// Terminating 4F3 at z = 1. The first numerator parameter is -n; the sum
// has n + 1 terms. Terms are built by a running product update.
inline BigReal hyp4f3_terminating(const BigReal (&num)[4], const BigReal (&den)[3], int n) {
    BigReal total = 1;
    BigReal term = 1;
    for (int k = 0; k < n; ++k) {
        BigReal d = (den[0] + k) * (den[1] + k) * (den[2] + k) * (k + 1);
        if (d == 0)
            throw DomainError("hyp4f3: denominator Pochhammer vanishes at k = " +
                              std::to_string(k));
        term *= (num[0] + k) * (num[1] + k) * (num[2] + k) * (num[3] + k);
        term /= d;
        total += term;
    }
    return total;
}

inline BigReal weight_rho_big(const RacahParams& p, const BigReal& s) {
    const BigReal a = p.a, b = p.b, al = p.alpha, be = p.beta;
    return exp(log_gamma(a + s + 1) + log_gamma(b + s + al + 1) + log_gamma(b + al - s) +
               log_gamma(s - a + be + 1) - log_gamma(b + s + 1) - log_gamma(b - s) -
               log_gamma(s - a + 1) - log_gamma(a - be + s + 1));
}

inline BigReal norm_d2_big(const RacahParams& p, int n) {
    const BigReal a = p.a, b = p.b, al = p.alpha, be = p.beta;
    return exp(log_gamma(al + n + 1) + log_gamma(be + n + 1) + log_gamma(a + b + al + n + 1) +
               log_gamma(b - a + al + be + n + 1) - log(BigReal(al + be + 2 * n + 1)) -
               log_gamma(BigReal(n + 1)) - log_gamma(b - a - n) - log_gamma(al + be + n + 1) -
               log_gamma(a + b - n - be));
}

// R~_n(s) = R_n(s) * sqrt(rho(s) (2s+1) / d^2_n), all in extended precision.
inline BigReal weighted_drp_exact(const RacahParams& p, int n, const BigReal& s) {
    const BigReal a = p.a, b = p.b, al = p.alpha, be = p.beta;
    BigReal pre = pochhammer(a + b + al + 1, n) * pochhammer(be + 1, n) *
                  pochhammer(a - b + 1, n);
    for (int k = 2; k <= n; ++k) pre /= k;
    BigReal num[4] = {BigReal(-n), a - s, a + s + 1, al + be + n + 1};
    BigReal den[3] = {be + 1, a + b + al + 1, a - b + 1};
    BigReal rn = pre * hyp4f3_terminating(num, den, n);
    return rn * sqrt(weight_rho_big(p, s) * (2 * s + 1) / norm_d2_big(p, n));
}

inline PolyMatrix exact_matrix(const RacahParams& p, int size_limit = 256) {
    if (p.n_size > size_limit)
        throw SizeLimit("oracle exact_matrix limited to N <= " + std::to_string(size_limit));
    const int N = p.n_size;
    PolyMatrix m(p, N - 1);
    for (int n = 0; n < N; ++n)
        for (int x = 0; x < N; ++x)
            m.at(n, x) = static_cast<double>(weighted_drp_exact(p, n, BigReal(p.a + x)));
    return m;
}

}  // namespace racah::oracle
