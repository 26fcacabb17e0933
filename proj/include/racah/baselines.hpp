#pragma once

#include <cmath>

#include "racah/core.hpp"
#include "racah/imst.hpp"

// The four comparison algorithms: Zhu's recurrence over the order n,
// Zhu's recurrence over the index s, Daoui's corrected algorithm, and
// Gram-Schmidt re-orthogonalization. They exist to be compared against,
// so each one follows its source formulation including the documented
// weaknesses (overflow, breakdown at moderate N).

namespace racah::baselines {

enum class AlgorithmId { zhu_n, zhu_s, daoui, imst, oracle };

inline const char* algorithm_name(AlgorithmId id) {
    switch (id) {
        case AlgorithmId::zhu_n: return "zhu_n";
        case AlgorithmId::zhu_s: return "zhu_s";
        case AlgorithmId::daoui: return "daoui";
        case AlgorithmId::imst: return "imst";
        case AlgorithmId::oracle: return "oracle";
    }
    return "?";
}

namespace detail {

// Rows 0 and 1 from the closed-form initial conditions, evaluated in
// log-gamma space. The R~_1 bracket is rearranged so the weight ratio
// rho(s+1)/rho(s) never hits the pole at s = b - 1.
inline void zhu_rows01(const RacahParams& p, std::vector<double>& r0, std::vector<double>& r1) {
    const double a = p.a, b = p.b, al = p.alpha, be = p.beta;
    const int N = p.n_size;
    r0.assign(N, 0.0);
    r1.assign(N, 0.0);
    double ld20 = log_norm_d2(p, 0);
    double ld21 = N > 1 ? log_norm_d2(p, 1) : 0.0;
    for (int x = 0; x < N; ++x) {
        double s = a + x;
        double lw = log_weight_rho(p, s) + std::log(2 * s + 1);
        r0[x] = std::exp((lw - ld20) / 2);
        if (N > 1) {
            double t1 = (a + s + 1) * (b + s + al + 1) * (s - a + be + 1) * (b - s - 1) /
                        (2 * s + 1);
            double t2 = sigma_f(p, s) / (2 * s + 1);
            r1[x] = -std::exp((lw - ld21) / 2) * (t1 - t2);
        }
    }
}

}  // namespace detail

// Three-term recurrence over the order n, no stabilization. Expected to
// break down around N = 23 for a = alpha = beta = 0.
inline PolyMatrix zhu_n_generate(const RacahParams& p, int ord = -1) {
    const double a = p.a, b = p.b, al = p.alpha, be = p.beta;
    const int N = p.n_size;
    if (ord < 0) ord = N - 1;
    PolyMatrix R(p, ord);
    std::vector<double> r0, r1;
    detail::zhu_rows01(p, r0, r1);
    for (int x = 0; x < N; ++x) R.at(0, x) = r0[x];
    if (ord >= 1)
        for (int x = 0; x < N; ++x) R.at(1, x) = r1[x];
    std::vector<double> dr(ord + 1, 0.0);  // d_{n-1}/d_n
    for (int n = 1; n <= ord; ++n) dr[n] = std::sqrt(norm_ratio(p, n));
    for (int n = 1; n < ord; ++n) {
        double A = (n + 1) * (al + be + n + 1) / ((al + be + 2.0 * n + 1) * (al + be + 2.0 * n + 2));
        double u = n + (al + be) / 2;
        double v1 = a + b + (al - be) / 2;
        double v2 = b - a + (al + be) / 2;
        double C = ((al + n) * (be + n) / ((al + be + 2.0 * n) * (al + be + 2.0 * n + 1))) *
                   (v1 * v1 - u * u) * (v2 * v2 - u * u);
        double ab = a - be, bl = b + al;
        double wb = 2 * b + al, wa = 2 * a - be;
        for (int x = 0; x < N; ++x) {
            double s = a + x;
            double B = s * (s + 1) - (a * a + b * b + ab * ab + bl * bl) / 4 +
                       (al + be + 2.0 * n) * (al + be + 2.0 * n + 2) / 8 -
                       ((be * be - al * al) * (wb * wb - wa * wa)) /
                           (8 * (al + be + 2.0 * n) * (al + be + 2.0 * n + 2)) +
                       0.5;
            R.at(n + 1, x) = (B * dr[n + 1] * R.at(n, x) - C * dr[n] * dr[n + 1] * R.at(n - 1, x)) / A;
        }
    }
    return R;
}

// Recurrence over the index s. The two seed columns s = a and s = a + 1
// come from the n-recurrence (the printed initial conditions for this
// recurrence do not work).
inline PolyMatrix zhu_s_generate(const RacahParams& p, int ord = -1) {
    const int N = p.n_size;
    if (ord < 0) ord = N - 1;
    PolyMatrix R(p, ord);
    PolyMatrix Z = zhu_n_generate(p, ord);
    for (int n = 0; n <= ord; ++n) {
        R.at(n, 0) = Z.at(n, 0);
        if (N > 1) R.at(n, 1) = Z.at(n, 1);
    }
    for (int n = 0; n <= ord; ++n) {
        double lam = lambda_f(p, n);
        for (int x = 2; x < N; ++x) {
            imst::SStepPair c = imst::s_rec_coeffs(p, lam, p.a + x);
            R.at(n, x) = c.cw1 * R.at(n, x - 1) - c.cw2 * R.at(n, x - 2);
        }
    }
    return R;
}

// Daoui's algorithm with the corrected D and E factors: seed column at
// s = a from the F recurrence (integer beta only), one E step to s = a+1,
// then the s-recurrence with the per-value stabilizing condition.
inline PolyMatrix daoui_generate(const RacahParams& p, int ord = -1) {
    const double a = p.a, b = p.b, al = p.alpha, be = p.beta;
    const int N = p.n_size;
    if (ord < 0) ord = N - 1;
    int bei = static_cast<int>(std::round(be));
    if (std::abs(be - bei) > 1e-9 || bei < 0)
        throw NonIntegerBeta("daoui requires integer beta >= 0, got " + std::to_string(be));
    PolyMatrix R(p, ord);
    double F = (al + 1) / ((a + b) * (al + b - a));
    for (int k = 1; k <= bei; ++k)
        F *= (al + k + 1) * (2 * a - k + 1) / ((a + b - k) * (b - a + al + k));
    R.at(0, 0) = std::sqrt(F * (2 * a + 1));
    for (int n = 1; n <= ord; ++n) {
        double D = (n * (al + be + 2.0 * n + 1) * (al + be + n)) /
                   ((al + n) * (be + n) * (b - a + al + be + n) * (a + b + al + n) *
                    (al + be + 2.0 * n - 1) * (a + b - be - n) * (b - a - n));
        R.at(n, 0) = (a - b + n) * (be + n) * (a + b + al + n) / n * std::sqrt(D) * R.at(n - 1, 0);
    }
    for (int n = 0; n <= ord; ++n) {
        double lam = lambda_f(p, n);
        if (N > 1) R.at(n, 1) = imst::e_step(p, lam) * R.at(n, 0);
        for (int x = 2; x < N; ++x) {
            imst::SStepPair c = imst::s_rec_coeffs(p, lam, p.a + x);
            double v = c.cw1 * R.at(n, x - 1) - c.cw2 * R.at(n, x - 2);
            if (n > N / 6.0 && std::abs(v) < 1e-6 && std::abs(v) > std::abs(R.at(n, x - 1)))
                v = 0.0;
            R.at(n, x) = v;
        }
    }
    return R;
}

// Gram-Schmidt re-orthogonalization of an existing matrix: each row is
// orthogonalized against the rows before it and renormalized. Modified
// Gram-Schmidt with a second projection pass; a single classical pass
// cannot recover rows whose magnitudes span many orders.
inline PolyMatrix gsop_refine(const PolyMatrix& m) {
    constexpr double eps = 2.2204e-16;
    PolyMatrix out = m;
    const int rows = out.rows();
    const int N = out.n_size();
    for (int n = 0; n < rows; ++n) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < n; ++k) {
                double dot = 0.0;
                for (int x = 0; x < N; ++x) dot += out.at(k, x) * out.at(n, x);
                for (int x = 0; x < N; ++x) out.at(n, x) -= dot * out.at(k, x);
            }
        }
        double nrm = 0.0;
        for (int x = 0; x < N; ++x) nrm += out.at(n, x) * out.at(n, x);
        nrm = std::sqrt(nrm);
        if (nrm < 1e3 * eps)
            throw NumericalBreakdown("gsop_refine: degenerate row " + std::to_string(n));
        double inv = 1.0 / (nrm + eps);
        for (int x = 0; x < N; ++x) out.at(n, x) *= inv;
    }
    return out;
}

}  // namespace racah::baselines
