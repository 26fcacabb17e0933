#pragma once

#include <algorithm>
#include <optional>

#include "racah/core.hpp"

// Improved Stabilization (ImSt) generator. The polynomial plane is split
// into four parts around the controlling indices ind0 (peak of the first
// column), indN1 (peak of the last column) and the last-row split index
// N_s. Parts 1 and 2 use the plain three-term recurrence over n; Parts 3
// and 4 apply the stabilizing condition. The a = alpha = beta = 0 case
// has a dedicated symmetric fast path.

namespace racah::imst {

enum class NsStrategy { log_domain_search, quarter_fallback, auto_select };
enum class NsSource { log_domain_search, quarter_fallback };

// Part 3 keeps a guard on top of the plain stabilizing condition. The
// source text states it in two opposite directions; both are available.
enum class Part3Guard { prose_small, algorithm_large };

struct ImStConfig {
    double threshold = 1e-5;
    NsStrategy ns_strategy = NsStrategy::auto_select;
    Part3Guard part3_guard = Part3Guard::prose_small;
    int max_order = -1;  // -1 means N - 1
};

struct StabilizationReport {
    int ind0 = 0;
    int indN1 = 0;
    int ns = 0;
    int zeroed_part3 = 0;
    int zeroed_part4 = 0;
    NsSource ns_source = NsSource::log_domain_search;
    bool special_path = false;
};

// R~_0(a+N-1) from the eight-term log-gamma expression; finite for the
// whole valid parameter range.
inline double initial_value_last(const RacahParams& p) {
    using detail::lg;
    const double a = p.a, al = p.alpha, be = p.beta;
    const double N = p.n_size;
    double Y = lg(al + be + 2) + lg(2 * a + N) + lg(be + N) + lg(2 * a + 2 * N + al) -
               lg(2 * a + 2 * N - 1) - lg(be + 1) - lg(al + be + N + 1) -
               lg(2 * a + N + al + 1);
    return std::exp(Y / 2);
}

inline double checked_sqrt(double v, const char* where) {
    if (v < 0.0) {
        if (v > -1e-14) return 0.0;
        throw NumericalBreakdown(std::string("negative square-root argument in ") + where);
    }
    return std::sqrt(v);
}

// Row 0, filled right to left from the last value.
inline std::vector<double> initial_row0(const RacahParams& p, double r_last) {
    const double a = p.a, b = p.b, al = p.alpha, be = p.beta;
    const int N = p.n_size;
    std::vector<double> r(N, 0.0);
    r[N - 1] = r_last;
    for (int x = N - 2; x >= 0; --x) {
        double s = a + x;
        double ratio = ((2 * s + 1) * (a - be + s + 1) * (b + s + 1) * (b + al - s - 1) *
                        (a - s - 1)) /
                       ((a + s + 1) * (b + al + s + 1) * (a - be - s - 1) * (2 * s + 3) *
                        (b - s - 1));
        if (!std::isfinite(ratio))
            throw NumericalBreakdown("initial_row0 ratio not finite at x = " + std::to_string(x));
        r[x] = checked_sqrt(ratio, "initial_row0") * r[x + 1];
    }
    return r;
}

// Row 1 as a pointwise closed-form multiplier on row 0.
inline double row1_multiplier(const RacahParams& p, double s) {
    const double a = p.a, b = p.b, al = p.alpha, be = p.beta;
    double P = (a + b + al + 1) * (be + 1) * (a - b + 1) - (a - s) * (a + s + 1) * (al + be + 2);
    double sq = checked_sqrt((al + be + 3) / ((al + 1) * (be + 1) * (a + b + al + 1) *
                                              (b - a + al + be + 1) * (b - a - 1) *
                                              (a + b - be - 1)),
                             "initial_row1");
    return P * sq;
}

inline std::vector<double> initial_row1(const RacahParams& p, const std::vector<double>& row0) {
    const int N = p.n_size;
    std::vector<double> r(N, 0.0);
    for (int x = 0; x < N; ++x) r[x] = row1_multiplier(p, p.a + x) * row0[x];
    return r;
}

// Two-term step down the first column; note the leading minus, the
// column alternates in sign.
inline double column_first_step(const RacahParams& p, int n) {
    const double a = p.a, al = p.alpha, be = p.beta;
    const double N = p.n_size;
    return -checked_sqrt(((N - n - 1) * (al + be + 2 * n + 3) * (al + be + n + 1) *
                          (be + n + 1) * (2 * a + N + al + n + 1)) /
                             ((2 * a + N - be - n - 1) * (al + be + 2 * n + 1) *
                              (al + n + 1) * (N + al + be + n + 1) * (n + 1)),
                         "column_first");
}

inline double column_last_step(const RacahParams& p, int n) {
    const double a = p.a, al = p.alpha, be = p.beta;
    const double N = p.n_size;
    return checked_sqrt(((N - n - 1) * (al + be + 2 * n + 3) * (al + be + n + 1) *
                         (al + n + 1) * (2 * a + N - be - n - 1)) /
                            ((2 * a + N + al + n + 1) * (al + be + 2 * n + 1) *
                             (be + n + 1) * (N + al + be + n + 1) * (n + 1)),
                        "column_last");
}

inline std::vector<double> column_first(const RacahParams& p, double r0a, double r1a, int ord) {
    std::vector<double> c(ord + 1, 0.0);
    c[0] = r0a;
    if (ord >= 1) c[1] = r1a;
    for (int n = 1; n < ord; ++n) c[n + 1] = column_first_step(p, n) * c[n];
    return c;
}

inline std::vector<double> column_last(const RacahParams& p, double r0last, double r1last,
                                       int ord) {
    std::vector<double> c(ord + 1, 0.0);
    c[0] = r0last;
    if (ord >= 1) c[1] = r1last;
    for (int n = 1; n < ord; ++n) c[n + 1] = column_last_step(p, n) * c[n];
    return c;
}

// argmax of |value|; ties break to the smaller index.
inline int peak_index(const std::vector<double>& col) {
    int best = 0;
    double mx = std::abs(col[0]);
    for (int i = 1; i < static_cast<int>(col.size()); ++i) {
        if (std::abs(col[i]) > mx) {
            mx = std::abs(col[i]);
            best = i;
        }
    }
    return best;
}

struct ControllingIndices {
    int ind0;
    int indN1;
};

inline ControllingIndices controlling_indices(const std::vector<double>& col_first,
                                              const std::vector<double>& col_last) {
    return {peak_index(col_first), peak_index(col_last)};
}

// Coefficients of the three-term recurrence over n: the norm ratios
// (d_{n-1}/d_n)^2 appear under the square roots, kept as linear-factor
// products so no gamma is evaluated on the fast path.
struct ThetaPair {
    double th1;
    double th2;
};

inline ThetaPair theta_coeffs(const RacahParams& p, int n, double s) {
    const double a = p.a, b = p.b, al = p.alpha, be = p.beta;
    double t0 = n * (al + be + n) / ((al + be + 2.0 * n - 1) * (al + be + 2.0 * n));
    double ab = a - be, bl = b + al;
    double t11 = s * (s + 1) - (a * a + b * b + ab * ab + bl * bl - 2) / 4 +
                 ((al + be + 2.0 * n - 2) * (al + be + 2.0 * n)) / 8 -
                 ((be * be - al * al) *
                  ((b + al / 2) * (b + al / 2) - (a - be / 2) * (a - be / 2))) /
                     (2 * (al + be + 2.0 * n - 2) * (al + be + 2.0 * n));
    double u = n - 1 + (al + be) / 2;
    double v1 = a + b + (al - be) / 2;
    double v2 = b - a + (al + be) / 2;
    double t21 = -((al + n - 1) * (be + n - 1) / ((al + be + 2.0 * n - 2) * (al + be + 2.0 * n - 1))) *
                 (v1 * v1 - u * u) * (v2 * v2 - u * u);
    double t12 = norm_ratio(p, n);
    double t22 = norm_ratio(p, n - 1);
    double th1 = t11 / t0 * checked_sqrt(t12, "theta12");
    double th2 = t21 / t0 * checked_sqrt(t12 * t22, "theta22");
    return {th1, th2};
}

inline double recurrence_step(const RacahParams& p, int n, double s, double rm1, double rm2) {
    ThetaPair t = theta_coeffs(p, n, s);
    return t.th1 * rm1 + t.th2 * rm2;
}

// Coefficients of the recurrence over s (shared with the Zhu-s and Daoui
// baselines): R(s) = cw1 * R(s-1) - cw2 * R(s-2) for s >= a + 2.
struct SStepPair {
    double cw1;
    double cw2;
};

inline SStepPair s_rec_coeffs(const RacahParams& p, double lam, double s) {
    double sg = sigma_f(p, s - 1);
    double tu = tau_f(p, s - 1);
    double den = (s - 1) * (sg + (2 * s - 1) * tu);
    double c1 = (2 * s - 1) * (sg + (s - 1) * tu - 2 * lam * s * (s - 1)) / den;
    double c2 = s * sg / den;
    double w1 = std::sqrt(rho_ratio(p, s - 1) * (2 * s + 1) / (2 * s - 1));
    double w2 = std::sqrt(rho_ratio(p, s - 1) * rho_ratio(p, s - 2) * (2 * s + 1) / (2 * s - 3));
    return {c1 * w1, c2 * w2};
}

// First s-step, s = a+1: sigma(a) = 0 reduces the recurrence to a
// single-term multiplier.
inline double e_step(const RacahParams& p, double lam) {
    const double a = p.a;
    double E = 1 - 2 * lam * (a + 1) / tau_f(p, a);
    double LD = rho_ratio(p, a) * (2 * a + 3) / (2 * a + 1);
    return E * std::sqrt(LD);
}

namespace detail {

// Log-domain forward sweep along the last row, tracking sign separately.
// Returns the peak position, or nothing once sigma(s) exceeds 4e15 (the
// recurrence has lost its accuracy there) or no peak is found.
inline std::optional<int> last_row_split_forward(const RacahParams& p) {
    using racah::detail::lg;
    const double a = p.a, al = p.alpha, be = p.beta;
    const int N = p.n_size;
    double L = (lg(2 * a + 2) + lg(N + al) + lg(al + be + 2) + lg(2 * a + N - be) -
                lg(2 * a - be + 1) - lg(2 * a + N + 1) - lg(al + 1) - lg(N + al + be + 1)) /
               2;
    for (int n = 0; n < N - 1; ++n) {
        L += (std::log(N - n - 1.0) + std::log(al + be + 2.0 * n + 3) +
              std::log(al + be + n + 1.0) + std::log(be + n + 1.0) +
              std::log(2 * a + N + al + n + 1) - std::log(2 * a + N - be - n - 1) -
              std::log(al + be + 2.0 * n + 1) - std::log(al + n + 1.0) -
              std::log(N + al + be + n + 1.0) - std::log(n + 1.0)) /
             2;
    }
    int S0 = (N - 1) % 2 == 0 ? 1 : -1;
    double lam = lambda_f(p, N - 1);
    double m = e_step(p, lam);
    double Lprev2 = L;
    int Sprev2 = S0;
    double Lprev1 = L + std::log(std::abs(m));
    int Sprev1 = S0 * (m > 0 ? 1 : -1);
    for (int x = 2; x < N; ++x) {
        double s = a + x;
        if (sigma_f(p, s) > 4e15) return std::nullopt;
        SStepPair c = s_rec_coeffs(p, lam, s);
        double t1 = std::log(std::abs(c.cw1)) + Lprev1;
        int s1 = Sprev1 * (c.cw1 > 0 ? 1 : -1);
        double t2 = std::log(std::abs(c.cw2)) + Lprev2;
        int s2 = -Sprev2 * (c.cw2 > 0 ? 1 : -1);
        double hi = std::max(t1, t2);
        double u = s1 * std::exp(t1 - hi) + s2 * std::exp(t2 - hi);
        if (u == 0.0) return std::nullopt;
        double Lx = hi + std::log(std::abs(u));
        int Sx = u > 0 ? 1 : -1;
        if (Lprev1 > Lx && Lprev1 > Lprev2) return x - 1;
        Lprev2 = Lprev1;
        Sprev2 = Sprev1;
        Lprev1 = Lx;
        Sprev1 = Sx;
    }
    return std::nullopt;
}

// Backward sweep from the right end. The first step treats R(b) = 0; the
// weight ratio at s = b has a pole, so the cancelled form is used.
inline std::optional<int> last_row_split_backward(const RacahParams& p) {
    const double a = p.a, al = p.alpha, be = p.beta;
    const int N = p.n_size;
    double L = std::log(initial_value_last(p));
    for (int n = 0; n < N - 1; ++n) {
        L += (std::log(N - n - 1.0) + std::log(al + be + 2.0 * n + 3) +
              std::log(al + be + n + 1.0) + std::log(al + n + 1.0) +
              std::log(2 * a + N - be - n - 1) - std::log(2 * a + N + al + n + 1) -
              std::log(al + be + 2.0 * n + 1) - std::log(be + n + 1.0) -
              std::log(N + al + be + n + 1.0) - std::log(n + 1.0)) /
             2;
    }
    double lam = lambda_f(p, N - 1);
    double s = a + N;
    double sg = sigma_f(p, s - 1);
    double tu = tau_f(p, s - 1);
    double LF = (2 * s - 1) * (sg + (s - 1) * tu - 2 * lam * s * (s - 1)) / (s * sg);
    double LG = rho_ratio(p, s - 2) * (2 * s - 1) / (2 * s - 3);
    if (LG <= 0) return std::nullopt;
    double Lx1 = L;
    int Sx1 = 1;
    double Lx2 = L + std::log(std::abs(LF)) - std::log(LG) / 2;
    int Sx2 = LF > 0 ? 1 : -1;
    for (int x = N - 1; x > 1; --x) {
        s = a + x;
        SStepPair c = s_rec_coeffs(p, lam, s);
        double t1 = std::log(std::abs(c.cw1)) + Lx2;
        int s1 = Sx2 * (c.cw1 > 0 ? 1 : -1);
        double t2 = Lx1;
        int s2 = -Sx1;
        double hi = std::max(t1, t2);
        double u = s1 * std::exp(t1 - hi) + s2 * std::exp(t2 - hi);
        if (u == 0.0) return std::nullopt;
        double Lx0 = hi + std::log(std::abs(u)) - std::log(std::abs(c.cw2));
        int Sx0 = (u > 0 ? 1 : -1) * (c.cw2 > 0 ? 1 : -1);
        if (Lx2 > Lx1 && Lx2 > Lx0) return x - 1;
        Lx1 = Lx2;
        Sx1 = Sx2;
        Lx2 = Lx0;
        Sx2 = Sx0;
    }
    return std::nullopt;
}

}  // namespace detail

struct NsResult {
    int ns;
    NsSource source;
};

inline NsResult last_row_split(const RacahParams& p, const ImStConfig& cfg) {
    const int N = p.n_size;
    auto fallback = [N]() {
        int ns = static_cast<int>(std::floor(N / 4.0 + 0.5));
        return NsResult{std::clamp(ns, 1, N - 1), NsSource::quarter_fallback};
    };
    if (cfg.ns_strategy == NsStrategy::quarter_fallback) return fallback();
    std::optional<int> ns = detail::last_row_split_forward(p);
    if (!ns) ns = detail::last_row_split_backward(p);
    if (!ns || *ns < 1 || *ns > N - 1) return fallback();
    return {*ns, NsSource::log_domain_search};
}

struct Result {
    PolyMatrix matrix;
    StabilizationReport report;
};

// Special case a = alpha = beta = 0. Only the upper triangle s >= n is
// computed; the rest is filled through the symmetry relation
// R~_s(n) = (-1)^{s-n} R~_n(s), bit-exactly.
inline Result generate_special(int n_size, const ImStConfig& cfg = {}) {
    const int N = n_size;
    if (N < 1) throw ConstraintViolation("n_size must be >= 1");
    const int ord = cfg.max_order < 0 ? N - 1 : cfg.max_order;
    RacahParams p = validate_params(0.0, static_cast<double>(N), 0.0, 0.0);
    PolyMatrix R(p, ord);
    StabilizationReport rep;
    rep.special_path = true;

    R.at(0, N - 1) = std::sqrt(2.0 * N - 1) / N;
    for (int x = N - 2; x >= 0; --x)
        R.at(0, x) = std::sqrt((2.0 * x + 1) / (2.0 * x + 3)) * R.at(0, x + 1);
    if (ord >= 1) {
        const double NN = static_cast<double>(N) * N;
        for (int x = 0; x < N; ++x)
            R.at(1, x) = -(NN - 2.0 * x * x - 2.0 * x - 1) * std::sqrt(3.0) / (NN - 1) * R.at(0, x);
    }
    // symmetry fills come after the row sweeps so they are never overwritten
    for (int x = 1; x <= ord; ++x) R.at(x, 0) = (x % 2 == 0 ? 1.0 : -1.0) * R.at(0, x);
    if (ord >= 1)
        for (int x = 2; x <= ord; ++x) R.at(x, 1) = (x % 2 == 1 ? 1.0 : -1.0) * R.at(1, x);
    for (int n = 1; n < ord; ++n)
        R.at(n + 1, N - 1) = (N - n - 1.0) * std::sqrt(2.0 * n + 3) / (N + n + 1.0) /
                             std::sqrt(2.0 * n + 1) * R.at(n, N - 1);

    std::vector<double> last_col(ord + 1);
    for (int n = 0; n <= ord; ++n) last_col[n] = R.at(n, N - 1);
    rep.indN1 = peak_index(last_col);
    rep.ind0 = rep.indN1;
    rep.ns = rep.indN1;

    auto theta0 = [N](int n, int x) {
        double t10 = (2.0 * x * (x + 1) + n * (n - 1.0) - static_cast<double>(N) * N + 1) *
                     std::sqrt(4.0 * n * n - 1) / (n * (static_cast<double>(N) - n) * (N + n));
        double t20 = -(n - 1.0) * (N - n + 1.0) * (N + n - 1.0) /
                     (n * (static_cast<double>(N) - n) * (N + n)) *
                     std::sqrt((2.0 * n + 1) / (2.0 * n - 3));
        return ThetaPair{t10, t20};
    };

    for (int n = 2; n <= std::min(rep.indN1 - 1, ord); ++n)
        for (int x = n; x < N - 1; ++x) {
            ThetaPair t = theta0(n, x);
            R.at(n, x) = t.th1 * R.at(n - 1, x) + t.th2 * R.at(n - 2, x);
        }
    for (int n = std::max(rep.indN1, 2); n <= ord; ++n)
        for (int x = n; x < N - 1; ++x) {
            ThetaPair t = theta0(n, x);
            double v = t.th1 * R.at(n - 1, x) + t.th2 * R.at(n - 2, x);
            if (std::abs(v) < cfg.threshold && std::abs(v) > std::abs(R.at(n - 1, x))) {
                rep.zeroed_part3 += N - 1 - x;
                break;
            }
            R.at(n, x) = v;
        }
    for (int x = 3; x <= ord; ++x)
        for (int n = 2; n < x; ++n)
            R.at(x, n) = ((x - n) % 2 == 0 ? 1.0 : -1.0) * R.at(n, x);
    return {std::move(R), rep};
}

inline Result generate(const RacahParams& p, const ImStConfig& cfg = {}) {
    if (p.special()) return generate_special(p.n_size, cfg);
    const int N = p.n_size;
    const int ord = cfg.max_order < 0 ? N - 1 : cfg.max_order;
    PolyMatrix R(p, ord);
    StabilizationReport rep;

    std::vector<double> row0 = initial_row0(p, initial_value_last(p));
    for (int x = 0; x < N; ++x) R.at(0, x) = row0[x];
    if (ord >= 1) {
        std::vector<double> row1 = initial_row1(p, row0);
        for (int x = 0; x < N; ++x) R.at(1, x) = row1[x];
    }
    for (int n = 1; n < ord; ++n) {
        R.at(n + 1, 0) = column_first_step(p, n) * R.at(n, 0);
        R.at(n + 1, N - 1) = column_last_step(p, n) * R.at(n, N - 1);
    }

    NsResult nsr = last_row_split(p, cfg);
    rep.ns = nsr.ns;
    rep.ns_source = nsr.source;

    std::vector<double> cf(ord + 1), cl(ord + 1);
    for (int n = 0; n <= ord; ++n) {
        cf[n] = R.at(n, 0);
        cl[n] = R.at(n, N - 1);
    }
    ControllingIndices ci = controlling_indices(cf, cl);
    rep.ind0 = ci.ind0;
    rep.indN1 = ci.indN1;

    // Part 1: s in [a+ns, a+N-2], n in [2, indN1-1]
    for (int x = rep.ns; x < N - 1; ++x) {
        double s = p.a + x;
        for (int n = 2; n <= std::min(rep.indN1 - 1, ord); ++n)
            R.at(n, x) = recurrence_step(p, n, s, R.at(n - 1, x), R.at(n - 2, x));
    }
    // Part 2: s in [a+1, a+ns-1], n in [2, ind0]
    for (int x = 1; x < rep.ns; ++x) {
        double s = p.a + x;
        for (int n = 2; n <= std::min(rep.ind0, ord); ++n)
            R.at(n, x) = recurrence_step(p, n, s, R.at(n - 1, x), R.at(n - 2, x));
    }
    // Part 3: s in [a+ns, a+N-2], n in [indN1, ord], stabilized with guard
    for (int x = rep.ns; x < N - 1; ++x) {
        double s = p.a + x;
        for (int n = std::max(rep.indN1, 2); n <= ord; ++n) {
            double v = recurrence_step(p, n, s, R.at(n - 1, x), R.at(n - 2, x));
            bool guard = false;
            for (int i = 0; i < n && !guard; ++i) {
                double m = std::abs(R.at(i, x));
                guard = cfg.part3_guard == Part3Guard::prose_small ? m < cfg.threshold
                                                                  : m > cfg.threshold;
            }
            if (std::abs(v) < cfg.threshold && std::abs(v) > std::abs(R.at(n - 1, x)) && guard) {
                rep.zeroed_part3 += ord - n + 1;
                break;
            }
            R.at(n, x) = v;
        }
    }
    // Part 4: s in [a+1, a+ns-1], n in [ind0+1, ord], stabilized
    for (int x = 1; x < rep.ns; ++x) {
        double s = p.a + x;
        for (int n = std::max(rep.ind0 + 1, 2); n <= ord; ++n) {
            double v = recurrence_step(p, n, s, R.at(n - 1, x), R.at(n - 2, x));
            if (std::abs(v) < cfg.threshold && std::abs(v) > std::abs(R.at(n - 1, x))) {
                rep.zeroed_part4 += ord - n + 1;
                break;
            }
            R.at(n, x) = v;
        }
    }
    if (!R.all_finite())
        throw NumericalBreakdown("imst produced non-finite values at N = " + std::to_string(N));
    return {std::move(R), rep};
}

}  // namespace racah::imst
