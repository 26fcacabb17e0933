#pragma once

#include <chrono>
#include <functional>
#include <limits>

#include "racah/baselines.hpp"
#include "racah/core.hpp"
#include "racah/imst.hpp"

// Experimental apparatus: orthogonality error, maximum-size search,
// 2D moments and reconstruction, NMSE/PSNR, the covariance restriction
// study and a small timing harness.

namespace racah::analysis {

using baselines::AlgorithmId;

struct ImageGrid {
    int rows = 0;
    int cols = 0;
    std::vector<double> pixels;

    double& at(int r, int c) { return pixels[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return pixels[static_cast<size_t>(r) * cols + c]; }
};

struct MomentMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> coeffs;

    double& at(int r, int c) { return coeffs[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return coeffs[static_cast<size_t>(r) * cols + c]; }
};

// E = max |R R^T - I|
inline double orthogonality_error(const PolyMatrix& m) {
    const int rows = m.rows();
    const int N = m.n_size();
    double e = 0.0;
    for (int n = 0; n < rows; ++n)
        for (int k = n; k < rows; ++k) {
            double g = 0.0;
            for (int x = 0; x < N; ++x) g += m.at(n, x) * m.at(k, x);
            double d = std::abs(g - (n == k ? 1.0 : 0.0));
            if (d > e) e = d;
        }
    return e;
}

// Maps N to the Table 1 column parameter ratios.
struct ParamRule {
    std::function<RacahParams(int)> make;
    std::string name;
};

inline ParamRule rule_zero() {
    return {[](int N) { return validate_params(0.0, N, 0.0, 0.0); }, "a=0,alpha=0,beta=0"};
}

inline ParamRule rule_quarter() {
    return {[](int N) {
                double a = std::floor(N / 4.0 + 0.5);
                double al = std::floor(N / 8.0 + 0.5);
                double be = std::floor(N / 16.0 + 0.5);
                return validate_params(a, a + N, al, be);
            },
            "a=N/4,alpha=N/8,beta=N/16"};
}

inline PolyMatrix generate_by_id(AlgorithmId id, const RacahParams& p, int ord = -1) {
    switch (id) {
        case AlgorithmId::zhu_n: return baselines::zhu_n_generate(p, ord);
        case AlgorithmId::zhu_s: return baselines::zhu_s_generate(p, ord);
        case AlgorithmId::daoui: return baselines::daoui_generate(p, ord);
        case AlgorithmId::imst: {
            imst::ImStConfig cfg;
            cfg.max_order = ord;
            return imst::generate(p, cfg).matrix;
        }
        case AlgorithmId::oracle: break;
    }
    throw Error("generate_by_id: unsupported algorithm");
}

struct MaxSizeResult {
    int max_n = 0;
    bool time_limited = false;
};

// Doubling then bisection for the largest N with E <= e_max. Each trial
// is bounded by t_max seconds; hitting the budget returns best-so-far
// with the flag set.
inline MaxSizeResult max_size_search(AlgorithmId alg, const ParamRule& rule, double e_max,
                                     double t_max_s, int ceiling = 1 << 20) {
    using clock = std::chrono::steady_clock;
    auto trial = [&](int N, bool& timed_out) {
        auto t0 = clock::now();
        bool pass = false;
        try {
            PolyMatrix m = generate_by_id(alg, rule.make(N));
            pass = m.all_finite() && orthogonality_error(m) <= e_max;
        } catch (const Error&) {
            pass = false;
        }
        double dt = std::chrono::duration<double>(clock::now() - t0).count();
        if (dt > t_max_s) timed_out = true;
        return pass;
    };
    MaxSizeResult res;
    bool timed_out = false;
    int lo = 0, hi = 2;
    while (hi <= ceiling) {
        if (!trial(hi, timed_out)) break;
        lo = hi;
        if (timed_out) {
            res.max_n = lo;
            res.time_limited = true;
            return res;
        }
        hi *= 2;
    }
    if (hi > ceiling) {
        res.max_n = lo;
        return res;
    }
    // E is not perfectly monotone in N; bisect, then scan upward a little
    // past the first failure to catch stragglers.
    while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        if (trial(mid, timed_out))
            lo = mid;
        else
            hi = mid;
        if (timed_out) {
            res.max_n = lo;
            res.time_limited = true;
            return res;
        }
    }
    int best = lo;
    int probe_end = std::min(ceiling, lo + std::max(4, lo / 20));
    for (int n = lo + 1; n <= probe_end && !timed_out; ++n)
        if (trial(n, timed_out)) best = n;
    res.max_n = best;
    res.time_limited = timed_out;
    return res;
}

// phi = Rx * f * Ry^T
inline MomentMatrix moments_2d(const ImageGrid& img, const PolyMatrix& rx, const PolyMatrix& ry) {
    if (img.rows != rx.n_size() || img.cols != ry.n_size())
        throw DimensionMismatch("moments_2d: image does not match polynomial sizes");
    const int n1 = rx.rows(), n2 = ry.rows();
    // tmp = Rx * f
    std::vector<double> tmp(static_cast<size_t>(n1) * img.cols, 0.0);
    for (int n = 0; n < n1; ++n)
        for (int x = 0; x < img.rows; ++x) {
            double w = rx.at(n, x);
            if (w == 0.0) continue;
            for (int y = 0; y < img.cols; ++y)
                tmp[static_cast<size_t>(n) * img.cols + y] += w * img.at(x, y);
        }
    MomentMatrix mom{n1, n2, std::vector<double>(static_cast<size_t>(n1) * n2, 0.0)};
    for (int n = 0; n < n1; ++n)
        for (int m = 0; m < n2; ++m) {
            double acc = 0.0;
            for (int y = 0; y < img.cols; ++y)
                acc += tmp[static_cast<size_t>(n) * img.cols + y] * ry.at(m, y);
            mom.at(n, m) = acc;
        }
    return mom;
}

// f_hat = Rx^T * phi_capped * Ry, using only moments with n, m < order_cap.
inline ImageGrid reconstruct_2d(const MomentMatrix& mom, const PolyMatrix& rx,
                                const PolyMatrix& ry, int order_cap = -1) {
    const int n1 = mom.rows, n2 = mom.cols;
    if (n1 != rx.rows() || n2 != ry.rows())
        throw DimensionMismatch("reconstruct_2d: moments do not match polynomial sizes");
    int cap1 = order_cap < 0 ? n1 : std::min(order_cap, n1);
    int cap2 = order_cap < 0 ? n2 : std::min(order_cap, n2);
    ImageGrid img{rx.n_size(), ry.n_size(),
                  std::vector<double>(static_cast<size_t>(rx.n_size()) * ry.n_size(), 0.0)};
    std::vector<double> tmp(static_cast<size_t>(img.rows) * n2, 0.0);
    for (int n = 0; n < cap1; ++n)
        for (int x = 0; x < img.rows; ++x) {
            double w = rx.at(n, x);
            if (w == 0.0) continue;
            for (int m = 0; m < cap2; ++m)
                tmp[static_cast<size_t>(x) * n2 + m] += w * mom.at(n, m);
        }
    for (int x = 0; x < img.rows; ++x)
        for (int y = 0; y < img.cols; ++y) {
            double acc = 0.0;
            for (int m = 0; m < cap2; ++m)
                acc += tmp[static_cast<size_t>(x) * n2 + m] * ry.at(m, y);
            img.at(x, y) = acc;
        }
    return img;
}

inline double nmse(const ImageGrid& i, const ImageGrid& r) {
    if (i.rows != r.rows || i.cols != r.cols)
        throw DimensionMismatch("nmse: size mismatch");
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < i.pixels.size(); ++k) {
        double d = i.pixels[k] - r.pixels[k];
        num += d * d;
        den += i.pixels[k] * i.pixels[k];
    }
    if (den == 0.0) throw ZeroSignal("nmse: reference image is identically zero");
    return num / den;
}

// 10 (log(max I^2) - log(MSE)); base 10 by default, natural log behind
// the flag for bit-level matching of the source formula.
inline double psnr(const ImageGrid& i, const ImageGrid& r, bool natural_log = false) {
    if (i.rows != r.rows || i.cols != r.cols)
        throw DimensionMismatch("psnr: size mismatch");
    double mx = 0.0, mse = 0.0;
    for (size_t k = 0; k < i.pixels.size(); ++k) {
        mx = std::max(mx, i.pixels[k] * i.pixels[k]);
        double d = i.pixels[k] - r.pixels[k];
        mse += d * d;
    }
    mse /= static_cast<double>(i.pixels.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    if (natural_log) return 10.0 * (std::log(mx) - std::log(mse));
    return 10.0 * (std::log10(mx) - std::log10(mse));
}

struct RestrictionResult {
    std::vector<double> diag;  // sigma^2_l
    std::vector<double> j;     // restriction error J_m
};

// Toeplitz covariance rho^|i-j|, conjugated by the polynomial matrix;
// the diagonal gives the transform coefficient variances, tail sums the
// restriction error. No re-sorting: the coefficients are taken in the
// l = 0 ... N-1 order as produced.
inline RestrictionResult restriction_study(const PolyMatrix& m, double rho) {
    const int N = m.n_size();
    std::vector<double> sig(static_cast<size_t>(N) * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) sig[static_cast<size_t>(i) * N + j] = std::pow(rho, std::abs(i - j));
    RestrictionResult res;
    res.diag.assign(N, 0.0);
    for (int l = 0; l < std::min(N, m.rows()); ++l) {
        // (R Sigma R^T)_{ll} = r_l^T Sigma r_l
        std::vector<double> t(N, 0.0);
        for (int i = 0; i < N; ++i) {
            double acc = 0.0;
            for (int j = 0; j < N; ++j) acc += sig[static_cast<size_t>(i) * N + j] * m.at(l, j);
            t[i] = acc;
        }
        double d = 0.0;
        for (int i = 0; i < N; ++i) d += m.at(l, i) * t[i];
        res.diag[l] = d;
    }
    double total = 0.0;
    for (double d : res.diag) total += d;
    res.j.assign(N, 0.0);
    double tail = total;
    for (int mm = 0; mm < N; ++mm) {
        res.j[mm] = total != 0.0 ? tail / total : 0.0;
        tail -= res.diag[mm];
    }
    return res;
}

struct BenchRecord {
    AlgorithmId algorithm;
    int n_size;
    double wall_time_s;
    int repeats;
    double ortho_error;
};

inline BenchRecord bench_one(AlgorithmId alg, int N, const ParamRule& rule, int repeats,
                             bool apply_gsop = false) {
    using clock = std::chrono::steady_clock;
    RacahParams p = rule.make(N);
    PolyMatrix last;
    auto t0 = clock::now();
    for (int r = 0; r < repeats; ++r) {
        last = generate_by_id(alg, p);
        if (apply_gsop) last = baselines::gsop_refine(last);
    }
    double dt = std::chrono::duration<double>(clock::now() - t0).count() / repeats;
    return {alg, N, dt, repeats, orthogonality_error(last)};
}

inline std::vector<BenchRecord> bench(AlgorithmId alg, const std::vector<int>& sizes,
                                      const ParamRule& rule, int repeats,
                                      bool apply_gsop = false) {
    std::vector<BenchRecord> out;
    out.reserve(sizes.size());
    for (int N : sizes) out.push_back(bench_one(alg, N, rule, repeats, apply_gsop));
    return out;
}

}  // namespace racah::analysis
