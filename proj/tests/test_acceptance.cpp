// Acceptance checks for the library. Each numbered criterion prints one
// PASS/FAIL line with the measured values; the process exits nonzero if
// any criterion fails.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "racah/analysis.hpp"
#include "racah/baselines.hpp"
#include "racah/imst.hpp"
#include "racah/io.hpp"
#include "racah/oracle.hpp"

using namespace racah;
using analysis::AlgorithmId;
using clock_t_ = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", idx, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double max_dev(const PolyMatrix& a, const PolyMatrix& b) {
    double d = 0;
    for (int n = 0; n < std::min(a.rows(), b.rows()); ++n)
        for (int x = 0; x < a.n_size(); ++x) d = std::max(d, std::abs(a.at(n, x) - b.at(n, x)));
    return d;
}

double seconds_since(clock_t_::time_point t0) {
    return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// Table of published transform coefficient variances, N=16, beta=0,
// columns (rho, labeled a) in the order rho=0.9|0.95|0.98 x a=0|10|30|50.
const double kTable2[16][12] = {
    {9.159, 9.832, 2.742, 2.249, 11.325, 12.401, 2.923, 2.362, 12.975, 14.407, 3.039, 2.434},
    {2.912, 2.856, 2.388, 2.045, 2.232, 1.907, 2.500, 2.125, 1.527, 0.916, 2.568, 2.174},
    {1.278, 1.136, 2.074, 1.854, 0.843, 0.612, 2.137, 1.908, 0.532, 0.249, 2.173, 1.941},
    {0.702, 0.591, 1.794, 1.675, 0.440, 0.300, 1.822, 1.708, 0.272, 0.120, 1.836, 1.727},
    {0.446, 0.366, 1.543, 1.506, 0.273, 0.182, 1.545, 1.522, 0.168, 0.072, 1.543, 1.530},
    {0.311, 0.252, 1.313, 1.345, 0.188, 0.124, 1.298, 1.347, 0.115, 0.049, 1.286, 1.347},
    {0.233, 0.188, 1.101, 1.190, 0.139, 0.092, 1.072, 1.180, 0.084, 0.036, 1.053, 1.173},
    {0.183, 0.147, 0.900, 1.037, 0.109, 0.072, 0.862, 1.018, 0.065, 0.028, 0.838, 1.005},
    {0.149, 0.120, 0.707, 0.884, 0.088, 0.059, 0.663, 0.856, 0.053, 0.023, 0.637, 0.839},
    {0.125, 0.101, 0.523, 0.725, 0.074, 0.050, 0.477, 0.691, 0.044, 0.020, 0.450, 0.671},
    {0.108, 0.088, 0.357, 0.560, 0.063, 0.043, 0.313, 0.523, 0.037, 0.017, 0.287, 0.500},
    {0.095, 0.077, 0.224, 0.396, 0.055, 0.038, 0.183, 0.357, 0.032, 0.015, 0.159, 0.334},
    {0.085, 0.070, 0.133, 0.250, 0.049, 0.034, 0.096, 0.213, 0.028, 0.013, 0.075, 0.190},
    {0.077, 0.063, 0.083, 0.142, 0.044, 0.031, 0.051, 0.108, 0.025, 0.012, 0.031, 0.088},
    {0.071, 0.058, 0.062, 0.082, 0.040, 0.028, 0.032, 0.051, 0.023, 0.011, 0.015, 0.033},
    {0.066, 0.054, 0.055, 0.058, 0.037, 0.027, 0.027, 0.030, 0.021, 0.010, 0.011, 0.014},
};

void criterion1() {
    auto t0 = clock_t_::now();
    RacahParams p = validate_params(4, 20, 2, 1);
    PolyMatrix O = oracle::exact_matrix(p);
    double d_imst = max_dev(imst::generate(p).matrix, O);
    double d_zn = max_dev(baselines::zhu_n_generate(p), O);
    double d_zs = max_dev(baselines::zhu_s_generate(p), O);
    double d_da = max_dev(baselines::daoui_generate(p), O);
    double dt = seconds_since(t0);
    bool pass = d_imst <= 1e-8 && d_zn <= 1e-8 && d_zs <= 1e-8 && d_da <= 1e-8 && dt < 30;
    report(1, pass,
           fmt("oracle devs N=16: imst=%.2e zhu_n=%.2e zhu_s=%.2e daoui=%.2e (%.1fs)", d_imst,
               d_zn, d_zs, d_da, dt));
}

void criterion2() {
    auto t0 = clock_t_::now();
    analysis::ParamRule rule = analysis::rule_zero();
    int zn = analysis::max_size_search(AlgorithmId::zhu_n, rule, 1e-3, 60, 128).max_n;
    int zs = analysis::max_size_search(AlgorithmId::zhu_s, rule, 1e-3, 60, 128).max_n;
    int da = analysis::max_size_search(AlgorithmId::daoui, rule, 1e-3, 120, 2048).max_n;
    double e_imst = analysis::orthogonality_error(imst::generate(rule.make(4096)).matrix);
    double dt = seconds_since(t0);
    bool pass = zn >= 21 && zn <= 25 && zs >= 19 && zs <= 23 && std::abs(da - 1165) <= 58 &&
                e_imst <= 1e-3 && dt < 600;
    report(2, pass,
           fmt("a=al=be=0 max sizes: zhu_n=%d (23+-2) zhu_s=%d (21+-2) daoui=%d (1165+-5%%), "
               "imst E(4096)=%.2e (%.1fs)",
               zn, zs, da, e_imst, dt));
}

void criterion3() {
    auto t0 = clock_t_::now();
    analysis::ParamRule rule = analysis::rule_quarter();
    int da = analysis::max_size_search(AlgorithmId::daoui, rule, 1e-3, 60, 256).max_n;
    double e_imst = analysis::orthogonality_error(imst::generate(rule.make(2048)).matrix);
    double dt = seconds_since(t0);
    bool pass = std::abs(da - 65) <= 6 && e_imst <= 1e-3 && dt < 600;
    report(3, pass,
           fmt("a=N/4 ratios: daoui max=%d (65+-10%%), imst E(2048)=%.2e (%.1fs)", da, e_imst,
               dt));
}

void criterion4() {
    auto t0 = clock_t_::now();
    const double labels[4] = {0, 10, 30, 50};
    const double rhos[3] = {0.9, 0.95, 0.98};
    int bad = 0;
    double worst = 0;
    int worst_col = -1;
    for (int ai = 0; ai < 4; ++ai) {
        double a = labels[ai];
        RacahParams p = validate_params(a, a + 16, a, 0);
        PolyMatrix R = imst::generate(p).matrix;
        for (int ri = 0; ri < 3; ++ri) {
            analysis::RestrictionResult res = analysis::restriction_study(R, rhos[ri]);
            for (int l = 0; l < 16; ++l) {
                double dev = std::abs(res.diag[l] - kTable2[l][4 * ri + ai]);
                if (dev > 0.001) ++bad;
                if (dev > worst) {
                    worst = dev;
                    worst_col = 4 * ri + ai;
                }
            }
        }
    }
    double dt = seconds_since(t0);
    report(4, bad == 0,
           fmt("published table at labeled params: %d/192 values off by >0.001, worst dev "
               "%.3f in column %d (%.1fs)",
               bad, worst, worst_col, dt));
    // The labeled a=10/30/50 columns are reproduced instead by a=100 with
    // alpha in {0, 50, 100}; measured deviations under that mapping:
    const double map_a[3] = {100, 100, 100};
    const double map_al[3] = {0, 50, 100};
    double worst_mapped = 0;
    for (int mi = 0; mi < 3; ++mi) {
        RacahParams p = validate_params(map_a[mi], map_a[mi] + 16, map_al[mi], 0);
        PolyMatrix R = imst::generate(p).matrix;
        for (int ri = 0; ri < 3; ++ri) {
            analysis::RestrictionResult res = analysis::restriction_study(R, rhos[ri]);
            for (int l = 0; l < 16; ++l)
                worst_mapped =
                    std::max(worst_mapped, std::abs(res.diag[l] - kTable2[l][4 * ri + mi + 1]));
        }
    }
    std::printf("  note: columns labeled a=10/30/50 match a=100, alpha=0/50/100 instead "
                "(worst dev %.4f)\n",
                worst_mapped);
}

void criterion5() {
    auto t0 = clock_t_::now();
    RacahParams p = analysis::rule_quarter().make(64);
    PolyMatrix R = imst::generate(p).matrix;
    double E = analysis::orthogonality_error(R);
    analysis::ImageGrid img = io::random_image(64, 64, 20260824);
    analysis::MomentMatrix mom = analysis::moments_2d(img, R, R);
    double full = analysis::nmse(img, analysis::reconstruct_2d(mom, R, R));
    bool monotone = true;
    double prev = 2.0;
    for (int cap : {1, 2, 4, 8, 16, 32, 64}) {
        double e = analysis::nmse(img, analysis::reconstruct_2d(mom, R, R, cap));
        if (e > prev + 1e-15) monotone = false;
        prev = e;
    }
    double dt = seconds_since(t0);
    bool pass = E <= 1e-6 && full <= 1e-10 && monotone && dt < 5;
    report(5, pass,
           fmt("round trip 64x64: E=%.2e full-order NMSE=%.2e monotone=%s (%.1fs)", E, full,
               monotone ? "yes" : "no", dt));
}

void criterion6() {
    auto t0 = clock_t_::now();
    RacahParams p64 = validate_params(0, 64, 0, 0);
    PolyMatrix Z = baselines::zhu_n_generate(p64);
    double before = analysis::orthogonality_error(Z);
    double after = analysis::orthogonality_error(baselines::gsop_refine(Z));

    double times[3] = {0, 0, 0};
    const int sizes[3] = {256, 512, 1024};
    for (int i = 0; i < 3; ++i) {
        PolyMatrix m = imst::generate_special(sizes[i]).matrix;
        double best = 1e30;
        volatile double sink = 0;
        for (int rep = 0; rep < 3; ++rep) {
            auto s0 = clock_t_::now();
            PolyMatrix g = baselines::gsop_refine(m);
            best = std::min(best, seconds_since(s0));
            sink = sink + g.at(0, 0);
        }
        times[i] = best;
    }
    double r1 = times[1] / times[0];
    double r2 = times[2] / times[1];
    double dt = seconds_since(t0);
    bool pass = before > 1e-3 && after <= 1e-3 && r1 >= 6 && r1 <= 10 && r2 >= 6 && r2 <= 10 &&
                dt < 120;
    report(6, pass,
           fmt("gsop: E %.2e -> %.2e at N=64; time ratios 512/256=%.2f 1024/512=%.2f "
               "(target [6,10]) (%.1fs)",
               before, after, r1, r2, dt));
}

void criterion7() {
    auto t0 = clock_t_::now();
    imst::Result r = imst::generate_special(1000);
    bool sym = true;
    for (int n = 0; n < 1000 && sym; ++n)
        for (int s = n + 1; s < 1000; ++s) {
            double sign = ((s - n) % 2 == 0) ? 1.0 : -1.0;
            if (r.matrix.at(s, n) != sign * r.matrix.at(n, s)) {
                sym = false;
                break;
            }
        }
    double E = analysis::orthogonality_error(r.matrix);
    RacahParams p = validate_params(0, 64, 0, 0);
    double agree = max_dev(imst::generate(p).matrix, imst::generate_special(64).matrix);
    double dt = seconds_since(t0);
    bool pass = sym && E <= 1e-3 && agree <= 1e-12 && dt < 10;
    report(7, pass,
           fmt("special N=1000: symmetry=%s E=%.2e; general-path dev at N=64 = %.1e (%.1fs)",
               sym ? "bit-exact" : "violated", E, agree, dt));
}

void criterion8() {
    auto t0 = clock_t_::now();
    uint64_t state = 42;
    auto uni = [&state](double lo, double hi) {
        return lo + (hi - lo) * (io::splitmix64(state) >> 11) * 0x1.0p-53;
    };
    double worst_corrected = 0;
    double best_wrong = 0;
    for (int i = 0; i < 10; ++i) {
        double a = uni(0.5, 6.0);
        int N = 4 + static_cast<int>(io::splitmix64(state) % 13);
        double al = uni(0.0, 4.0);
        double be = uni(0.0, std::min(2 * a + 0.9, 4.0));
        RacahParams p = validate_params(a, a + N, al, be);
        double corrected = ((2 * a + 1) * (be + 1) * (p.b + al + a + 1) * (p.b - a - 1)) /
                           ((p.b + al - a - 1) * (2 * a - be + 1) * (a + p.b + 1));
        double wrong = ((2 * a + 1) * (be + 1) * (p.b + al + a + 1) * (p.b - a + 1)) /
                       ((p.b + al - a - 1) * (2 * a - be + 1) * (a + p.b + 1));
        double ratio = rho_ratio(p, a);
        worst_corrected = std::max(worst_corrected, std::abs(corrected / ratio - 1));
        best_wrong = std::max(best_wrong, std::abs(wrong / ratio - 1));
    }
    double dt = seconds_since(t0);
    bool pass = worst_corrected <= 1e-12 && best_wrong > 1e-3 && dt < 1;
    report(8, pass,
           fmt("corrected ratio dev=%.1e over 10 points; printed form dev up to %.2f (%.2fs)",
               worst_corrected, best_wrong, dt));
}

void criterion9() {
    // The published figure-level NMSE values depend on a source image that is
    // not bundled, so they are checked via the criterion-5 round trip plus a
    // run of the same metric pipeline on a synthetic 512x512 image here.
    auto t0 = clock_t_::now();
    RacahParams p = analysis::rule_quarter().make(512);
    PolyMatrix R = imst::generate(p).matrix;
    analysis::ImageGrid img = io::random_image(512, 512, 9);
    analysis::MomentMatrix mom = analysis::moments_2d(img, R, R);
    double prev = 2.0;
    bool monotone = true;
    double full = 1.0;
    for (int cap : {1, 32, 64, 128, 256, 512}) {
        double e = analysis::nmse(img, analysis::reconstruct_2d(mom, R, R, cap));
        if (e > prev + 1e-15) monotone = false;
        prev = e;
        if (cap == 512) full = e;
    }
    double dt = seconds_since(t0);
    bool pass = monotone && full <= 1e-10;
    report(9, pass,
           fmt("512x512 pipeline: order sweep monotone=%s, full-order NMSE=%.2e (%.1fs)",
               monotone ? "yes" : "no", full, dt));
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
