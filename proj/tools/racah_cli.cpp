// Command line surface for the Racah polynomial library.
//
// Exit codes: 0 success, 1 check failure, 2 input error, 3 numerical
// breakdown.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "racah/analysis.hpp"
#include "racah/baselines.hpp"
#include "racah/imst.hpp"
#include "racah/io.hpp"
#include "racah/oracle.hpp"

using json = nlohmann::json;
using namespace racah;
using analysis::ParamRule;
using baselines::AlgorithmId;

namespace {

constexpr int kExitCheckFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitBreakdown = 3;

AlgorithmId parse_alg(const std::string& name) {
    if (name == "zhu_n") return AlgorithmId::zhu_n;
    if (name == "zhu_s") return AlgorithmId::zhu_s;
    if (name == "daoui") return AlgorithmId::daoui;
    if (name == "imst") return AlgorithmId::imst;
    if (name == "oracle") return AlgorithmId::oracle;
    throw Error("unknown algorithm '" + name + "'");
}

ParamRule parse_rule(const std::string& name) {
    if (name == "zero") return analysis::rule_zero();
    if (name == "quarter") return analysis::rule_quarter();
    throw Error("unknown parameter rule '" + name + "' (want zero|quarter)");
}

struct ParamFlags {
    double a = 0, b = 0, alpha = 0, beta = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--a", a, "lower lattice bound a")->required();
        cmd->add_option("--b", b, "upper lattice bound b")->required();
        cmd->add_option("--alpha", alpha, "shape parameter alpha");
        cmd->add_option("--beta", beta, "shape parameter beta");
    }

    RacahParams validate() const { return validate_params(a, b, alpha, beta); }
};

const char* ns_source_name(imst::NsSource s) {
    return s == imst::NsSource::log_domain_search ? "log-domain-search" : "quarter-fallback";
}

json report_json(const imst::StabilizationReport& rep) {
    return json{{"ind0", rep.ind0},
                {"indN1", rep.indN1},
                {"ns", rep.ns},
                {"zeroed_part3", rep.zeroed_part3},
                {"zeroed_part4", rep.zeroed_part4},
                {"ns_source", ns_source_name(rep.ns_source)},
                {"special_path", rep.special_path}};
}

PolyMatrix generate_matrix(AlgorithmId alg, const RacahParams& p, const imst::ImStConfig& cfg,
                           imst::StabilizationReport* rep_out) {
    if (alg == AlgorithmId::imst) {
        imst::Result r = imst::generate(p, cfg);
        if (rep_out) *rep_out = r.report;
        return std::move(r.matrix);
    }
    if (alg == AlgorithmId::oracle) return oracle::exact_matrix(p);
    return analysis::generate_by_id(alg, p);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orthonormal weighted discrete Racah polynomial matrices"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a polynomial matrix and write it as CSV");
    ParamFlags gen_p;
    gen_p.attach(gen);
    std::string gen_alg = "imst", gen_out = "-", gen_report;
    double gen_theta = 1e-5;
    std::string gen_ns = "auto", gen_guard = "prose";
    bool gen_gsop = false;
    gen->add_option("--alg", gen_alg, "algorithm: imst|zhu_n|zhu_s|daoui|oracle");
    gen->add_option("-o,--out", gen_out, "output CSV path ('-' for stdout)");
    gen->add_option("--report", gen_report, "write the stabilization report JSON here");
    gen->add_option("--theta", gen_theta, "stabilizing threshold");
    gen->add_option("--ns-strategy", gen_ns, "ns strategy: auto|search|quarter");
    gen->add_option("--part3-guard", gen_guard, "part 3 guard variant: prose|algorithm");
    gen->add_flag("--gsop", gen_gsop, "re-orthogonalize the result with GSOP");

    // check
    auto* check = app.add_subcommand("check", "print the orthogonality error of a matrix CSV");
    std::string check_in;
    double check_thr = 1e-3;
    check->add_option("matrix", check_in, "matrix CSV path")->required();
    check->add_option("--threshold", check_thr, "pass threshold on E");

    // compare
    auto* compare = app.add_subcommand("compare", "entrywise difference of two generators");
    ParamFlags cmp_p;
    cmp_p.attach(compare);
    std::string cmp_a = "imst", cmp_b = "oracle";
    compare->add_option("--alg1", cmp_a, "first algorithm");
    compare->add_option("--alg2", cmp_b, "second algorithm");

    // bench
    auto* bench = app.add_subcommand("bench", "time a generator over a list of sizes");
    std::string bench_alg = "imst", bench_rule = "quarter";
    std::vector<int> bench_sizes;
    int bench_repeats = 10;
    bool bench_gsop = false;
    bench->add_option("--alg", bench_alg, "algorithm");
    bench->add_option("--rule", bench_rule, "parameter rule: zero|quarter");
    bench->add_option("--sizes", bench_sizes, "sizes N to time")->required()->delimiter(',');
    bench->add_option("--repeats", bench_repeats, "repeats per size");
    bench->add_flag("--gsop", bench_gsop, "include a GSOP pass in the timed region");

    // maxsize
    auto* maxsize = app.add_subcommand("maxsize", "largest N with E <= threshold");
    std::string ms_alg = "zhu_n", ms_rule = "zero";
    double ms_emax = 1e-3, ms_tmax = 60.0;
    int ms_ceiling = 8192;
    maxsize->add_option("--alg", ms_alg, "algorithm");
    maxsize->add_option("--rule", ms_rule, "parameter rule: zero|quarter");
    maxsize->add_option("--emax", ms_emax, "orthogonality error threshold");
    maxsize->add_option("--tmax", ms_tmax, "per-trial time budget, seconds");
    maxsize->add_option("--ceiling", ms_ceiling, "search ceiling on N");

    // restrict
    auto* restrict_cmd = app.add_subcommand("restrict", "covariance restriction study");
    ParamFlags rs_p;
    rs_p.attach(restrict_cmd);
    double rs_rho = 0.95;
    std::string rs_out = "-";
    restrict_cmd->add_option("--rho", rs_rho, "covariance coefficient");
    restrict_cmd->add_option("-o,--out", rs_out, "output CSV path ('-' for stdout)");

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "moment round trip on an image");
    ParamFlags rec_p;
    rec_p.attach(rec);
    std::string rec_in, rec_out;
    std::vector<int> rec_random;
    uint64_t rec_seed = 1;
    std::vector<int> rec_orders;
    rec->add_option("--image", rec_in, "input PGM (P5) image");
    rec->add_option("--random", rec_random, "generate a random image: N1 N2")->expected(2);
    rec->add_option("--seed", rec_seed, "random image seed");
    rec->add_option("-o,--out", rec_out, "reconstructed PGM path");
    rec->add_option("--orders", rec_orders, "order caps to evaluate (default: full)")
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            RacahParams p = gen_p.validate();
            AlgorithmId alg = parse_alg(gen_alg);
            imst::ImStConfig cfg;
            cfg.threshold = gen_theta;
            if (gen_ns == "quarter") cfg.ns_strategy = imst::NsStrategy::quarter_fallback;
            else if (gen_ns == "search") cfg.ns_strategy = imst::NsStrategy::log_domain_search;
            else if (gen_ns != "auto") throw Error("bad --ns-strategy");
            if (gen_guard == "algorithm") cfg.part3_guard = imst::Part3Guard::algorithm_large;
            else if (gen_guard != "prose") throw Error("bad --part3-guard");
            imst::StabilizationReport rep;
            PolyMatrix m = generate_matrix(alg, p, cfg, &rep);
            if (gen_gsop) m = baselines::gsop_refine(m);
            if (gen_out == "-") io::write_matrix_csv(std::cout, m, gen_alg);
            else io::write_matrix_csv(gen_out, m, gen_alg);
            if (!gen_report.empty()) {
                std::ofstream os(gen_report);
                os << report_json(rep).dump(2) << "\n";
            }
            return 0;
        }
        if (*check) {
            io::LoadedMatrix lm = io::read_matrix_csv(check_in);
            double e = analysis::orthogonality_error(lm.matrix);
            json out{{"ortho_error", e}, {"threshold", check_thr}, {"pass", e <= check_thr}};
            std::cout << out.dump(2) << "\n";
            return e <= check_thr ? 0 : kExitCheckFail;
        }
        if (*compare) {
            RacahParams p = cmp_p.validate();
            AlgorithmId a1 = parse_alg(cmp_a), a2 = parse_alg(cmp_b);
            if ((a1 == AlgorithmId::oracle || a2 == AlgorithmId::oracle) && p.n_size > 256)
                throw SizeLimit("oracle comparisons limited to N <= 256");
            imst::ImStConfig cfg;
            PolyMatrix m1 = generate_matrix(a1, p, cfg, nullptr);
            PolyMatrix m2 = generate_matrix(a2, p, cfg, nullptr);
            double mx = 0, sum2 = 0;
            int rows = std::min(m1.rows(), m2.rows());
            for (int n = 0; n < rows; ++n)
                for (int x = 0; x < p.n_size; ++x) {
                    double d = m1.at(n, x) - m2.at(n, x);
                    mx = std::max(mx, std::abs(d));
                    sum2 += d * d;
                }
            double rms = std::sqrt(sum2 / (static_cast<double>(rows) * p.n_size));
            json out{{"alg1", cmp_a}, {"alg2", cmp_b}, {"max_abs", mx}, {"rms", rms}};
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*bench) {
            AlgorithmId alg = parse_alg(bench_alg);
            ParamRule rule = parse_rule(bench_rule);
            json out = json::array();
            for (const analysis::BenchRecord& r :
                 analysis::bench(alg, bench_sizes, rule, bench_repeats, bench_gsop)) {
                RacahParams p = rule.make(r.n_size);
                out.push_back(json{{"algorithm", bench_alg},
                                   {"n", r.n_size},
                                   {"params", {{"a", p.a}, {"alpha", p.alpha}, {"beta", p.beta}}},
                                   {"repeats", r.repeats},
                                   {"mean_seconds", r.wall_time_s},
                                   {"ortho_error", r.ortho_error}});
                std::cerr << bench_alg << " N=" << r.n_size << " " << r.wall_time_s << "s E=" << r.ortho_error
                          << "\n";
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*maxsize) {
            AlgorithmId alg = parse_alg(ms_alg);
            ParamRule rule = parse_rule(ms_rule);
            analysis::MaxSizeResult r = analysis::max_size_search(alg, rule, ms_emax, ms_tmax, ms_ceiling);
            json out{{"algorithm", ms_alg},
                     {"rule", rule.name},
                     {"emax", ms_emax},
                     {"max_n", r.max_n},
                     {"time_limited", r.time_limited}};
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*restrict_cmd) {
            RacahParams p = rs_p.validate();
            PolyMatrix m = generate_matrix(AlgorithmId::imst, p, {}, nullptr);
            analysis::RestrictionResult r = analysis::restriction_study(m, rs_rho);
            std::ostringstream os;
            os << "l,sigma2,J\n";
            for (int l = 0; l < p.n_size; ++l) {
                char buf[80];
                std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", l, r.diag[l], r.j[l]);
                os << buf;
            }
            if (rs_out == "-") std::cout << os.str();
            else {
                std::ofstream f(rs_out);
                if (!f) throw Error("cannot open " + rs_out);
                f << os.str();
            }
            return 0;
        }
        if (*rec) {
            RacahParams p = rec_p.validate();
            analysis::ImageGrid img;
            if (!rec_in.empty()) img = io::read_pgm(rec_in);
            else if (rec_random.size() == 2) img = io::random_image(rec_random[0], rec_random[1], rec_seed);
            else throw Error("reconstruct needs --image or --random N1 N2");
            if (img.rows != p.n_size || img.cols != p.n_size)
                throw DimensionMismatch("image size must match N = b - a (square matrices)");
            PolyMatrix m = generate_matrix(AlgorithmId::imst, p, {}, nullptr);
            analysis::MomentMatrix mom = analysis::moments_2d(img, m, m);
            if (rec_orders.empty()) rec_orders.push_back(p.n_size);
            json metrics = json::array();
            analysis::ImageGrid last;
            for (int cap : rec_orders) {
                analysis::ImageGrid rimg = analysis::reconstruct_2d(mom, m, m, cap);
                double e_nmse = analysis::nmse(img, rimg);
                double e_psnr = analysis::psnr(img, rimg);
                metrics.push_back(json{{"order", cap},
                                       {"nmse", e_nmse},
                                       {"psnr", std::isinf(e_psnr) ? json("inf") : json(e_psnr)}});
                last = std::move(rimg);
            }
            if (!rec_out.empty()) io::write_pgm(rec_out, last);
            std::cout << metrics.dump(2) << "\n";
            return 0;
        }
    } catch (const NumericalBreakdown& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return kExitBreakdown;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
