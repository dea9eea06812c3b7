// Acceptance suite: one line per criterion, PASS/FAIL, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "meandesc/convexity.hpp"
#include "meandesc/descend.hpp"
#include "meandesc/expr.hpp"
#include "meandesc/means.hpp"
#include "meandesc/rational.hpp"
#include "meandesc/sampler.hpp"
#include "meandesc/spectral.hpp"
#include "meandesc/xreal.hpp"

using namespace meandesc;

namespace {

std::string g_cli_path;

double inf_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

spectral::TwoDiagonalMatrix random_matrix(Rng& rng, int max_n) {
    const int n = 1 + static_cast<int>(rng.below(max_n));
    std::vector<double> u(n), v(n);
    for (int k = 0; k < n; ++k) {
        u[k] = rng.uniform(0.05, 1.4);
        v[k] = rng.uniform(0.05, 1.4);
    }
    return spectral::TwoDiagonalMatrix(std::move(u), std::move(v));
}

// 1. closed form vs solver for shared-h quasi-arithmetic tuples
bool criterion_closed_form_vs_solver(std::string& detail) {
    Rng rng(101);
    double worst_gap = 0.0;
    double worst_residual = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const int hk = static_cast<int>(rng.below(3));
        const Interval dom = hk == 0   ? Interval::closed(-3.0, 3.0)
                             : hk == 1 ? Interval::closed(0.4, 5.0)
                                       : Interval::closed(-2.0, 2.5);
        const MonotoneFn h = hk == 0 ? make_identity(dom) : hk == 1 ? make_log(dom) : make_exp(dom);
        const double x = rng.uniform(dom.lo + 0.05, dom.hi - 0.2);
        const double y = x + rng.uniform(0.1, dom.hi - 0.05 - x);
        std::vector<double> s(n);
        std::vector<Mean> means;
        for (int i = 0; i < n; ++i) {
            s[i] = rng.uniform(0.05, 0.95);
            means.push_back(quasi_arithmetic(h, s[i]));
        }
        const auto closed = descend::closed_form_quasiarithmetic(h, s, x, y);
        const descend::DescendantProblem problem(means, x, y);

        const auto img = descend::phi_apply(problem, closed);
        worst_residual = std::max(worst_residual, inf_dist(img, closed));

        descend::SolveOptions opts;
        opts.tol = 1e-12;
        opts.max_iter = 200000;
        const auto solved = descend::solve_fixed_point(problem, opts);
        if (!solved.converged) {
            detail = "solver failed to converge on a random instance";
            return false;
        }
        worst_gap = std::max(worst_gap, inf_dist(solved.xi, closed));
    }
    std::ostringstream os;
    os << "max |closed-solver| = " << worst_gap << " (<= 1e-8), max phi-residual = "
       << worst_residual << " (<= 1e-10) over 200 instances";
    detail = os.str();
    return worst_gap <= 1e-8 && worst_residual <= 1e-10;
}

// 2. w-positivity <=> all eigenvalues below one, away from the boundary
bool criterion_spectral_equivalence(std::string& detail) {
    Rng rng(202);
    int compared = 0;
    int disagreements = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto A = random_matrix(rng, 10);
        const auto rep = spectral::all_below_one(A);
        if (std::abs(rep.eigenvalues.back() - 1.0) <= 1e-6) continue;
        ++compared;
        if (rep.below_one_by_w != rep.below_one_by_eig) ++disagreements;
    }
    std::ostringstream os;
    os << disagreements << " disagreements on " << compared << " off-boundary instances of 500";
    detail = os.str();
    return disagreements == 0;
}

// 3. P_{A_n}(1) = w_n to 1e-12 relative
bool criterion_char_poly_identity(std::string& detail) {
    Rng rng(303);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto A = random_matrix(rng, 10);
        const auto w = spectral::w_sequence(A);
        const double p = spectral::char_poly(A, A.n(), 1.0);
        const double rel = std::abs(p - w.back()) / std::max(1e-300, std::abs(w.back()));
        worst = std::max(worst, rel);
    }
    std::ostringstream os;
    os << "max relative gap " << worst << " (<= 1e-12) over 500 instances";
    detail = os.str();
    return worst <= 1e-12;
}

// 4. positive eigenpair: residual, positivity, and agreement with the spectrum
bool criterion_positive_eigenvector(std::string& detail) {
    Rng rng(404);
    double worst_res = 0.0;
    double worst_gap = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto A = random_matrix(rng, 10);
        const auto pair = spectral::positive_eigenvector(A, 1e-11);
        double cmax = 0.0;
        for (double ci : pair.c) {
            if (!(ci > 0.0)) {
                detail = "eigenvector component is not positive";
                return false;
            }
            cmax = std::max(cmax, ci);
        }
        if (!(pair.lambda > 0.0)) {
            detail = "eigenvalue is not positive";
            return false;
        }
        const auto Ac = A.apply(pair.c);
        double res = 0.0;
        for (int i = 0; i < A.size(); ++i) res = std::max(res, std::abs(Ac[i] - pair.lambda * pair.c[i]));
        worst_res = std::max(worst_res, res / cmax);
        const auto eig = spectral::eigenvalues(A, 1e-13);
        worst_gap = std::max(worst_gap, std::abs(pair.lambda - eig.back()));
    }
    std::ostringstream os;
    os << "max residual/||c|| = " << worst_res << " (<= 1e-10), max |lambda - max eig| = "
       << worst_gap << " (<= 1e-8) over 200 instances";
    detail = os.str();
    return worst_res <= 1e-10 && worst_gap <= 1e-8;
}

// 5. exact identities: r_i = sigma_i and sigma_i = (n-i+1)/(n+1) at s = 1/2
bool criterion_exact_sigma(std::string& detail) {
    long checked = 0;
    for (long m = 2; m <= 12; ++m) {
        for (long l = 1; l < m; ++l) {
            if (2 * l == m) continue;
            for (int n = 2; n <= 6; ++n) {
                const auto r = convexity::generate_r_fractions(l, m, n);
                const auto sigma = descend::sigma_weights_exact(
                    std::vector<Rational>(n, Rational(BigInt(l), BigInt(m))));
                for (int i = 0; i < n; ++i) {
                    if (!(r[i] == sigma[i])) {
                        detail = "r_i != sigma_i at l=" + std::to_string(l) +
                                 " m=" + std::to_string(m) + " n=" + std::to_string(n);
                        return false;
                    }
                    ++checked;
                }
            }
        }
    }
    const Rational half(BigInt(1), BigInt(2));
    for (int n = 2; n <= 10; ++n) {
        const auto sigma = descend::sigma_weights_exact(std::vector<Rational>(n, half));
        for (int i = 1; i <= n; ++i) {
            if (!(sigma[i - 1] == Rational(BigInt(n - i + 1), BigInt(n + 1)))) {
                detail = "sigma at s=1/2 mismatch, n=" + std::to_string(n);
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " exact component identities";
    return true;
}

// 6. extended chain inequality on random functions and chains
bool criterion_chain(std::string& detail) {
    Rng rng(606);
    long violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(8));
        std::vector<double> pts(n + 2);
        pts[0] = rng.uniform(-5.0, 0.0);
        for (int j = 1; j < n + 2; ++j) pts[j] = pts[j - 1] + 0.02 + rng.uniform();
        const int i = 1 + static_cast<int>(rng.below(n));

        std::map<double, XReal> tbl;
        const bool extended = rng.below(2) == 0;
        for (double p : pts) {
            if (extended && rng.below(6) == 0) {
                tbl.emplace(p, rng.below(2) == 0 ? XReal::pos_inf() : XReal::neg_inf());
            } else {
                tbl.emplace(p, XReal(rng.uniform(-10.0, 10.0)));
            }
        }
        const auto rep = check_chain(
            pts, i, [&](double t) { return tbl.at(t); });
        if (!rep.holds) ++violations;
    }
    detail = std::to_string(violations) + " violations over 10000 chains";
    return violations == 0;
}

// 7. Prp x1 / Rem NE reproduction on the exact denominator-63 grid
bool criterion_x1(std::string& detail) {
    const auto h = convexity::square_generator();
    const auto f = convexity::build_x1_function(h, Rational(0), Rational(1));
    const Rational one(1);
    for (const char* ts : {"1/3", "3/5", "5/7"}) {
        const Rational t = Rational::parse(ts);
        const auto ok = convexity::exact_upper_scan(f, t, 63);
        if (ok.verdict != convexity::Verdict::NoViolation) {
            detail = std::string("A_t scan found a false violation at t=") + ts;
            return false;
        }
        const auto bad = convexity::exact_upper_scan(f, one - t, 63);
        if (bad.verdict != convexity::Verdict::Counterexample || !bad.witness ||
            !(bad.witness->y == one)) {
            detail = std::string("A_{1-t} scan missed the witness with y=1 at t=") + ts;
            return false;
        }
    }
    const Rational third(BigInt(1), BigInt(3));
    const auto w = convexity::addition_nonclosure_witness(third, third, h, Rational(0), one);
    const bool reverified = f.exact(w.u).is_pos_inf() && XRat(w.rhs) < f.exact(w.u) &&
                            convexity::classify_rational(w.sum) == convexity::RationalClass::Q0;
    detail = "three weights scanned at denominator 63; Rem-NE witness u=" + w.u.str() +
             (reverified ? " re-verified" : " FAILED re-verification");
    return reverified;
}

// 8. descendants inherit sampled lower convexity from convex functions
bool criterion_inheritance(std::string& detail) {
    Rng rng(808);
    const Interval dom = Interval::closed(0.25, 4.0);
    long descendant_checks = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const double qa = 0.1 + 2.0 * rng.uniform();
        const double qb = rng.uniform(-2.0, 2.0);
        const double qc = rng.uniform(-2.0, 2.0);
        convexity::ExtendedFunction f{
            "rand-quadratic", dom,
            [qa, qb, qc](double t) { return XReal(qa * t * t + qb * t + qc); }, nullptr};

        const int n = 2 + static_cast<int>(rng.below(3));
        std::vector<Mean> means;
        const bool use_qa = trial % 6 == 0;  // a few quasi-arithmetic tuples, the rest arithmetic
        const MonotoneFn h = (trial % 12 == 0) ? make_exp(dom) : make_log(dom);
        for (int i = 0; i < n; ++i) {
            const double s = rng.uniform(0.05, 0.95);
            means.push_back(use_qa ? quasi_arithmetic(h, s) : weighted_arithmetic(s));
        }

        convexity::SamplerConfig cfg;
        cfg.count = 1000;
        cfg.seed = 9000 + trial;
        const auto rep = convexity::inheritance_check(f, means, cfg);
        if (!rep.premise_holds) {
            detail = "premise failed on a convex function (trial " + std::to_string(trial) + ")";
            return false;
        }
        if (!rep.all_pass) {
            detail = "a descendant failed lower convexity (trial " + std::to_string(trial) + ")";
            return false;
        }
        for (const auto& r : rep.descendants) descendant_checks += r.samples_checked;
    }
    detail = "50 instances, " + std::to_string(descendant_checks) + " descendant pair checks, zero violations";
    return true;
}

// 9. non-uniqueness detection for the (max, min) tuple; uniqueness for a
// certified quasi-arithmetic tuple
bool criterion_brute_force(std::string& detail) {
    std::vector<Mean> mm = {weighted_arithmetic(0.0), weighted_arithmetic(1.0)};
    const auto diag = descend::brute_force_fixed_points(descend::DescendantProblem(mm, 0.0, 1.0), 64);

    const Interval dom = Interval::closed(0.5, 8.0);
    std::vector<Mean> qa = {quasi_arithmetic(make_log(dom), 0.5),
                            quasi_arithmetic(make_log(dom), 0.5)};
    const auto single = descend::brute_force_fixed_points(descend::DescendantProblem(qa, 1.0, 4.0), 64);

    detail = std::to_string(diag.size()) + " diagonal clusters (>= 32) and " +
             std::to_string(single.size()) + " certified cluster (== 1)";
    return diag.size() >= 32 && single.size() == 1;
}

// 10. rmat closed form: phi-residual and the pivot identity
bool criterion_rmat(std::string& detail) {
    Rng rng(1010);
    double worst_res = 0.0;
    double worst_pivot = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(4));
        const int j = 1 + static_cast<int>(rng.below(n));
        const Interval dom = Interval::closed(0.5, 4.0);
        auto rand_fn = [&]() -> MonotoneFn {
            const double scale = rng.uniform(0.5, 2.0);
            switch (rng.below(4)) {
                case 0: return scale * make_identity(dom);
                case 1: return scale * make_log(dom);
                case 2: return scale * make_exp(dom);
                default: return scale * make_power(rng.uniform(0.5, 2.0), dom);
            }
        };
        const MonotoneFn p = rand_fn();
        const MonotoneFn q = rand_fn();
        std::vector<MonotoneFn> h;
        for (int i = 0; i < n - 1; ++i) h.push_back(rand_fn());
        const double x = rng.uniform(0.6, 2.0);
        const double y = x + rng.uniform(0.1, 3.8 - x);

        const auto xi = descend::closed_form_rmat(p, q, h, j, x, y);
        const descend::DescendantProblem problem(descend::rmat_means(p, q, h, j), x, y);
        worst_res = std::max(worst_res, inf_dist(descend::phi_apply(problem, xi), xi));
        worst_pivot = std::max(worst_pivot,
                               std::abs(p(xi[j - 1]) + q(xi[j - 1]) - (p(x) + q(y))));
    }
    std::ostringstream os;
    os << "max phi-residual " << worst_res << " (<= 1e-10), max pivot identity gap " << worst_pivot
       << " (<= 1e-10) over 100 instances";
    detail = os.str();
    return worst_res <= 1e-10 && worst_pivot <= 1e-10;
}

// 11. squeeze sequences decrease to M with the pinned tail bound
bool criterion_squeeze(std::string& detail) {
    Rng rng(1111);
    const Interval dom = Interval::closed(0.4, 6.0);
    const std::vector<Mean> targets = {weighted_arithmetic(0.5),
                                       matkowski(0.5 * make_log(dom), 0.5 * make_log(dom))};
    double worst_tail = 0.0;
    for (const Mean& M : targets) {
        const auto seq = squeeze_sequence(M, 30);
        for (int k = 0; k < 20; ++k) {
            const double x = rng.uniform(0.5, 3.0);
            const double y = x + rng.uniform(0.05, 2.5);
            const double mxy = M(x, y);
            double prev = seq[0](x, y);
            for (std::size_t j = 1; j < seq.size(); ++j) {
                const double cur = seq[j](x, y);
                if (!(cur < prev) || !(cur > mxy)) {
                    detail = "squeeze sequence is not strictly decreasing toward M";
                    return false;
                }
                prev = cur;
            }
            worst_tail = std::max(worst_tail, std::abs(prev - mxy));
        }
    }
    std::ostringstream os;
    os << "max |U_30 - M| = " << worst_tail << " (<= 1e-6) over 20 pairs x 2 means";
    detail = os.str();
    return worst_tail <= 1e-6;
}

std::string run_cli(const std::string& args, int& exit_code) {
    const std::string cmd = g_cli_path + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        exit_code = -1;
        return {};
    }
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

// 12. identical seed implies byte-identical CLI output
bool criterion_cli_determinism(std::string& detail) {
    if (g_cli_path.empty()) {
        detail = "no --cli path provided";
        return false;
    }
    const std::vector<std::pair<std::string, int>> cmds = {
        {"descend --means \"QA(ln,1/2),QA(ln,1/3)\" --x 1 --y 4 --closed-form --certify --seed 7", 0},
        {"descend --means \"A(1/2),A(1/2)\" --x 0 --y 1 --brute-force --grid 16 --seed 3", 0},
        {"convexity --f square --mean \"QA(ln,1/2)\" --lo 0.5 --hi 4 --samples 2000 --seed 123", 0},
        {"convexity --f negsquare --mean \"A(1/2)\" --lo -1 --hi 1 --samples 500 --seed 123", 2},
        {"convexity --f square --mean \"A(1/3)\" --exact --max-den 15 --side upper --seed 4", 0},
        {"convexity --f negsquare --mean \"A(1/2)\" --lo -1 --hi 1 --exact --max-den 12 --seed 4", 2},
        {"eig --u 0.5,0.7 --v 0.3,0.9 --seed 5", 0},
        {"x1-demo --t 1/3 --max-den 21 --seed 9", 0},
        {"chain --f exp --points -1,0,0.5,2 --i 2 --seed 1", 0},
    };
    for (const auto& [cmd, expect_code] : cmds) {
        int code1 = 0, code2 = 0;
        const std::string a = run_cli(cmd, code1);
        const std::string b = run_cli(cmd, code2);
        if (a.empty() || code1 != code2 || a != b) {
            detail = "output differs between runs for: " + cmd;
            return false;
        }
        if (code1 != expect_code) {
            detail = "unexpected exit code " + std::to_string(code1) + " for: " + cmd;
            return false;
        }
    }
    detail = std::to_string(cmds.size()) + " commands replayed byte-identically with expected exit codes";
    return true;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
    double time_limit_s;  // 0 = no limit pinned by the criterion
};

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--cli") == 0) g_cli_path = argv[i + 1];
    }

    const std::vector<Criterion> criteria = {
        {1, "closed form vs solver (quasi-arithmetic tuples)", criterion_closed_form_vs_solver, 10.0},
        {2, "spectral criterion equivalence", criterion_spectral_equivalence, 5.0},
        {3, "characteristic polynomial identity P(1) = w", criterion_char_poly_identity, 0.0},
        {4, "positive eigenpair", criterion_positive_eigenvector, 0.0},
        {5, "exact identity r_i = sigma_i", criterion_exact_sigma, 0.0},
        {6, "extended chain inequality", criterion_chain, 0.0},
        {7, "Prp-x1 and addition non-closure reproduction", criterion_x1, 30.0},
        {8, "descendants inherit lower convexity", criterion_inheritance, 0.0},
        {9, "non-uniqueness detection by brute force", criterion_brute_force, 0.0},
        {10, "two-way recursion closed form", criterion_rmat, 0.0},
        {11, "squeeze convergence", criterion_squeeze, 0.0},
        {12, "CLI determinism", criterion_cli_determinism, 0.0},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
            ok = false;
            detail += " [exceeded " + std::to_string(c.time_limit_s) + "s budget]";
        }
        std::printf("%s criterion %2d (%6.2fs): %s -- %s\n", ok ? "PASS" : "FAIL", c.id, secs,
                    c.name, detail.c_str());
        if (!ok) ++failed;
    }
    if (failed) std::printf("%d criterion(s) failed\n", failed);
    return failed == 0 ? 0 : 1;
}
