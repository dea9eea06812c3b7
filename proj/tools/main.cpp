// meandesc CLI: batch front end emitting long-format CSV reports
// (columns seed,kind,index,value) with recorded seeds for reproducibility.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "meandesc/convexity.hpp"
#include "meandesc/descend.hpp"
#include "meandesc/expr.hpp"
#include "meandesc/means.hpp"
#include "meandesc/rational.hpp"
#include "meandesc/spectral.hpp"
#include "meandesc/xreal.hpp"

namespace {

using namespace meandesc;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCounterexample = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitModuleError = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(const XReal& v) {
    if (v.is_pos_inf()) return "inf";
    if (v.is_neg_inf()) return "-inf";
    return fmt(v.value());
}

std::string fmt(const XRat& v) {
    if (v.is_pos_inf()) return "inf";
    if (v.is_neg_inf()) return "-inf";
    return v.value().str();
}

class Report {
public:
    explicit Report(std::uint64_t seed) : seed_(seed) { out_ << "seed,kind,index,value\n"; }

    void row(const std::string& kind, const std::string& index, const std::string& value) {
        out_ << seed_ << ',' << kind << ',' << index << ',' << value << '\n';
    }
    void row(const std::string& kind, int index, const std::string& value) {
        row(kind, std::to_string(index), value);
    }
    void row(const std::string& kind, const std::string& value) { row(kind, std::string(), value); }

    int emit(const std::string& path, int code) const {
        const std::string text = out_.str();
        std::fputs(text.c_str(), stdout);
        if (!path.empty()) {
            std::ofstream f(path, std::ios::binary);
            if (!f) {
                std::fprintf(stderr, "error: cannot open '%s' for writing\n", path.c_str());
                return kExitUsage;
            }
            f << text;
        }
        return code;
    }

private:
    std::uint64_t seed_;
    std::ostringstream out_;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string piece =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        out.push_back(expr::parse_number(piece));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

struct CommonOpts {
    std::uint64_t seed = 0;
    std::string csv_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--seed", opts.seed, "Sampler seed recorded in the output")
        ->envname("MEANDESC_SEED");
    cmd->add_option("--csv", opts.csv_path, "Also write the CSV report to this path");
}

// Shared-h quasi-arithmetic detection for --closed-form.
bool qa_family(const std::vector<expr::MeanSpec>& specs, expr::FnSpec& h,
               std::vector<double>& s) {
    s.clear();
    bool all_arith = true;
    for (const auto& spec : specs) all_arith &= spec.kind == expr::MeanSpec::Kind::Arithmetic;
    if (all_arith) {
        h = expr::FnSpec{};  // identity
        for (const auto& spec : specs) s.push_back(spec.s);
        return true;
    }
    for (const auto& spec : specs) {
        if (spec.kind != expr::MeanSpec::Kind::QuasiArithmetic) return false;
        s.push_back(spec.s);
    }
    h = specs.front().f;
    for (const auto& spec : specs) {
        if (spec.f.base != h.base || spec.f.scale != h.scale || spec.f.exponent != h.exponent) {
            return false;
        }
    }
    return true;
}

int run_descend(const std::string& means_text, double x, double y, int index, bool closed_form,
                bool certify, bool brute_force, int grid, const descend::SolveOptions& solve,
                const CommonOpts& common) {
    Report rep(common.seed);
    const auto specs = expr::parse_means(means_text);
    const Interval domain = Interval::closed(std::min(x, y), std::max(x, y));
    const auto means = expr::build_means(specs, domain);
    if (index < 0 || index > static_cast<int>(means.size())) {
        throw IndexOutOfRange("--i must be 0 (all components) or in 1..n");
    }

    const descend::DescendantProblem problem(means, x, y);
    const auto result = descend::solve_fixed_point(problem, solve);
    rep.row("x", fmt(x));
    rep.row("y", fmt(y));
    for (int i = 1; i <= problem.n(); ++i) {
        if (index == 0 || index == i) rep.row("xi", i, fmt(result.xi[i - 1]));
    }
    rep.row("residual", fmt(result.residual));
    rep.row("iterations", std::to_string(result.iterations));
    rep.row("converged", result.converged ? "true" : "false");

    if (closed_form) {
        expr::FnSpec hspec;
        std::vector<double> s;
        if (!qa_family(specs, hspec, s)) {
            throw ParamOutOfRange(
                "--closed-form needs a tuple of A(s) means or QA(h,s) means sharing one h");
        }
        const auto xi = descend::closed_form_quasiarithmetic(expr::build_fn(hspec, domain), s, x, y);
        for (int i = 1; i <= problem.n(); ++i) {
            if (index == 0 || index == i) rep.row("xi_closed", i, fmt(xi[i - 1]));
        }
    }

    if (certify) {
        std::vector<MonotoneFn> f, g;
        for (const Mean& m : means) {
            if (!m.generators()) {
                throw ParamOutOfRange("--certify needs Matkowski generators for every mean");
            }
            f.push_back(m.generators()->f);
            g.push_back(m.generators()->g);
        }
        const auto cert = descend::contraction_certificate(f, g);
        for (std::size_t k = 0; k < cert.a.size(); ++k) {
            rep.row("a", static_cast<int>(k + 2), fmt(cert.a[k]));
        }
        for (std::size_t k = 0; k < cert.b.size(); ++k) {
            rep.row("b", static_cast<int>(k + 1), fmt(cert.b[k]));
        }
        for (std::size_t k = 0; k < cert.w.size(); ++k) {
            rep.row("w", static_cast<int>(k + 1), fmt(cert.w[k]));
        }
        rep.row("certificate_valid", cert.valid ? "true" : "false");
        if (cert.valid) {
            rep.row("lambda", fmt(cert.lambda));
            for (std::size_t k = 0; k < cert.c.size(); ++k) {
                rep.row("c", static_cast<int>(k + 1), fmt(cert.c[k]));
            }
        }
    }

    if (brute_force) {
        const auto clusters = descend::brute_force_fixed_points(problem, grid);
        rep.row("cluster_count", std::to_string(clusters.size()));
        for (std::size_t k = 0; k < clusters.size(); ++k) {
            std::string joined;
            for (std::size_t i = 0; i < clusters[k].size(); ++i) {
                joined += (i ? ";" : "") + fmt(clusters[k][i]);
            }
            rep.row("cluster", static_cast<int>(k + 1), joined);
        }
    }

    return rep.emit(common.csv_path, result.converged ? kExitOk : kExitNonConvergence);
}

int run_certify(const std::string& means_text, double x, double y, const CommonOpts& common) {
    Report rep(common.seed);
    const auto specs = expr::parse_means(means_text);
    const Interval domain = Interval::closed(std::min(x, y), std::max(x, y));
    const auto means = expr::build_means(specs, domain);
    std::vector<MonotoneFn> f, g;
    for (const Mean& m : means) {
        if (!m.generators()) {
            throw ParamOutOfRange("certify needs Matkowski generators for every mean");
        }
        f.push_back(m.generators()->f);
        g.push_back(m.generators()->g);
    }
    const auto cert = descend::contraction_certificate(f, g);
    for (std::size_t k = 0; k < cert.a.size(); ++k) rep.row("a", static_cast<int>(k + 2), fmt(cert.a[k]));
    for (std::size_t k = 0; k < cert.b.size(); ++k) rep.row("b", static_cast<int>(k + 1), fmt(cert.b[k]));
    for (std::size_t k = 0; k < cert.w.size(); ++k) rep.row("w", static_cast<int>(k + 1), fmt(cert.w[k]));
    rep.row("valid", cert.valid ? "true" : "false");
    if (cert.valid) {
        rep.row("lambda", fmt(cert.lambda));
        for (std::size_t k = 0; k < cert.c.size(); ++k) {
            rep.row("c", static_cast<int>(k + 1), fmt(cert.c[k]));
        }
    }
    return rep.emit(common.csv_path, kExitOk);
}

int run_eig(const std::string& u_text, const std::string& v_text, double tol,
            const CommonOpts& common) {
    Report rep(common.seed);
    const spectral::TwoDiagonalMatrix A(parse_list(u_text), parse_list(v_text));
    const auto report = spectral::all_below_one(A, tol);
    for (std::size_t k = 0; k < report.eigenvalues.size(); ++k) {
        rep.row("eigenvalue", static_cast<int>(k), fmt(report.eigenvalues[k]));
    }
    for (std::size_t k = 0; k < report.w.size(); ++k) {
        rep.row("w", static_cast<int>(k + 1), fmt(report.w[k]));
    }
    rep.row("verdict", "below_one_by_w", report.below_one_by_w ? "true" : "false");
    rep.row("verdict", "below_one_by_eig", report.below_one_by_eig ? "true" : "false");
    rep.row("verdict", "sufficiency", spectral::sufficiency_check(A) ? "true" : "false");
    const std::string cross = report.near_boundary ? "indeterminate"
                              : report.below_one_by_w == report.below_one_by_eig ? "ok"
                                                                                 : "mismatch";
    rep.row("verdict", "cross_check", cross);
    return rep.emit(common.csv_path, kExitOk);
}

int run_convexity(const std::string& fn_name, const std::string& mean_text, double lo, double hi,
                  const std::string& mode, long samples, bool upper, bool exact, int max_den,
                  const CommonOpts& common) {
    Report rep(common.seed);
    const Interval domain = Interval::closed(lo, hi);
    const auto f = expr::build_extended_function(fn_name, domain);
    const auto specs = expr::parse_means(mean_text);
    if (specs.size() != 1) throw ParamOutOfRange("convexity checks take exactly one mean");

    if (exact) {
        // decision-exact scan over the rational grid; weighted arithmetic
        // means with exact weights only
        if (specs.front().kind != expr::MeanSpec::Kind::Arithmetic) {
            throw ParamOutOfRange("--exact supports weighted arithmetic means A(p/q) only");
        }
        if (!f.has_exact()) {
            throw ParamOutOfRange("--exact needs an exactly representable function "
                                  "(square, negsquare, cube, abs)");
        }
        const Rational t = Rational::parse(specs.front().s_text);
        const auto result = upper ? convexity::exact_upper_scan(f, t, max_den)
                                  : convexity::exact_lower_scan(f, t, max_den);
        rep.row("function", fn_name);
        rep.row("mean", "\"A(" + t.str() + ")\"");
        rep.row("side", upper ? "upper" : "lower");
        rep.row("max_denominator", std::to_string(max_den));
        rep.row("verdict", result.verdict == convexity::Verdict::NoViolation ? "NO_VIOLATION"
                                                                             : "COUNTEREXAMPLE");
        rep.row("pairs_checked", std::to_string(result.pairs_checked));
        if (result.witness) {
            rep.row("witness_x", result.witness->x.str());
            rep.row("witness_y", result.witness->y.str());
            rep.row("witness_m", result.witness->m.str());
            rep.row("witness_dd", fmt(result.witness->dd));
        }
        const bool counterexample = result.verdict == convexity::Verdict::Counterexample;
        return rep.emit(common.csv_path, counterexample ? kExitCounterexample : kExitOk);
    }

    const Mean mean = expr::build_mean(specs.front(), domain);

    convexity::SamplerConfig cfg;
    cfg.seed = common.seed;
    cfg.count = samples;
    if (mode == "random") {
        cfg.mode = convexity::SampleMode::Random;
    } else if (mode == "grid") {
        cfg.mode = convexity::SampleMode::Grid;
    } else {
        throw ParamOutOfRange("--mode must be random or grid");
    }

    const auto result = upper ? convexity::check_upper_convex(f, mean, cfg)
                              : convexity::check_lower_convex(f, mean, cfg);
    rep.row("function", fn_name);
    rep.row("mean", "\"" + mean.label() + "\"");
    rep.row("side", upper ? "upper" : "lower");
    rep.row("verdict",
            result.verdict == convexity::Verdict::NoViolation ? "NO_VIOLATION" : "COUNTEREXAMPLE");
    rep.row("samples_checked", std::to_string(result.samples_checked));
    if (result.witness) {
        rep.row("witness_x", fmt(result.witness->x));
        rep.row("witness_y", fmt(result.witness->y));
        rep.row("witness_m", fmt(result.witness->m));
        rep.row("witness_lhs", fmt(result.witness->lhs));
        rep.row("witness_rhs", fmt(result.witness->rhs));
    }
    const bool counterexample = result.verdict == convexity::Verdict::Counterexample;
    return rep.emit(common.csv_path, counterexample ? kExitCounterexample : kExitOk);
}

int run_x1_demo(const std::string& t_text, int max_den, const std::string& lo_text,
                const std::string& a_text, const CommonOpts& common) {
    Report rep(common.seed);
    const Rational t = Rational::parse(t_text);
    const Rational lo = Rational::parse(lo_text);
    const Rational a = Rational::parse(a_text);
    const auto h = convexity::square_generator();
    const auto f = convexity::build_x1_function(h, lo, a);
    rep.row("t", t.str());
    rep.row("interval", "[" + lo.str() + "," + a.str() + "]");
    rep.row("max_denominator", std::to_string(max_den));

    bool ok = true;

    const auto scan_t = convexity::exact_upper_scan(f, t, max_den);
    rep.row("upper_At", "verdict",
            scan_t.verdict == convexity::Verdict::NoViolation ? "NO_VIOLATION" : "COUNTEREXAMPLE");
    rep.row("upper_At", "pairs_checked", std::to_string(scan_t.pairs_checked));
    ok &= scan_t.verdict == convexity::Verdict::NoViolation;

    const Rational one_minus_t = Rational(1) - t;
    const auto scan_c = convexity::exact_upper_scan(f, one_minus_t, max_den);
    rep.row("upper_A1mt", "verdict",
            scan_c.verdict == convexity::Verdict::NoViolation ? "NO_VIOLATION" : "COUNTEREXAMPLE");
    rep.row("upper_A1mt", "pairs_checked", std::to_string(scan_c.pairs_checked));
    ok &= scan_c.verdict == convexity::Verdict::Counterexample;
    if (scan_c.witness) {
        rep.row("upper_A1mt", "witness_x", scan_c.witness->x.str());
        rep.row("upper_A1mt", "witness_y", scan_c.witness->y.str());
        rep.row("upper_A1mt", "witness_m", scan_c.witness->m.str());
        rep.row("upper_A1mt", "witness_dd", fmt(scan_c.witness->dd));
    }

    if (t + t < Rational(1)) {
        const auto w = convexity::addition_nonclosure_witness(t, t, h, lo, a);
        rep.row("addition", "s", w.s.str());
        rep.row("addition", "t", w.t.str());
        rep.row("addition", "sum", w.sum.str());
        rep.row("addition", "x", w.x.str());
        rep.row("addition", "y", w.y.str());
        rep.row("addition", "u", w.u.str());
        rep.row("addition", "lhs", fmt(w.lhs));
        rep.row("addition", "rhs", w.rhs.str());
        const bool reverified = f.exact(w.u).is_pos_inf() && XRat(w.rhs) < f.exact(w.u);
        rep.row("addition", "reverified", reverified ? "true" : "false");
        ok &= reverified;
    }

    return rep.emit(common.csv_path, ok ? kExitOk : kExitCounterexample);
}

int run_chain(const std::string& fn_name, const std::string& points_text, int i,
              const CommonOpts& common) {
    Report rep(common.seed);
    const auto points = parse_list(points_text);
    if (points.size() < 3) throw ParamOutOfRange("chain needs at least three points");
    const Interval domain = Interval::closed(points.front(), points.back());
    const auto f = expr::build_extended_function(fn_name, domain);
    const auto chain = check_chain(points, i, f.eval);
    rep.row("min_lower", fmt(chain.min_lower));
    rep.row("lower", fmt(chain.lower));
    rep.row("upper", fmt(chain.upper));
    rep.row("max_upper", fmt(chain.max_upper));
    rep.row("holds", chain.holds ? "true" : "false");
    return rep.emit(common.csv_path, kExitOk);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"descendants of means, spectral criteria, and M-convexity checks"};
    app.require_subcommand(1);
    // key=value config, one [subcommand] section per command; unknown keys rejected
    app.set_config("--config", "", "Read options from a key=value file (sections per subcommand)");
    app.allow_config_extras(false);

    // descend
    auto* descend_cmd = app.add_subcommand("descend", "Solve the coupled fixed point of a mean tuple");
    std::string d_means;
    double d_x = 0.0, d_y = 1.0;
    int d_i = 0;
    bool d_closed = false, d_certify = false, d_brute = false;
    int d_grid = 64;
    descend::SolveOptions d_solve;
    CommonOpts d_common;
    descend_cmd->add_option("--means", d_means, "Mean tuple, e.g. \"A(1/2),A(1/2)\"")->required();
    descend_cmd->add_option("--x", d_x, "Left endpoint")->required();
    descend_cmd->add_option("--y", d_y, "Right endpoint")->required();
    descend_cmd->add_option("--i", d_i, "Component to report (0 = all)");
    descend_cmd->add_flag("--closed-form", d_closed, "Also report the quasi-arithmetic closed form");
    descend_cmd->add_flag("--certify", d_certify, "Also report the contraction certificate");
    descend_cmd->add_flag("--brute-force", d_brute, "Also report brute-force fixed-point clusters");
    descend_cmd->add_option("--grid", d_grid, "Brute-force grid resolution");
    descend_cmd->add_option("--tol", d_solve.tol, "Solver residual tolerance");
    descend_cmd->add_option("--max-iter", d_solve.max_iter, "Solver iteration cap");
    descend_cmd->add_option("--damping", d_solve.damping, "Initial damping factor in (0,1]");
    add_common(descend_cmd, d_common);

    // certify
    auto* certify_cmd = app.add_subcommand("certify", "Contraction certificate for a mean tuple");
    std::string c_means;
    double c_x = 0.0, c_y = 1.0;
    CommonOpts c_common;
    certify_cmd->add_option("--means", c_means, "Mean tuple")->required();
    certify_cmd->add_option("--x", c_x, "Left endpoint")->required();
    certify_cmd->add_option("--y", c_y, "Right endpoint")->required();
    add_common(certify_cmd, c_common);

    // eig
    auto* eig_cmd = app.add_subcommand("eig", "Spectral report for the two-diagonal matrix A(u,v)");
    std::string e_u, e_v;
    double e_tol = 1e-12;
    CommonOpts e_common;
    eig_cmd->add_option("--u", e_u, "Superdiagonal entries, comma separated")->required();
    eig_cmd->add_option("--v", e_v, "Subdiagonal entries, comma separated")->required();
    eig_cmd->add_option("--tol", e_tol, "Eigenvalue bracket width");
    add_common(eig_cmd, e_common);

    // convexity
    auto* conv_cmd = app.add_subcommand("convexity", "Sampled or exact M-convexity check");
    std::string v_fn = "square", v_mean, v_mode = "random", v_side = "lower";
    double v_lo = 0.0, v_hi = 1.0;
    long v_samples = 10000;
    bool v_exact = false;
    int v_max_den = 63;
    CommonOpts v_common;
    conv_cmd->add_option("--f", v_fn, "Function: square, exp, abs, negsquare, cube");
    conv_cmd->add_option("--mean", v_mean, "Mean, e.g. \"QA(ln,1/2)\"")->required();
    conv_cmd->add_option("--lo", v_lo, "Domain lower end");
    conv_cmd->add_option("--hi", v_hi, "Domain upper end");
    conv_cmd->add_option("--mode", v_mode, "Sampler: random or grid");
    conv_cmd->add_option("--samples", v_samples, "Number of pairs to check");
    conv_cmd->add_option("--side", v_side, "Which convexity: lower or upper");
    conv_cmd->add_flag("--exact", v_exact,
                       "Decision-exact scan over the rational grid (A(p/q) means only)");
    conv_cmd->add_option("--max-den", v_max_den, "Rational grid denominator bound for --exact");
    add_common(conv_cmd, v_common);

    // x1-demo
    auto* x1_cmd = app.add_subcommand("x1-demo", "Exact Q0/Q1 counterexample reproduction");
    std::string x_t = "1/3", x_lo = "0", x_a = "1";
    int x_den = 63;
    CommonOpts x_common;
    x1_cmd->add_option("--t", x_t, "Weight t in (0,1) n Q1, e.g. 1/3");
    x1_cmd->add_option("--max-den", x_den, "Grid denominator bound");
    x1_cmd->add_option("--lo", x_lo, "Interval lower end (rational)");
    x1_cmd->add_option("--a", x_a, "Interval upper end a = sup I (rational, in Q1)");
    add_common(x1_cmd, x_common);

    // chain
    auto* chain_cmd = app.add_subcommand("chain", "Extended chain inequality report");
    std::string h_fn = "square", h_points;
    int h_i = 1;
    CommonOpts h_common;
    chain_cmd->add_option("--f", h_fn, "Function: square, exp, abs, negsquare, cube");
    chain_cmd->add_option("--points", h_points, "Strictly increasing points, comma separated")
        ->required();
    chain_cmd->add_option("--i", h_i, "Interior index i in 1..n");
    add_common(chain_cmd, h_common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*descend_cmd) {
            return run_descend(d_means, d_x, d_y, d_i, d_closed, d_certify, d_brute, d_grid,
                               d_solve, d_common);
        }
        if (*certify_cmd) return run_certify(c_means, c_x, c_y, c_common);
        if (*eig_cmd) return run_eig(e_u, e_v, e_tol, e_common);
        if (*conv_cmd) {
            if (v_side != "lower" && v_side != "upper") {
                throw ParamOutOfRange("--side must be lower or upper");
            }
            return run_convexity(v_fn, v_mean, v_lo, v_hi, v_mode, v_samples, v_side == "upper",
                                 v_exact, v_max_den, v_common);
        }
        if (*x1_cmd) return run_x1_demo(x_t, x_den, x_lo, x_a, x_common);
        if (*chain_cmd) return run_chain(h_fn, h_points, h_i, h_common);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const NonConvergence& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNonConvergence;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitModuleError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitModuleError;
    }
    return kExitUsage;
}
