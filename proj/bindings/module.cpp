// Python bindings for the main operations. Scalars cross the boundary as
// plain floats (+-inf for the extended values) and exact rationals as "p/q"
// strings.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "meandesc/convexity.hpp"
#include "meandesc/descend.hpp"
#include "meandesc/expr.hpp"
#include "meandesc/means.hpp"
#include "meandesc/rational.hpp"
#include "meandesc/spectral.hpp"
#include "meandesc/xreal.hpp"

namespace py = pybind11;
using namespace meandesc;

namespace {

double xr_out(const XReal& v) {
    if (v.is_pos_inf()) return std::numeric_limits<double>::infinity();
    if (v.is_neg_inf()) return -std::numeric_limits<double>::infinity();
    return v.value();
}

XReal xr_in(double v) {
    if (std::isinf(v)) return v > 0 ? XReal::pos_inf() : XReal::neg_inf();
    return XReal(v);
}

std::string xrat_out(const XRat& v) {
    if (v.is_pos_inf()) return "inf";
    if (v.is_neg_inf()) return "-inf";
    return v.value().str();
}

Interval span_domain(double x, double y) { return Interval::closed(std::min(x, y), std::max(x, y)); }

std::vector<Mean> means_from(const std::string& spec, double x, double y) {
    return expr::build_means(expr::parse_means(spec), span_domain(x, y));
}

MonotoneFn fn_from(const std::string& spec, double x, double y) {
    return expr::build_fn(expr::parse_fn(spec), span_domain(x, y));
}

std::function<XReal(double)> wrap_pyfn(const py::function& f) {
    return [f](double t) { return xr_in(f(t).cast<double>()); };
}

py::dict report_to_dict(const convexity::ConvexityReport& rep) {
    py::dict out;
    out["verdict"] =
        rep.verdict == convexity::Verdict::NoViolation ? "NO_VIOLATION" : "COUNTEREXAMPLE";
    out["samples_checked"] = rep.samples_checked;
    out["seed"] = rep.seed;
    if (rep.witness) {
        py::dict w;
        w["x"] = rep.witness->x;
        w["y"] = rep.witness->y;
        w["m"] = rep.witness->m;
        w["lhs"] = xr_out(rep.witness->lhs);
        w["rhs"] = xr_out(rep.witness->rhs);
        out["witness"] = w;
    }
    return out;
}

py::dict certificate_to_dict(const descend::ContractionCertificate& cert) {
    py::dict out;
    out["a"] = cert.a;
    out["b"] = cert.b;
    out["w"] = cert.w;
    out["valid"] = cert.valid;
    if (cert.valid) {
        out["c"] = cert.c;
        out["lambda"] = cert.lambda;
    }
    return out;
}

convexity::SamplerConfig sampler_config(long samples, std::uint64_t seed, const std::string& mode) {
    convexity::SamplerConfig cfg;
    cfg.count = samples;
    cfg.seed = seed;
    if (mode == "random") {
        cfg.mode = convexity::SampleMode::Random;
    } else if (mode == "grid") {
        cfg.mode = convexity::SampleMode::Grid;
    } else {
        throw ParamOutOfRange("sampler mode must be 'random' or 'grid'");
    }
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "descendants of two-variable means, spectral certificates, and M-convexity checks";

    // extended-real arithmetic
    m.def(
        "upper_sum", [](double a, double b) { return xr_out(upper_sum(xr_in(a), xr_in(b))); },
        py::arg("a"), py::arg("b"), "Upper sum: +inf absorbs, (-inf) + (+inf) = +inf.");
    m.def(
        "lower_sum", [](double a, double b) { return xr_out(lower_sum(xr_in(a), xr_in(b))); },
        py::arg("a"), py::arg("b"), "Lower sum: -inf absorbs, (-inf) + (+inf) = -inf.");
    m.def(
        "lower_dd",
        [](double x, double y, double z, const py::function& f) {
            return xr_out(lower_dd(x, y, z, wrap_pyfn(f)));
        },
        py::arg("x"), py::arg("y"), py::arg("z"), py::arg("f"),
        "Lower second-order divided difference of an extended-real function.");
    m.def(
        "upper_dd",
        [](double x, double y, double z, const py::function& f) {
            return xr_out(upper_dd(x, y, z, wrap_pyfn(f)));
        },
        py::arg("x"), py::arg("y"), py::arg("z"), py::arg("f"));
    m.def(
        "check_chain",
        [](const std::vector<double>& points, int i, const py::function& f) {
            const auto rep = check_chain(points, i, wrap_pyfn(f));
            py::dict out;
            out["min_lower"] = xr_out(rep.min_lower);
            out["lower"] = xr_out(rep.lower);
            out["upper"] = xr_out(rep.upper);
            out["max_upper"] = xr_out(rep.max_upper);
            out["holds"] = rep.holds;
            return out;
        },
        py::arg("points"), py::arg("i"), py::arg("f"),
        "Extended chain inequality report over a strictly increasing point chain.");

    // spectral
    m.def(
        "w_sequence",
        [](const std::vector<double>& u, const std::vector<double>& v) {
            return spectral::w_sequence(spectral::TwoDiagonalMatrix(u, v));
        },
        py::arg("u"), py::arg("v"));
    m.def(
        "char_poly",
        [](const std::vector<double>& u, const std::vector<double>& v, int k, double lam) {
            return spectral::char_poly(spectral::TwoDiagonalMatrix(u, v), k, lam);
        },
        py::arg("u"), py::arg("v"), py::arg("k"), py::arg("lam"));
    m.def(
        "eigenvalues",
        [](const std::vector<double>& u, const std::vector<double>& v, double tol) {
            return spectral::eigenvalues(spectral::TwoDiagonalMatrix(u, v), tol);
        },
        py::arg("u"), py::arg("v"), py::arg("tol") = 1e-12);
    m.def(
        "all_below_one",
        [](const std::vector<double>& u, const std::vector<double>& v) {
            const auto rep = spectral::all_below_one(spectral::TwoDiagonalMatrix(u, v));
            py::dict out;
            out["eigenvalues"] = rep.eigenvalues;
            out["w"] = rep.w;
            out["below_one_by_w"] = rep.below_one_by_w;
            out["below_one_by_eig"] = rep.below_one_by_eig;
            out["near_boundary"] = rep.near_boundary;
            return out;
        },
        py::arg("u"), py::arg("v"));
    m.def(
        "sufficiency_check",
        [](const std::vector<double>& u, const std::vector<double>& v) {
            return spectral::sufficiency_check(spectral::TwoDiagonalMatrix(u, v));
        },
        py::arg("u"), py::arg("v"));
    m.def(
        "positive_eigenvector",
        [](const std::vector<double>& u, const std::vector<double>& v, double tol) {
            const auto pair = spectral::positive_eigenvector(spectral::TwoDiagonalMatrix(u, v), tol);
            return py::make_tuple(pair.c, pair.lambda);
        },
        py::arg("u"), py::arg("v"), py::arg("tol") = 1e-11);

    // means and descendants
    m.def(
        "mean_eval",
        [](const std::string& spec, double x, double y) {
            const auto means = means_from(spec, x, y);
            if (means.size() != 1) throw ParamOutOfRange("mean_eval takes a single mean");
            return means.front()(x, y);
        },
        py::arg("spec"), py::arg("x"), py::arg("y"),
        "Evaluate a mean from the expression vocabulary, e.g. mean_eval('QA(ln,1/2)', 1, 4).");
    m.def(
        "squeeze_values",
        [](const std::string& spec, int n, double x, double y) {
            const auto means = means_from(spec, x, y);
            if (means.size() != 1) throw ParamOutOfRange("squeeze_values takes a single mean");
            const auto seq = squeeze_sequence(means.front(), n);
            std::vector<double> out;
            out.reserve(seq.size());
            for (const Mean& u : seq) out.push_back(u(x, y));
            return out;
        },
        py::arg("spec"), py::arg("n"), py::arg("x"), py::arg("y"));
    m.def(
        "solve_descendants",
        [](const std::string& spec, double x, double y, double tol, long max_iter, double damping,
           bool certify) {
            const auto means = means_from(spec, x, y);
            descend::SolveOptions opts;
            opts.tol = tol;
            opts.max_iter = max_iter;
            opts.damping = damping;
            const descend::DescendantProblem problem(means, x, y);
            const auto r = descend::solve_fixed_point(problem, opts);
            py::dict out;
            out["xi"] = r.xi;
            out["residual"] = r.residual;
            out["iterations"] = r.iterations;
            out["converged"] = r.converged;
            if (certify) {
                std::vector<MonotoneFn> f, g;
                bool have = true;
                for (const Mean& mn : means) {
                    if (!mn.generators()) {
                        have = false;
                        break;
                    }
                    f.push_back(mn.generators()->f);
                    g.push_back(mn.generators()->g);
                }
                if (have) out["certificate"] = certificate_to_dict(descend::contraction_certificate(f, g));
            }
            return out;
        },
        py::arg("means"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-10,
        py::arg("max_iter") = 100000, py::arg("damping") = 1.0, py::arg("certify") = false,
        "Solve the coupled fixed point of a mean tuple, e.g. 'A(1/2),A(1/2)'.");
    m.def(
        "descendant_eval",
        [](const std::string& spec, int i, double x, double y) {
            const auto means = means_from(spec, x, y);
            const auto d = descend::descendant_mean(means, i);
            py::dict out;
            out["value"] = d.mean(x, y);
            out["certified"] = d.certified;
            return out;
        },
        py::arg("means"), py::arg("i"), py::arg("x"), py::arg("y"));
    m.def(
        "brute_force_fixed_points",
        [](const std::string& spec, double x, double y, int grid) {
            return descend::brute_force_fixed_points(
                descend::DescendantProblem(means_from(spec, x, y), x, y), grid);
        },
        py::arg("means"), py::arg("x"), py::arg("y"), py::arg("grid") = 64);
    m.def("sigma_weights", &descend::sigma_weights, py::arg("s"));
    m.def(
        "sigma_weights_exact",
        [](const std::vector<std::string>& s) {
            std::vector<Rational> rs;
            rs.reserve(s.size());
            for (const auto& t : s) rs.push_back(Rational::parse(t));
            const auto sigma = descend::sigma_weights_exact(rs);
            std::vector<std::string> out;
            out.reserve(sigma.size());
            for (const auto& v : sigma) out.push_back(v.str());
            return out;
        },
        py::arg("s"), "Exact sigma weights; rationals cross as 'p/q' strings.");
    m.def(
        "closed_form_quasiarithmetic",
        [](const std::string& h, const std::vector<double>& s, double x, double y) {
            return descend::closed_form_quasiarithmetic(fn_from(h, x, y), s, x, y);
        },
        py::arg("h"), py::arg("s"), py::arg("x"), py::arg("y"));
    m.def(
        "closed_form_rmat",
        [](const std::string& p, const std::string& q, const std::vector<std::string>& h, int j,
           double x, double y) {
            std::vector<MonotoneFn> hs;
            hs.reserve(h.size());
            for (const auto& spec : h) hs.push_back(fn_from(spec, x, y));
            return descend::closed_form_rmat(fn_from(p, x, y), fn_from(q, x, y), hs, j, x, y);
        },
        py::arg("p"), py::arg("q"), py::arg("h"), py::arg("j"), py::arg("x"), py::arg("y"));
    m.def(
        "lipschitz_modulus",
        [](const std::string& f, const std::string& g, double lo, double hi, int grid,
           double safety) {
            return descend::lipschitz_modulus(fn_from(f, lo, hi), fn_from(g, lo, hi), grid, safety);
        },
        py::arg("f"), py::arg("g"), py::arg("lo"), py::arg("hi"), py::arg("grid") = 1024,
        py::arg("safety") = 1.05);

    // convexity
    m.def(
        "check_convexity",
        [](const std::string& fn, const std::string& mean, double lo, double hi, bool lower,
           long samples, std::uint64_t seed, const std::string& mode) {
            const Interval dom = Interval::closed(lo, hi);
            const auto f = expr::build_extended_function(fn, dom);
            const auto specs = expr::parse_means(mean);
            if (specs.size() != 1) throw ParamOutOfRange("check_convexity takes a single mean");
            const Mean M = expr::build_mean(specs.front(), dom);
            const auto cfg = sampler_config(samples, seed, mode);
            return report_to_dict(lower ? convexity::check_lower_convex(f, M, cfg)
                                        : convexity::check_upper_convex(f, M, cfg));
        },
        py::arg("f"), py::arg("mean"), py::arg("lo"), py::arg("hi"), py::arg("lower") = true,
        py::arg("samples") = 10000, py::arg("seed") = 0, py::arg("mode") = "random");
    m.def(
        "classify_rational",
        [](const std::string& r) {
            return convexity::to_string(convexity::classify_rational(Rational::parse(r)));
        },
        py::arg("r"), "Q0 (even/odd), Q1 (odd/odd), or NEITHER (even denominator).");
    m.def(
        "generate_r_fractions",
        [](long l, long m_, int n) {
            const auto r = convexity::generate_r_fractions(l, m_, n);
            std::vector<std::string> out;
            out.reserve(r.size());
            for (const auto& v : r) out.push_back(v.str());
            return out;
        },
        py::arg("l"), py::arg("m"), py::arg("n"));
    m.def(
        "ac_closure_ops",
        [](const std::string& t, const std::string& s1, const std::string& s2) {
            const auto vals = convexity::ac_closure_ops(Rational::parse(t), Rational::parse(s1),
                                                        Rational::parse(s2));
            std::vector<std::string> out;
            out.reserve(vals.size());
            for (const auto& v : vals) out.push_back(v.str());
            return out;
        },
        py::arg("t"), py::arg("s1"), py::arg("s2"));
    m.def(
        "exact_convexity_scan",
        [](const std::string& fn, const std::string& t, double lo, double hi, bool lower,
           int max_den) {
            const auto f = expr::build_extended_function(fn, Interval::closed(lo, hi));
            const Rational weight = Rational::parse(t);
            const auto rep = lower ? convexity::exact_lower_scan(f, weight, max_den)
                                   : convexity::exact_upper_scan(f, weight, max_den);
            py::dict out;
            out["verdict"] = rep.verdict == convexity::Verdict::NoViolation ? "NO_VIOLATION"
                                                                            : "COUNTEREXAMPLE";
            out["pairs_checked"] = rep.pairs_checked;
            if (rep.witness) {
                py::dict w;
                w["x"] = rep.witness->x.str();
                w["y"] = rep.witness->y.str();
                w["m"] = rep.witness->m.str();
                w["dd"] = xrat_out(rep.witness->dd);
                out["witness"] = w;
            }
            return out;
        },
        py::arg("f"), py::arg("t"), py::arg("lo"), py::arg("hi"), py::arg("lower") = true,
        py::arg("max_den") = 63,
        "Decision-exact A_t-convexity scan over the rational grid of the domain.");
    m.def(
        "x1_upper_scan",
        [](const std::string& t, int max_den, const std::string& lo, const std::string& a) {
            const auto f = convexity::build_x1_function(convexity::square_generator(),
                                                        Rational::parse(lo), Rational::parse(a));
            const auto rep = convexity::exact_upper_scan(f, Rational::parse(t), max_den);
            py::dict out;
            out["verdict"] = rep.verdict == convexity::Verdict::NoViolation ? "NO_VIOLATION"
                                                                            : "COUNTEREXAMPLE";
            out["pairs_checked"] = rep.pairs_checked;
            if (rep.witness) {
                py::dict w;
                w["x"] = rep.witness->x.str();
                w["y"] = rep.witness->y.str();
                w["m"] = rep.witness->m.str();
                w["dd"] = xrat_out(rep.witness->dd);
                out["witness"] = w;
            }
            return out;
        },
        py::arg("t"), py::arg("max_den") = 63, py::arg("lo") = "0", py::arg("a") = "1",
        "Exact upper A_t-convexity scan of the Q0/Q1 square-based function.");
    m.def(
        "addition_nonclosure_witness",
        [](const std::string& s, const std::string& t, const std::string& lo,
           const std::string& a) {
            const auto w = convexity::addition_nonclosure_witness(
                Rational::parse(s), Rational::parse(t), convexity::square_generator(),
                Rational::parse(lo), Rational::parse(a));
            py::dict out;
            out["s"] = w.s.str();
            out["t"] = w.t.str();
            out["sum"] = w.sum.str();
            out["x"] = w.x.str();
            out["y"] = w.y.str();
            out["u"] = w.u.str();
            out["lhs"] = xrat_out(w.lhs);
            out["rhs"] = w.rhs.str();
            return out;
        },
        py::arg("s"), py::arg("t"), py::arg("lo") = "0", py::arg("a") = "1");

    // translators run newest-first: register the base before the derived
    py::register_exception<Error>(m, "MeandescError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "MeandescParseError", PyExc_ValueError);

    m.attr("__version__") = "0.1.0";
}
