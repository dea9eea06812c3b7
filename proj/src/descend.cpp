#include "meandesc/descend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "meandesc/spectral.hpp"

namespace meandesc::descend {

namespace {

// Running maxima then box clamp: restores non-decreasing order without moving
// any ordered fixed point.
void project_ordered(std::vector<double>& t, double x, double y) {
    double run = x;
    for (double& v : t) {
        run = std::max(run, v);
        v = std::min(run, y);
        run = v;
    }
}

double inf_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

DescendantProblem::DescendantProblem(std::vector<Mean> means_, double x_, double y_)
    : means(std::move(means_)), x(x_), y(y_) {
    if (means.size() < 2) throw ParamOutOfRange("a descendant problem needs n >= 2 means");
    if (!(x <= y)) throw OrderViolation("descendant problem requires x <= y");
    if (!std::isfinite(x) || !std::isfinite(y)) throw DomainViolation("endpoints must be finite");
}

std::vector<double> phi_apply(const DescendantProblem& problem, const std::vector<double>& t) {
    const int n = problem.n();
    if (static_cast<int>(t.size()) != n) throw ShapeMismatch("tuple length must match the mean count");
    if (!(t.front() >= problem.x) || !(t.back() <= problem.y)) {
        throw DomainViolation("tuple leaves the box [x, y]^n");
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (!(t[i] <= t[i + 1])) throw DomainViolation("tuple must be non-decreasing");
    }
    std::vector<double> img(n);
    for (int i = 0; i < n; ++i) {
        const double left = i == 0 ? problem.x : t[i - 1];
        const double right = i == n - 1 ? problem.y : t[i + 1];
        img[i] = problem.means[i](left, right);
    }
    return img;
}

namespace {

FixedPointResult iterate_from(const DescendantProblem& problem, std::vector<double> t,
                              const SolveOptions& opts) {
    const int n = problem.n();
    double alpha = opts.damping;
    int stale_steps = 0;
    double prev_residual = std::numeric_limits<double>::infinity();
    std::vector<double> best = t;
    double best_residual = std::numeric_limits<double>::infinity();

    FixedPointResult result;
    for (long iter = 1; iter <= opts.max_iter; ++iter) {
        std::vector<double> img = phi_apply(problem, t);
        const double residual = inf_dist(img, t);
        if (residual < best_residual) {
            best_residual = residual;
            best = t;
        }
        if (residual <= opts.tol) {
            result.xi = std::move(t);
            result.residual = residual;
            result.iterations = iter;
            result.converged = true;
            return result;
        }
        // Plain iteration can cycle (phi need not contract without a
        // certificate); halve the step after a non-decreasing stretch.
        if (residual >= prev_residual) {
            if (++stale_steps >= 10 && alpha > 1.0 / 16.0) {
                alpha = std::max(alpha / 2.0, 1.0 / 16.0);
                stale_steps = 0;
            }
        } else {
            stale_steps = 0;
        }
        prev_residual = residual;

        project_ordered(img, problem.x, problem.y);
        for (int i = 0; i < n; ++i) t[i] = (1.0 - alpha) * t[i] + alpha * img[i];
        result.iterations = iter;
    }

    result.xi = std::move(best);
    result.residual = best_residual;
    result.converged = false;
    return result;
}

}  // namespace

FixedPointResult solve_fixed_point(const DescendantProblem& problem, const SolveOptions& opts) {
    if (!(opts.tol > 0.0)) throw ParamOutOfRange("solver tolerance must be positive");
    if (!(opts.damping > 0.0 && opts.damping <= 1.0)) {
        throw ParamOutOfRange("damping must lie in (0, 1]");
    }
    const int n = problem.n();
    if (problem.x == problem.y) {
        FixedPointResult result;
        result.xi.assign(n, problem.x);
        result.converged = true;
        return result;
    }
    std::vector<double> start(n);
    for (int i = 0; i < n; ++i) {
        start[i] = problem.x + (i + 1) * (problem.y - problem.x) / (n + 1);
    }
    return iterate_from(problem, std::move(start), opts);
}

std::vector<std::vector<double>> brute_force_fixed_points(const DescendantProblem& problem,
                                                          int grid_resolution) {
    const int n = problem.n();
    if (n > 4) throw ParamOutOfRange("brute force enumeration is limited to n <= 4");
    if (grid_resolution < 8) throw ParamOutOfRange("grid resolution must be at least 8");
    if (problem.x == problem.y) return {std::vector<double>(n, problem.x)};

    const double cell = (problem.y - problem.x) / grid_resolution;
    const double accept = cell * 1.0001;  // maps within one cell of itself
    const double merge_tol = cell / 4.0;

    SolveOptions refine;
    refine.tol = std::min(1e-10, cell * 1e-4);
    refine.max_iter = 20000;

    struct Cluster {
        std::vector<double> rep;
        double spread = 0.0;
    };
    std::vector<Cluster> clusters;

    auto consider = [&](const std::vector<double>& t) {
        if (inf_dist(phi_apply(problem, t), t) > accept) return;
        const FixedPointResult r = iterate_from(problem, t, refine);
        if (!r.converged) return;
        for (Cluster& cl : clusters) {
            const double d = inf_dist(cl.rep, r.xi);
            if (d <= merge_tol) {
                cl.spread = std::max(cl.spread, d);
                return;
            }
        }
        clusters.push_back({r.xi, 0.0});
    };

    // enumerate non-decreasing index tuples in {0..g}^n
    std::vector<int> idx(n, 0);
    std::vector<double> t(n);
    while (true) {
        for (int i = 0; i < n; ++i) {
            t[i] = std::min(problem.x + idx[i] * cell, problem.y);
        }
        consider(t);
        int pos = n - 1;
        while (pos >= 0 && idx[pos] == grid_resolution) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < n; ++i) idx[i] = idx[pos];
    }

    for (const Cluster& cl : clusters) {
        // A wide cluster means distinct attractors were conflated at this
        // resolution.
        if (cl.spread > merge_tol / 2.0) {
            throw GridTooCoarse("adjacent fixed-point clusters merge at this grid resolution");
        }
    }

    std::vector<std::vector<double>> out;
    out.reserve(clusters.size());
    for (Cluster& cl : clusters) out.push_back(std::move(cl.rep));
    std::sort(out.begin(), out.end());
    return out;
}

double lipschitz_modulus(const MonotoneFn& f, const MonotoneFn& g, int grid, double safety) {
    if (grid < 2) throw ParamOutOfRange("lipschitz grid needs at least 2 points");
    if (!(safety >= 1.0)) throw ParamOutOfRange("safety factor must be >= 1");
    if (!f.has_deriv() || !g.has_deriv()) {
        throw MissingDerivative("lipschitz modulus needs derivative evaluators for both functions");
    }
    const Interval dom = Interval::intersect(f.domain(), g.domain());
    double sup = 0.0;
    for (int k = 0; k < grid; ++k) {
        const double t = dom.lo + (k + 0.5) * dom.width() / grid;
        const double gp = g.deriv(t);
        if (gp == 0.0) throw DomainViolation("denominator derivative vanishes on the grid");
        sup = std::max(sup, std::abs(f.deriv(t) / gp));
    }
    return safety * sup;
}

ContractionCertificate contraction_certificate(const std::vector<MonotoneFn>& f,
                                               const std::vector<MonotoneFn>& g, int grid,
                                               double safety) {
    const int n = static_cast<int>(f.size());
    if (n < 2) throw ParamOutOfRange("a certificate needs n >= 2 generator pairs");
    if (g.size() != f.size()) throw ShapeMismatch("generator lists must have equal length");

    ContractionCertificate cert;
    cert.a.reserve(n - 1);
    cert.b.reserve(n - 1);
    for (int i = 2; i <= n; ++i) {
        cert.a.push_back(lipschitz_modulus(f[i - 1], f[i - 2] + g[i - 2], grid, safety));
    }
    for (int i = 1; i <= n - 1; ++i) {
        cert.b.push_back(lipschitz_modulus(g[i - 1], f[i] + g[i], grid, safety));
    }

    // w_i = w_{i-1} - a_{i+1} b_i w_{i-2}
    cert.w.resize(n - 1);
    double prev2 = 1.0;
    double prev = 1.0;
    for (int i = 0; i < n - 1; ++i) {
        cert.w[i] = prev - cert.a[i] * cert.b[i] * prev2;
        prev2 = prev;
        prev = cert.w[i];
    }
    cert.valid = std::all_of(cert.w.begin(), cert.w.end(), [](double w) { return w > 0.0; });
    if (cert.valid) {
        const spectral::TwoDiagonalMatrix A(cert.a, cert.b);
        const spectral::EigenPair pair = spectral::positive_eigenvector(A);
        cert.c = pair.c;
        cert.lambda = pair.lambda;
    }
    return cert;
}

std::vector<double> sigma_weights(const std::vector<double>& s) {
    const int n = static_cast<int>(s.size());
    if (n < 1) throw ParamOutOfRange("sigma weights need at least one parameter");
    for (double sk : s) {
        if (!(sk > 0.0 && sk < 1.0)) throw ParamOutOfRange("each s_k must lie in (0, 1)");
    }
    // prefix products of s_k / (1 - s_k), j = 0..n
    std::vector<double> prod(n + 1, 1.0);
    for (int j = 1; j <= n; ++j) prod[j] = prod[j - 1] * (s[j - 1] / (1.0 - s[j - 1]));
    double denom = 0.0;
    for (int j = 0; j <= n; ++j) denom += prod[j];
    std::vector<double> sigma(n);
    for (int i = n; i >= 1; --i) {
        sigma[i - 1] = prod[i] / denom;
        if (i < n) sigma[i - 1] += sigma[i];
    }
    return sigma;
}

std::vector<Rational> sigma_weights_exact(const std::vector<Rational>& s) {
    const int n = static_cast<int>(s.size());
    if (n < 1) throw ParamOutOfRange("sigma weights need at least one parameter");
    const Rational zero(0);
    const Rational one(1);
    for (const Rational& sk : s) {
        if (!(zero < sk && sk < one)) throw ParamOutOfRange("each s_k must lie in (0, 1)");
    }
    std::vector<Rational> prod(n + 1, one);
    for (int j = 1; j <= n; ++j) prod[j] = prod[j - 1] * (s[j - 1] / (one - s[j - 1]));
    Rational denom(0);
    for (int j = 0; j <= n; ++j) denom = denom + prod[j];
    std::vector<Rational> sigma(n, zero);
    for (int i = n; i >= 1; --i) {
        sigma[i - 1] = prod[i] / denom;
        if (i < n) sigma[i - 1] = sigma[i - 1] + sigma[i];
    }
    return sigma;
}

std::vector<double> closed_form_quasiarithmetic(const MonotoneFn& h, const std::vector<double>& s,
                                                double x, double y, double bisect_tol) {
    if (!(x <= y)) throw OrderViolation("closed form requires x <= y");
    const int n = static_cast<int>(s.size());
    const std::vector<double> sigma = sigma_weights(s);  // validates s even when x == y
    if (x == y) return std::vector<double>(n, x);
    const double hx = h(x);
    const double hy = h(y);
    std::vector<double> xi(n);
    for (int i = 0; i < n; ++i) {
        const double target = sigma[i] * hx + (1.0 - sigma[i]) * hy;
        xi[i] = invert_monotone([&](double t) { return h(t); }, target, x, y, bisect_tol);
    }
    return xi;
}

std::vector<double> closed_form_rmat(const MonotoneFn& p, const MonotoneFn& q,
                                     const std::vector<MonotoneFn>& h, int j, double x, double y,
                                     double bisect_tol) {
    const int n = static_cast<int>(h.size()) + 1;
    if (n < 2) throw ParamOutOfRange("the rmat family needs n >= 2 (at least one h generator)");
    if (j < 1 || j > n) throw IndexOutOfRange("the pivot index j must lie in 1..n");
    if (!(x <= y)) throw OrderViolation("closed form requires x <= y");
    std::vector<double> xi(n);
    if (x == y) {
        std::fill(xi.begin(), xi.end(), x);
        return xi;
    }
    // xi_j = M_{p,q}(x, y)
    {
        const double target = p(x) + q(y);
        xi[j - 1] = invert_monotone([&](double t) { return p(t) + q(t); }, target, x, y, bisect_tol);
    }
    for (int i = j - 1; i >= 1; --i) {
        const MonotoneFn& hi = h[i - 1];
        const double target = p(x) + hi(xi[i]);
        xi[i - 1] =
            invert_monotone([&](double t) { return p(t) + hi(t); }, target, x, xi[i], bisect_tol);
    }
    for (int i = j + 1; i <= n; ++i) {
        const MonotoneFn& hprev = h[i - 2];
        const double target = hprev(xi[i - 2]) + q(y);
        xi[i - 1] = invert_monotone([&](double t) { return hprev(t) + q(t); }, target, xi[i - 2], y,
                                    bisect_tol);
    }
    return xi;
}

std::vector<Mean> rmat_means(const MonotoneFn& p, const MonotoneFn& q,
                             const std::vector<MonotoneFn>& h, int j) {
    const int n = static_cast<int>(h.size()) + 1;
    if (n < 2) throw ParamOutOfRange("the rmat family needs n >= 2 (at least one h generator)");
    if (j < 1 || j > n) throw IndexOutOfRange("the pivot index j must lie in 1..n");
    std::vector<Mean> means;
    means.reserve(n);
    for (int i = 1; i <= n; ++i) {
        // h_0 := h_n := 0: boundary sums drop the missing generator
        if (i < j) {
            MonotoneFn f = i == 1 ? p : p + h[i - 2];
            means.push_back(matkowski(std::move(f), h[i - 1]));
        } else if (i == j) {
            MonotoneFn f = i == 1 ? p : p + h[i - 2];
            MonotoneFn g = i == n ? q : h[i - 1] + q;
            means.push_back(matkowski(std::move(f), std::move(g)));
        } else {
            MonotoneFn g = i == n ? q : h[i - 1] + q;
            means.push_back(matkowski(h[i - 2], std::move(g)));
        }
    }
    return means;
}

DescendantMean descendant_mean(const std::vector<Mean>& means, int i, const SolveOptions& opts) {
    const int n = static_cast<int>(means.size());
    if (n < 2) throw ParamOutOfRange("descendants need n >= 2 means");
    if (i < 1 || i > n) throw IndexOutOfRange("descendant index must lie in 1..n");
    for (const Mean& m : means) {
        if (!m.is_continuous()) {
            throw PreconditionViolation("descendants are defined for continuous means only");
        }
    }

    DescendantMean out{Mean("", [](double x, double) { return x; }, false, false), false, std::nullopt};
    bool all_generators = std::all_of(means.begin(), means.end(),
                                      [](const Mean& m) { return m.generators().has_value(); });
    if (all_generators) {
        std::vector<MonotoneFn> f;
        std::vector<MonotoneFn> g;
        for (const Mean& m : means) {
            f.push_back(m.generators()->f);
            g.push_back(m.generators()->g);
        }
        try {
            ContractionCertificate cert = contraction_certificate(f, g);
            out.certified = cert.valid;
            out.certificate = std::move(cert);
        } catch (const MissingDerivative&) {
            // no derivatives: the descendant is simply not certified
        } catch (const DomainViolation&) {
            // a vanishing denominator derivative means an infinite Lipschitz
            // modulus: the sufficient condition fails, not the construction
        }
    }

    const bool strict = std::all_of(means.begin(), means.end(),
                                    [](const Mean& m) { return m.is_strict(); });
    std::string label = "D" + std::to_string(i) + "(";
    for (int k = 0; k < n; ++k) label += (k ? "," : "") + means[k].label();
    label += ")";
    auto eval = [means, i, opts](double x, double y) {
        if (x == y) return x;
        const FixedPointResult r = solve_fixed_point(DescendantProblem(means, x, y), opts);
        if (!r.converged) {
            throw NonConvergence("descendant evaluation did not converge at this pair");
        }
        return r.xi[i - 1];
    };
    out.mean = Mean(std::move(label), std::move(eval), strict, true);
    return out;
}

}  // namespace meandesc::descend
