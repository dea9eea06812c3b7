#pragma once

// Descendants of an n-tuple of means: the coupled fixed-point map, the
// iterative solver with contraction certificates, brute-force fixed-point
// enumeration, and the closed forms for the quasi-arithmetic and the
// p/q/h-recursion families.

#include <optional>
#include <vector>

#include "meandesc/means.hpp"
#include "meandesc/rational.hpp"

namespace meandesc::descend {

struct DescendantProblem {
    std::vector<Mean> means;  // M_1..M_n, n >= 2
    double x;
    double y;

    DescendantProblem(std::vector<Mean> means_, double x_, double y_);
    int n() const { return static_cast<int>(means.size()); }
};

// phi_{(x,y)}(t) = (M_1(x,t_2), ..., M_i(t_{i-1},t_{i+1}), ..., M_n(t_{n-1},y)).
// Input must be non-decreasing inside [x, y]; each output component lies in
// the bracket of its pair (hence in the box), but the image of an interior
// tuple need not stay ordered -- only the inward condition at active
// constraints is guaranteed. The solver restores ordering after each step.
std::vector<double> phi_apply(const DescendantProblem& problem, const std::vector<double>& t);

struct ContractionCertificate {
    std::vector<double> a;  // a_2..a_n
    std::vector<double> b;  // b_1..b_{n-1}
    std::vector<double> w;  // w_1..w_{n-1}, seeded w_{-1} = w_0 = 1
    bool valid = false;     // valid <=> all w_i > 0
    std::vector<double> c;  // positive weights c_1..c_n (when valid)
    double lambda = 0.0;    // contraction factor in (0, 1) (when valid)
};

struct SolveOptions {
    double tol = 1e-10;      // infinity norm of phi(t) - t
    long max_iter = 100000;
    double damping = 1.0;    // alpha in (0, 1]; halved down to 1/16 on oscillation
};

struct FixedPointResult {
    std::vector<double> xi;  // non-decreasing, inside [x, y]
    double residual = 0.0;
    long iterations = 0;
    bool converged = false;
    std::optional<ContractionCertificate> certificate;
};

FixedPointResult solve_fixed_point(const DescendantProblem& problem, const SolveOptions& opts = {});

// All grid cells of [x,y]^n_<= whose center maps within one cell of itself,
// refined by local iteration and deduplicated. n <= 4, grid_resolution >= 8.
std::vector<std::vector<double>> brute_force_fixed_points(const DescendantProblem& problem,
                                                          int grid_resolution);

// sup over a grid of |f'(t)/g'(t)|, inflated by the safety factor.
double lipschitz_modulus(const MonotoneFn& f, const MonotoneFn& g, int grid = 1024,
                         double safety = 1.05);

// a_i = lip[f_i o (f_{i-1}+g_{i-1})^{-1}], b_i = lip[g_i o (f_{i+1}+g_{i+1})^{-1}];
// when the w-recursion stays positive, (c, lambda) is the positive eigenpair
// of A(a, b) with lambda < 1.
ContractionCertificate contraction_certificate(const std::vector<MonotoneFn>& f,
                                               const std::vector<MonotoneFn>& g, int grid = 1024,
                                               double safety = 1.05);

// sigma_i = (sum_{j=i}^n prod_{k<=j} s_k/(1-s_k)) / (sum_{j=0}^n prod_{k<=j} s_k/(1-s_k)).
std::vector<double> sigma_weights(const std::vector<double>& s);
std::vector<Rational> sigma_weights_exact(const std::vector<Rational>& s);

// xi_i = h^{-1}(sigma_i h(x) + (1-sigma_i) h(y)): the unique fixed point of the
// weighted quasi-arithmetic tuple with common generator h.
std::vector<double> closed_form_quasiarithmetic(const MonotoneFn& h, const std::vector<double>& s,
                                                double x, double y, double bisect_tol = 1e-13);

// Two-way recursion: xi_j = M_{p,q}(x,y), then M_{p,h_i}(x, xi_{i+1}) going
// left and M_{h_{i-1},q}(xi_{i-1}, y) going right. h holds h_1..h_{n-1}.
std::vector<double> closed_form_rmat(const MonotoneFn& p, const MonotoneFn& q,
                                     const std::vector<MonotoneFn>& h, int j, double x, double y,
                                     double bisect_tol = 1e-13);

// The mean tuple whose phi the rmat closed form solves (h_0 = h_n = 0 convention).
std::vector<Mean> rmat_means(const MonotoneFn& p, const MonotoneFn& q,
                             const std::vector<MonotoneFn>& h, int j);

struct DescendantMean {
    Mean mean;
    bool certified = false;
    std::optional<ContractionCertificate> certificate;
};

// The i-th descendant (1-based) as a Mean; certified when a contraction
// certificate validates from the tuple's Matkowski generators.
DescendantMean descendant_mean(const std::vector<Mean>& means, int i, const SolveOptions& opts = {});

}  // namespace meandesc::descend
