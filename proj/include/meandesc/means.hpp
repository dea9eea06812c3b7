#pragma once

// Two-variable means on ordered pairs and the strictly increasing generator
// functions they are built from: weighted arithmetic, Matkowski, weighted
// quasi-arithmetic, mean composition, and the squeezing sequences.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "meandesc/errors.hpp"

namespace meandesc {

using RealFn = std::function<double(double)>;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_open = false;
    bool hi_open = false;

    bool contains(double t) const {
        if (lo_open ? !(t > lo) : !(t >= lo)) return false;
        if (hi_open ? !(t < hi) : !(t <= hi)) return false;
        return true;
    }
    double width() const { return hi - lo; }

    static Interval closed(double lo, double hi);
    static Interval open_below(double lo, double hi);
    // Throws DomainViolation when the intersection is empty.
    static Interval intersect(const Interval& a, const Interval& b);
};

// A continuous strictly increasing function on a finite working interval.
// Monotonicity (and the derivative, when supplied) is validated on a sampled
// grid at construction.
class MonotoneFn {
public:
    MonotoneFn(std::string label, RealFn eval, std::optional<RealFn> deriv, Interval domain,
               int validation_grid = 1024);

    double operator()(double t) const;
    bool has_deriv() const { return deriv_.has_value(); }
    double deriv(double t) const;

    const Interval& domain() const { return domain_; }
    const std::string& label() const { return label_; }

    // Positively scaled and summed generators stay strictly increasing; these
    // skip re-validation.
    friend MonotoneFn operator+(const MonotoneFn& a, const MonotoneFn& b);
    friend MonotoneFn operator*(double c, const MonotoneFn& f);

private:
    struct unchecked_t {};
    MonotoneFn(unchecked_t, std::string label, RealFn eval, std::optional<RealFn> deriv, Interval domain);
    void validate(int grid_points) const;

    std::string label_;
    RealFn eval_;
    std::optional<RealFn> deriv_;
    Interval domain_;
};

MonotoneFn make_identity(Interval domain);
MonotoneFn make_log(Interval domain);             // requires lo > 0 (or open at 0)
MonotoneFn make_exp(Interval domain);
MonotoneFn make_cube(Interval domain);
MonotoneFn make_power(double p, Interval domain); // t^p, p > 0, on a nonnegative domain

struct MatkowskiGenerators {
    MonotoneFn f;
    MonotoneFn g;
};

// Evaluator on ordered pairs x <= y; pairs with x > y are rejected.
class Mean {
public:
    Mean(std::string label, std::function<double(double, double)> eval, bool strict, bool continuous,
         std::optional<MatkowskiGenerators> generators = std::nullopt);

    double operator()(double x, double y) const;

    bool is_strict() const { return strict_; }
    bool is_continuous() const { return continuous_; }
    const std::string& label() const { return label_; }
    const std::optional<MatkowskiGenerators>& generators() const { return generators_; }

private:
    std::string label_;
    std::function<double(double, double)> eval_;
    bool strict_;
    bool continuous_;
    std::optional<MatkowskiGenerators> generators_;
};

// Inverse of a strictly increasing evaluator by bisection on [lo, hi]; the
// target must be bracketed by S(lo) and S(hi).
double invert_monotone(const RealFn& S, double target, double lo, double hi, double width_tol = 1e-12);

// A_s(x, y) = s*x + (1-s)*y for s in [0, 1]; strict iff 0 < s < 1.
// A_1 = min and A_0 = max on ordered pairs.
Mean weighted_arithmetic(double s);

// M_{f,g}(x, y) = (f+g)^{-1}(f(x) + g(y)).
Mean matkowski(MonotoneFn f, MonotoneFn g, double bisect_tol = 1e-12);

// h^{-1}(s*h(x) + (1-s)*h(y)) for s in (0, 1).
Mean quasi_arithmetic(MonotoneFn h, double s, double bisect_tol = 1e-12);

// (x, y) -> M(N1(x, y), N2(x, y)); evaluation requires N1 <= N2 at the pair.
Mean compose(Mean M, Mean N1, Mean N2);

// U_0 = max, U_k = M o (M, U_{k-1}); returns U_0..U_n.
std::vector<Mean> squeeze_sequence(const Mean& M, int n);

}  // namespace meandesc
