#include "meandesc/means.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace meandesc {

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

Interval Interval::closed(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
        throw DomainViolation("interval endpoints must be finite with lo <= hi");
    }
    return Interval{lo, hi, false, false};
}

Interval Interval::open_below(double lo, double hi) {
    Interval iv = closed(lo, hi);
    iv.lo_open = true;
    return iv;
}

Interval Interval::intersect(const Interval& a, const Interval& b) {
    Interval out;
    if (a.lo > b.lo) {
        out.lo = a.lo;
        out.lo_open = a.lo_open;
    } else if (b.lo > a.lo) {
        out.lo = b.lo;
        out.lo_open = b.lo_open;
    } else {
        out.lo = a.lo;
        out.lo_open = a.lo_open || b.lo_open;
    }
    if (a.hi < b.hi) {
        out.hi = a.hi;
        out.hi_open = a.hi_open;
    } else if (b.hi < a.hi) {
        out.hi = b.hi;
        out.hi_open = b.hi_open;
    } else {
        out.hi = a.hi;
        out.hi_open = a.hi_open || b.hi_open;
    }
    if (out.lo > out.hi || (out.lo == out.hi && (out.lo_open || out.hi_open))) {
        throw DomainViolation("function domains do not overlap");
    }
    return out;
}

MonotoneFn::MonotoneFn(std::string label, RealFn eval, std::optional<RealFn> deriv, Interval domain,
                       int validation_grid)
    : label_(std::move(label)), eval_(std::move(eval)), deriv_(std::move(deriv)), domain_(domain) {
    if (!eval_) throw DomainViolation("monotone function needs an evaluator");
    if (validation_grid > 1) validate(validation_grid);
}

MonotoneFn::MonotoneFn(unchecked_t, std::string label, RealFn eval, std::optional<RealFn> deriv,
                       Interval domain)
    : label_(std::move(label)), eval_(std::move(eval)), deriv_(std::move(deriv)), domain_(domain) {}

void MonotoneFn::validate(int grid_points) const {
    if (domain_.width() <= 0) return;  // degenerate working interval, nothing to sample
    const double step = domain_.width() / grid_points;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k < grid_points; ++k) {
        const double t = domain_.lo + (k + 0.5) * step;
        const double v = eval_(t);
        if (!std::isfinite(v)) {
            throw DomainViolation("'" + label_ + "' is not finite at t=" + fmt_num(t));
        }
        if (k > 0 && !(v > prev)) {
            throw DomainViolation("'" + label_ + "' is not strictly increasing near t=" + fmt_num(t));
        }
        prev = v;
    }
    if (deriv_) {
        const int sub = std::min(grid_points, 32);
        const double h = std::max(step / 8.0, 1e-9 * std::max(1.0, std::abs(domain_.hi)));
        for (int k = 0; k < sub; ++k) {
            const double t = domain_.lo + (k + 0.5) * (domain_.width() / sub);
            const double d = (*deriv_)(t);
            if (!(d > 0.0)) {
                throw DomainViolation("'" + label_ + "' has a nonpositive derivative at t=" + fmt_num(t));
            }
            if (t - h >= domain_.lo && t + h <= domain_.hi) {
                const double fd = (eval_(t + h) - eval_(t - h)) / (2.0 * h);
                if (std::abs(fd - d) > 1e-3 * std::max(1.0, std::abs(d)) + 1e-6) {
                    throw DomainViolation("'" + label_ + "': derivative disagrees with finite differences at t=" +
                                          fmt_num(t));
                }
            }
        }
    }
}

double MonotoneFn::operator()(double t) const {
    if (!domain_.contains(t)) {
        throw DomainViolation("'" + label_ + "' evaluated outside its domain at t=" + fmt_num(t));
    }
    return eval_(t);
}

double MonotoneFn::deriv(double t) const {
    if (!deriv_) throw MissingDerivative("'" + label_ + "' has no derivative evaluator");
    if (!domain_.contains(t)) {
        throw DomainViolation("'" + label_ + "' derivative evaluated outside its domain at t=" + fmt_num(t));
    }
    return (*deriv_)(t);
}

MonotoneFn operator+(const MonotoneFn& a, const MonotoneFn& b) {
    Interval dom = Interval::intersect(a.domain_, b.domain_);
    RealFn eval = [ae = a.eval_, be = b.eval_](double t) { return ae(t) + be(t); };
    std::optional<RealFn> deriv;
    if (a.deriv_ && b.deriv_) {
        deriv = [ad = *a.deriv_, bd = *b.deriv_](double t) { return ad(t) + bd(t); };
    }
    return MonotoneFn(MonotoneFn::unchecked_t{}, a.label_ + "+" + b.label_, std::move(eval),
                      std::move(deriv), dom);
}

MonotoneFn operator*(double c, const MonotoneFn& f) {
    if (!(c > 0.0)) throw ParamOutOfRange("scaling a monotone function requires a positive factor");
    RealFn eval = [c, fe = f.eval_](double t) { return c * fe(t); };
    std::optional<RealFn> deriv;
    if (f.deriv_) deriv = [c, fd = *f.deriv_](double t) { return c * fd(t); };
    return MonotoneFn(MonotoneFn::unchecked_t{}, fmt_num(c) + "*" + f.label_, std::move(eval),
                      std::move(deriv), f.domain_);
}

MonotoneFn make_identity(Interval domain) {
    return MonotoneFn("id", [](double t) { return t; }, [](double) { return 1.0; }, domain, 0);
}

MonotoneFn make_log(Interval domain) {
    if (domain.lo < 0.0 || (domain.lo == 0.0 && !domain.lo_open)) {
        throw DomainViolation("ln requires a positive domain");
    }
    return MonotoneFn("ln", [](double t) { return std::log(t); }, [](double t) { return 1.0 / t; },
                      domain, 0);
}

MonotoneFn make_exp(Interval domain) {
    return MonotoneFn("exp", [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); },
                      domain, 0);
}

MonotoneFn make_cube(Interval domain) {
    return MonotoneFn("cube", [](double t) { return t * t * t; }, [](double t) { return 3.0 * t * t; },
                      domain, 0);
}

MonotoneFn make_power(double p, Interval domain) {
    if (!(p > 0.0)) throw ParamOutOfRange("pow(p) requires p > 0");
    if (domain.lo < 0.0) throw DomainViolation("pow(p) requires a nonnegative domain");
    return MonotoneFn("pow(" + fmt_num(p) + ")", [p](double t) { return std::pow(t, p); },
                      [p](double t) { return p * std::pow(t, p - 1.0); }, domain, 0);
}

Mean::Mean(std::string label, std::function<double(double, double)> eval, bool strict, bool continuous,
           std::optional<MatkowskiGenerators> generators)
    : label_(std::move(label)),
      eval_(std::move(eval)),
      strict_(strict),
      continuous_(continuous),
      generators_(std::move(generators)) {
    if (!eval_) throw DomainViolation("mean needs an evaluator");
}

double Mean::operator()(double x, double y) const {
    if (!(x <= y)) throw OrderViolation("'" + label_ + "' requires an ordered pair x <= y");
    if (x == y) return x;
    // Clamp keeps the mean-value invariant exact under float rounding.
    return std::clamp(eval_(x, y), x, y);
}

double invert_monotone(const RealFn& S, double target, double lo, double hi, double width_tol) {
    if (!(width_tol > 0.0)) throw ParamOutOfRange("bisection tolerance must be positive");
    if (lo > hi) throw OrderViolation("bisection bracket must satisfy lo <= hi");
    if (lo == hi) return lo;
    double slo = S(lo);
    double shi = S(hi);
    if (!(slo <= shi)) throw BracketFailure("evaluator is not increasing over the bracket");
    const double slack = 1e-9 * (std::abs(slo) + std::abs(shi) + 1.0);
    if (target < slo - slack || target > shi + slack) {
        throw BracketFailure("target value is not bracketed; evaluator violates monotonicity");
    }
    if (target <= slo) return lo;
    if (target >= shi) return hi;
    const double tol = std::max(width_tol, 4.0 * std::numeric_limits<double>::epsilon() *
                                               std::max(std::abs(lo), std::abs(hi)));
    for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // float resolution reached
        if (S(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Mean weighted_arithmetic(double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw ParamOutOfRange("weighted arithmetic mean needs s in [0, 1]");
    const bool strict = s > 0.0 && s < 1.0;
    // s in {0, 1} (min/max) has no Matkowski representation: both generators
    // must be strictly increasing.
    std::optional<MatkowskiGenerators> generators;
    if (strict) {
        const Interval wide = Interval::closed(-1e8, 1e8);
        generators = MatkowskiGenerators{s * make_identity(wide), (1.0 - s) * make_identity(wide)};
    }
    return Mean("A(" + fmt_num(s) + ")",
                [s](double x, double y) { return s * x + (1.0 - s) * y; }, strict, true,
                std::move(generators));
}

Mean matkowski(MonotoneFn f, MonotoneFn g, double bisect_tol) {
    Interval::intersect(f.domain(), g.domain());  // the generators must share a domain
    const std::string label = "MK(" + f.label() + "," + g.label() + ")";
    auto fp = std::make_shared<MonotoneFn>(f);
    auto gp = std::make_shared<MonotoneFn>(g);
    auto eval = [fp, gp, bisect_tol](double x, double y) {
        const double target = (*fp)(x) + (*gp)(y);
        RealFn sum = [&](double t) { return (*fp)(t) + (*gp)(t); };
        return invert_monotone(sum, target, x, y, bisect_tol);
    };
    return Mean(label, std::move(eval), true, true, MatkowskiGenerators{std::move(f), std::move(g)});
}

Mean quasi_arithmetic(MonotoneFn h, double s, double bisect_tol) {
    if (!(s > 0.0 && s < 1.0)) throw ParamOutOfRange("quasi-arithmetic mean needs s in (0, 1)");
    const std::string label = "QA(" + h.label() + "," + fmt_num(s) + ")";
    auto hp = std::make_shared<MonotoneFn>(h);
    auto eval = [hp, s, bisect_tol](double x, double y) {
        const double target = s * (*hp)(x) + (1.0 - s) * (*hp)(y);
        RealFn fn = [&](double t) { return (*hp)(t); };
        return invert_monotone(fn, target, x, y, bisect_tol);
    };
    MatkowskiGenerators gen{s * h, (1.0 - s) * h};
    return Mean(label, std::move(eval), true, true, std::move(gen));
}

Mean compose(Mean M, Mean N1, Mean N2) {
    const std::string label = M.label() + "o(" + N1.label() + "," + N2.label() + ")";
    const bool strict = M.is_strict() && N1.is_strict() && N2.is_strict();
    const bool continuous = M.is_continuous() && N1.is_continuous() && N2.is_continuous();
    auto Mp = std::make_shared<Mean>(std::move(M));
    auto N1p = std::make_shared<Mean>(std::move(N1));
    auto N2p = std::make_shared<Mean>(std::move(N2));
    auto eval = [Mp, N1p, N2p](double x, double y) {
        const double p1 = (*N1p)(x, y);
        const double p2 = (*N2p)(x, y);
        if (p1 > p2) throw OrderViolation("composition requires N1 <= N2 at the evaluation pair");
        return (*Mp)(p1, p2);
    };
    return Mean(label, std::move(eval), strict, continuous);
}

std::vector<Mean> squeeze_sequence(const Mean& M, int n) {
    if (n < 0) throw ParamOutOfRange("squeeze sequence length must be nonnegative");
    std::vector<Mean> seq;
    seq.reserve(n + 1);
    Mean u = weighted_arithmetic(0.0);  // U_0 = max
    seq.push_back(u);
    for (int k = 1; k <= n; ++k) {
        Mean next = compose(M, M, seq.back());
        // Each U_k is a strict mean when M is (M < U_k < U_{k-1}); the generic
        // composition flag is too conservative because U_0 = max is not strict.
        seq.emplace_back("squeeze[" + std::to_string(k) + "](" + M.label() + ")",
                         [next](double x, double y) { return next(x, y); }, M.is_strict(),
                         M.is_continuous());
    }
    return seq;
}

}  // namespace meandesc
