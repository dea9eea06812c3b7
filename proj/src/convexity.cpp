#include "meandesc/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace meandesc::convexity {

namespace {

std::function<XReal(double)> lift(RealFn f) {
    return [f = std::move(f)](double t) { return XReal(f(t)); };
}

// Deliver ordered pairs x < y inside the domain; returns false when the pair
// budget is exhausted early by the callback.
template <class Fn>
void for_each_pair(const Interval& domain, const SamplerConfig& cfg, Fn&& fn) {
    if (cfg.count <= 0) throw ParamOutOfRange("sampler count must be positive");
    const double span = domain.width();
    if (!(span > 0.0)) throw DomainViolation("sampling needs a non-degenerate domain");
    long delivered = 0;
    if (cfg.mode == SampleMode::Random) {
        Rng rng(cfg.seed);
        long attempts = 0;
        const long max_attempts = cfg.count * 16 + 64;
        while (delivered < cfg.count && attempts < max_attempts) {
            ++attempts;
            double x = domain.lo + rng.uniform() * span;
            double y = domain.lo + rng.uniform() * span;
            if (x > y) std::swap(x, y);
            if (!(y - x > 1e-9 * span)) continue;
            if (!domain.contains(x) || !domain.contains(y)) continue;
            ++delivered;
            if (!fn(x, y)) return;
        }
        return;
    }
    // Grid mode: smallest k with k(k-1)/2 >= count, interior points.
    long k = 2;
    while (k * (k - 1) / 2 < cfg.count) ++k;
    for (long i = 0; i < k && delivered < cfg.count; ++i) {
        for (long j = i + 1; j < k && delivered < cfg.count; ++j) {
            const double x = domain.lo + (i + 0.5) * span / k;
            const double y = domain.lo + (j + 0.5) * span / k;
            ++delivered;
            if (!fn(x, y)) return;
        }
    }
}

// A mathematically zero divided difference (affine stretches) evaluates to
// +-1 ulp of its term magnitudes; violations are judged against that scale.
// The exact-rational path has no such slack.
double dd_float_slack(const XReal& fx, const XReal& fm, const XReal& fy, double x, double m,
                      double y) {
    const double cx = 1.0 / ((m - x) * (y - x));
    const double cm = 1.0 / ((x - m) * (y - m));
    const double cy = 1.0 / ((x - y) * (m - y));
    double scale = 1.0;
    if (fx.is_finite()) scale = std::max(scale, std::abs(fx.value() * cx));
    if (fm.is_finite()) scale = std::max(scale, std::abs(fm.value() * cm));
    if (fy.is_finite()) scale = std::max(scale, std::abs(fy.value() * cy));
    return 1e-12 * scale;
}

bool dd_violates(const XReal& dd, double slack) {
    if (dd.is_neg_inf()) return true;
    if (dd.is_pos_inf()) return false;
    return dd.value() < -slack;
}

ConvexityReport run_check(const ExtendedFunction& f, const Mean& M, const SamplerConfig& cfg,
                          bool lower) {
    if (!M.is_strict()) throw PreconditionViolation("convexity checks need a strict mean");
    ConvexityReport rep;
    rep.seed = cfg.seed;
    for_each_pair(f.domain, cfg, [&](double x, double y) {
        const double m = M(x, y);
        if (!(x < m && m < y)) return true;  // pair degenerate at float resolution
        const XReal dd = lower ? lower_dd(x, m, y, f.eval) : upper_dd(x, m, y, f.eval);
        ++rep.samples_checked;
        if (dd_violates(dd, dd_float_slack(f.eval(x), f.eval(m), f.eval(y), x, m, y))) {
            rep.verdict = Verdict::Counterexample;
            rep.witness = Witness{x, y, m, dd, XReal(0.0)};
            return false;
        }
        return true;
    });
    return rep;
}

}  // namespace

ExtendedFunction square_fn(Interval domain) {
    return {"square", domain, lift([](double t) { return t * t; }),
            [](const Rational& r) { return XRat(r * r); }};
}

ExtendedFunction exp_fn(Interval domain) {
    return {"exp", domain, lift([](double t) { return std::exp(t); }), nullptr};
}

ExtendedFunction abs_fn(Interval domain) {
    return {"abs", domain, lift([](double t) { return std::abs(t); }),
            [](const Rational& r) { return XRat(r.sign() < 0 ? -r : r); }};
}

ExtendedFunction neg_square_fn(Interval domain) {
    return {"negsquare", domain, lift([](double t) { return -t * t; }),
            [](const Rational& r) { return XRat(-(r * r)); }};
}

ExtendedFunction cube_fn(Interval domain) {
    return {"cube", domain, lift([](double t) { return t * t * t; }),
            [](const Rational& r) { return XRat(r * r * r); }};
}

ConvexityReport check_lower_convex(const ExtendedFunction& f, const Mean& M,
                                   const SamplerConfig& cfg) {
    return run_check(f, M, cfg, true);
}

ConvexityReport check_upper_convex(const ExtendedFunction& f, const Mean& M,
                                   const SamplerConfig& cfg) {
    return run_check(f, M, cfg, false);
}

bool efc_equivalent_check(const ExtendedFunction& f, const Mean& M, const SamplerConfig& cfg,
                          bool lower) {
    if (!M.is_strict()) throw PreconditionViolation("convexity checks need a strict mean");
    bool equivalent = true;
    // fm <= rhs with the same kind of rounding slack the dd route gets
    auto chord_holds = [](const XReal& fm, const XReal& rhs) {
        if (rhs.is_pos_inf() || fm.is_neg_inf()) return true;
        if (fm.is_pos_inf() || rhs.is_neg_inf()) return false;
        const double slack = 1e-12 * std::max({1.0, std::abs(fm.value()), std::abs(rhs.value())});
        return fm.value() <= rhs.value() + slack;
    };
    for_each_pair(f.domain, cfg, [&](double x, double y) {
        const double m = M(x, y);
        if (!(x < m && m < y)) return true;
        const XReal fx = f.eval(x);
        const XReal fy = f.eval(y);
        const XReal fm = f.eval(m);
        const double slack = dd_float_slack(fx, fm, fy, x, m, y);
        const double cx = (y - m) / (y - x);
        const double cy = (m - x) / (y - x);
        bool dd_ok;
        bool chord_ok;
        if (lower) {
            dd_ok = !dd_violates(lower_dd(x, m, y, f.eval), slack);
            chord_ok = !fx.is_neg_inf() && !fy.is_neg_inf() && !fm.is_pos_inf() &&
                       chord_holds(fm, lower_sum(fx.scaled(cx), fy.scaled(cy)));
        } else {
            dd_ok = !dd_violates(upper_dd(x, m, y, f.eval), slack);
            chord_ok = chord_holds(fm, upper_sum(fx.scaled(cx), fy.scaled(cy)));
        }
        if (dd_ok != chord_ok) {
            equivalent = false;
            return false;
        }
        return true;
    });
    return equivalent;
}

InheritanceReport inheritance_check(const ExtendedFunction& f, const std::vector<Mean>& means,
                                    const SamplerConfig& cfg, const descend::SolveOptions& solve) {
    InheritanceReport rep;
    rep.premise_holds = true;
    for (const Mean& m : means) {
        rep.premise.push_back(check_lower_convex(f, m, cfg));
        if (rep.premise.back().verdict != Verdict::NoViolation) rep.premise_holds = false;
    }
    if (!rep.premise_holds) {
        rep.all_pass = false;
        return rep;
    }
    rep.all_pass = true;
    for (int i = 1; i <= static_cast<int>(means.size()); ++i) {
        const descend::DescendantMean d = descend::descendant_mean(means, i, solve);
        rep.descendants.push_back(check_lower_convex(f, d.mean, cfg));
        if (rep.descendants.back().verdict != Verdict::NoViolation) rep.all_pass = false;
    }
    return rep;
}

RationalClass classify_rational(const Rational& r) {
    if (r.den() % 2 == 0) return RationalClass::Neither;
    return r.num() % 2 == 0 ? RationalClass::Q0 : RationalClass::Q1;
}

std::string to_string(RationalClass c) {
    switch (c) {
        case RationalClass::Q0: return "Q0";
        case RationalClass::Q1: return "Q1";
        default: return "NEITHER";
    }
}

std::vector<Rational> ac_closure_ops(const Rational& t, const Rational& s1, const Rational& s2) {
    const Rational zero(0);
    const Rational one(1);
    for (const Rational* r : {&t, &s1, &s2}) {
        if (!(zero < *r && *r < one)) throw ParamOutOfRange("closure operands must lie in (0, 1)");
    }
    if (!(s1 < s2)) throw ParamOutOfRange("the affine rule requires s1 < s2");
    std::vector<Rational> out = {
        t * s2 + (one - t) * s1,
        t * s1,
        t * s2,
        one - (one - t) * (one - s1),
        one - (one - t) * (one - s2),
    };
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool RationalParamSet::contains(const Rational& r) const {
    return std::any_of(elements.begin(), elements.end(),
                       [&](const OrbitElement& e) { return e.value == r; });
}

Rational RationalParamSet::mesh() const {
    Rational prev(0);
    Rational best(0);
    for (const OrbitElement& e : elements) {
        const Rational gap = e.value - prev;
        if (best < gap) best = gap;
        prev = e.value;
    }
    const Rational last = Rational(1) - prev;
    if (best < last) best = last;
    return best;
}

RationalParamSet closure_orbit(const std::vector<Rational>& seeds, int depth, std::size_t cap) {
    if (depth < 0) throw ParamOutOfRange("orbit depth must be nonnegative");
    const Rational zero(0);
    const Rational one(1);
    std::map<Rational, std::string> known;
    for (const Rational& s : seeds) {
        if (!(zero < s && s < one)) throw ParamOutOfRange("orbit seeds must lie in (0, 1)");
        known.emplace(s, "seed");
    }

    for (int d = 1; d <= depth && known.size() < cap; ++d) {
        std::vector<Rational> cur;
        cur.reserve(known.size());
        for (const auto& [v, p] : known) cur.push_back(v);
        std::map<Rational, std::string> stage;
        long budget = static_cast<long>(cap) * 64;
        auto add = [&](Rational r, const char* rule) {
            if (known.size() + stage.size() >= cap) return;
            if (known.count(r) || stage.count(r)) return;
            stage.emplace(std::move(r), std::string(rule) + "@depth" + std::to_string(d));
        };
        for (std::size_t a = 0; a < cur.size() && budget > 0; ++a) {
            for (std::size_t b = 0; b < cur.size() && budget > 0; ++b) {
                budget -= 2;
                add(cur[a] * cur[b], "product");
                add(one - (one - cur[a]) * (one - cur[b]), "coproduct");
            }
        }
        for (std::size_t a = 0; a < cur.size() && budget > 0; ++a) {
            for (std::size_t i = 0; i < cur.size() && budget > 0; ++i) {
                for (std::size_t j = i + 1; j < cur.size() && budget > 0; ++j) {
                    --budget;
                    add(cur[a] * cur[j] + (one - cur[a]) * cur[i], "affine");
                }
            }
        }
        if (stage.empty()) break;
        known.insert(stage.begin(), stage.end());
    }

    RationalParamSet out;
    out.elements.reserve(known.size());
    for (auto& [v, p] : known) out.elements.push_back({v, p});
    return out;
}

std::vector<Rational> generate_r_fractions(long l, long m, int n) {
    if (!(l > 0 && l < m)) throw ParamOutOfRange("need 0 < l < m");
    if (2 * l == m) throw ParamOutOfRange("l = m/2 degenerates the fraction family");
    if (n < 2) throw ParamOutOfRange("need n >= 2");
    const Rational L = Rational(l).pow(n + 1);
    const Rational D = L - Rational(m - l).pow(n + 1);
    std::vector<Rational> r;
    r.reserve(n);
    for (int i = 1; i <= n; ++i) {
        const Rational num = L - Rational(l).pow(i) * Rational(m - l).pow(n + 1 - i);
        r.push_back(num / D);
    }
    return r;
}

ConvexGenerator square_generator() {
    return {"square", [](double t) { return t * t; }, [](const Rational& r) { return r * r; }};
}

ExtendedFunction build_x1_function(const ConvexGenerator& h, const Rational& lo, const Rational& a) {
    if (!(lo < a)) throw DomainViolation("the x1 interval needs lo < a");
    if (classify_rational(a) != RationalClass::Q1) {
        throw ClassificationError("the right endpoint a = sup I must belong to Q1");
    }
    if (!h.eval || !h.exact) throw ParamOutOfRange("the x1 generator needs float and exact evaluators");

    // h must be convex; sampled midpoint convexity guards against bad input.
    {
        Rng rng(0x783c1u);
        const double dlo = lo.to_double();
        const double dhi = a.to_double();
        for (int k = 0; k < 1000; ++k) {
            const double u = rng.uniform(dlo, dhi);
            const double v = rng.uniform(dlo, dhi);
            const double mid = 0.5 * (u + v);
            const double slack = 1e-9 * (1.0 + std::abs(h.eval(u)) + std::abs(h.eval(v)));
            if (h.eval(mid) > 0.5 * (h.eval(u) + h.eval(v)) + slack) {
                throw ParamOutOfRange("the x1 generator is not midpoint convex on I");
            }
        }
    }

    ExtendedFunction f;
    f.label = "x1[" + h.label + ",I=[" + lo.str() + "," + a.str() + "]]";
    f.domain = Interval::closed(lo.to_double(), a.to_double());
    auto rule = [h, lo, a](const Rational& r) -> XRat {
        if (r < lo || a < r) throw DomainViolation("x1 function evaluated outside I");
        if (r == a || classify_rational(r) == RationalClass::Q0) return XRat(h.exact(r));
        return XRat::pos_inf();
    };
    f.exact = rule;
    // Every double is an exact dyadic rational; evaluate the rule at that value.
    f.eval = [rule, h](double x) -> XReal {
        const XRat v = rule(Rational::from_double(x));
        if (v.is_pos_inf()) return XReal::pos_inf();
        return XReal(h.eval(x));
    };
    return f;
}

namespace {

std::vector<std::pair<Rational, XRat>> exact_grid_values(const ExtendedFunction& f,
                                                         int max_denominator) {
    if (!f.has_exact()) throw PreconditionViolation("exact scan needs an exact evaluator");
    if (max_denominator < 1) throw ParamOutOfRange("max denominator must be positive");
    const Rational dlo = Rational::from_double(f.domain.lo);
    const Rational dhi = Rational::from_double(f.domain.hi);
    std::set<Rational> grid;
    for (int q = 1; q <= max_denominator; ++q) {
        const long long pmin = static_cast<long long>(std::floor(f.domain.lo * q)) - 1;
        const long long pmax = static_cast<long long>(std::ceil(f.domain.hi * q)) + 1;
        for (long long p = pmin; p <= pmax; ++p) {
            const Rational r{BigInt(p), BigInt(q)};
            if (dlo <= r && r <= dhi) grid.insert(r);
        }
    }
    std::vector<std::pair<Rational, XRat>> values;
    values.reserve(grid.size());
    for (const Rational& r : grid) values.emplace_back(r, f.exact(r));
    return values;
}

void check_weight(const Rational& t) {
    if (!(Rational(0) < t && t < Rational(1))) {
        throw ParamOutOfRange("the weight t must lie in (0, 1)");
    }
}

}  // namespace

ExactScanReport exact_upper_scan(const ExtendedFunction& f, const Rational& t, int max_denominator) {
    check_weight(t);
    const auto values = exact_grid_values(f, max_denominator);

    ExactScanReport rep;
    const XRat zero{Rational(0)};
    const Rational one(1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            const auto& [x, fx] = values[i];
            const auto& [y, fy] = values[j];
            ++rep.pairs_checked;
            // An infinite endpoint value makes the upper divided difference +inf.
            if (fx.is_pos_inf() || fy.is_pos_inf()) continue;
            const Rational m = t * x + (one - t) * y;
            const XRat dd = upper_dd(x, m, y, f.exact);
            if (dd < zero) {
                rep.verdict = Verdict::Counterexample;
                rep.witness = ExactWitness{x, y, m, dd};
                return rep;
            }
        }
    }
    return rep;
}

ExactScanReport exact_lower_scan(const ExtendedFunction& f, const Rational& t, int max_denominator) {
    check_weight(t);
    const auto values = exact_grid_values(f, max_denominator);

    ExactScanReport rep;
    const XRat zero{Rational(0)};
    const Rational one(1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            const auto& [x, fx] = values[i];
            const auto& [y, fy] = values[j];
            ++rep.pairs_checked;
            const Rational m = t * x + (one - t) * y;
            const XRat dd = lower_dd(x, m, y, f.exact);
            if (dd < zero) {
                rep.verdict = Verdict::Counterexample;
                rep.witness = ExactWitness{x, y, m, dd};
                return rep;
            }
        }
    }
    return rep;
}

AdditionWitness addition_nonclosure_witness(const Rational& s, const Rational& t,
                                            const ConvexGenerator& h, const Rational& lo,
                                            const Rational& a) {
    const Rational zero(0);
    const Rational one(1);
    if (!(zero < s && s < one) || !(zero < t && t < one)) {
        throw PreconditionViolation("s and t must lie in (0, 1)");
    }
    if (classify_rational(s) != RationalClass::Q1 || classify_rational(t) != RationalClass::Q1) {
        throw PreconditionViolation("s and t must belong to Q1");
    }
    const Rational sum = s + t;
    if (!(sum < one)) throw PreconditionViolation("need s + t < 1");
    if (classify_rational(a) != RationalClass::Q1 || !(lo < a)) {
        throw PreconditionViolation("need an interval [lo, a] with a in Q1");
    }

    // First element of I n Q0 in ascending-denominator order.
    std::optional<Rational> x;
    for (int q = 1; q <= 1000 && !x; ++q) {
        const long long pmin = static_cast<long long>(std::floor(lo.to_double() * q)) - 1;
        const long long pmax = static_cast<long long>(std::ceil(a.to_double() * q)) + 1;
        for (long long p = pmin; p <= pmax; ++p) {
            const Rational r{BigInt(p), BigInt(q)};
            if (lo <= r && r < a && classify_rational(r) == RationalClass::Q0) {
                x = r;
                break;
            }
        }
    }
    if (!x) throw PreconditionViolation("found no Q0 point inside the interval");

    AdditionWitness w;
    w.s = s;
    w.t = t;
    w.sum = sum;
    w.x = *x;
    w.y = a;
    w.u = sum * w.x + (one - sum) * w.y;
    // u lands in Q1 \ {a}: the function value there is +inf while the convex
    // combination of the endpoint values stays finite.
    if (classify_rational(w.u) != RationalClass::Q1 || w.u == a) {
        throw PreconditionViolation("witness construction failed the parity check");
    }
    w.lhs = XRat::pos_inf();
    w.rhs = sum * h.exact(w.x) + (one - sum) * h.exact(w.y);
    return w;
}

}  // namespace meandesc::convexity
