#pragma once

// Upper/lower M-convexity checks for extended-real-valued functions,
// descendant inheritance tests, the rational parameter-set closure
// operations, and the exact Q0/Q1 counterexample family.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meandesc/descend.hpp"
#include "meandesc/means.hpp"
#include "meandesc/rational.hpp"
#include "meandesc/sampler.hpp"
#include "meandesc/xreal.hpp"

namespace meandesc::convexity {

struct ExtendedFunction {
    std::string label;
    Interval domain;
    std::function<XReal(double)> eval;
    std::function<XRat(const Rational&)> exact;  // empty unless exactly representable

    bool has_exact() const { return static_cast<bool>(exact); }
};

ExtendedFunction square_fn(Interval domain);
ExtendedFunction exp_fn(Interval domain);
ExtendedFunction abs_fn(Interval domain);
ExtendedFunction neg_square_fn(Interval domain);  // concave: handy counterexample source
ExtendedFunction cube_fn(Interval domain);

enum class SampleMode { Random, Grid };

struct SamplerConfig {
    SampleMode mode = SampleMode::Random;
    long count = 10000;
    std::uint64_t seed = 0;
};

enum class Verdict { NoViolation, Counterexample };

struct Witness {
    double x = 0.0;
    double y = 0.0;
    double m = 0.0;
    XReal lhs;  // the divided difference at (x, m, y)
    XReal rhs;  // zero: a violation is lhs < rhs
};

struct ConvexityReport {
    Verdict verdict = Verdict::NoViolation;
    long samples_checked = 0;
    std::optional<Witness> witness;
    std::uint64_t seed = 0;
};

ConvexityReport check_lower_convex(const ExtendedFunction& f, const Mean& M, const SamplerConfig& cfg);
ConvexityReport check_upper_convex(const ExtendedFunction& f, const Mean& M, const SamplerConfig& cfg);

// True iff the divided-difference verdict matches the chord-inequality form on
// every sample (the two characterizations of M-convexity).
bool efc_equivalent_check(const ExtendedFunction& f, const Mean& M, const SamplerConfig& cfg,
                          bool lower);

struct InheritanceReport {
    bool premise_holds = false;                 // every input mean passes lower convexity
    std::vector<ConvexityReport> premise;       // one per input mean
    std::vector<ConvexityReport> descendants;   // one per descendant index i = 1..n
    bool all_pass = false;
};

InheritanceReport inheritance_check(const ExtendedFunction& f, const std::vector<Mean>& means,
                                    const SamplerConfig& cfg,
                                    const descend::SolveOptions& solve = {});

enum class RationalClass { Q0, Q1, Neither };

// Lowest-terms parity rule: odd denominator with even numerator -> Q0, odd/odd
// -> Q1, even denominator -> neither.
RationalClass classify_rational(const Rational& r);
std::string to_string(RationalClass c);

// {t*s2+(1-t)*s1, t*s1, t*s2, 1-(1-t)(1-s1), 1-(1-t)(1-s2)}, all in (0,1).
std::vector<Rational> ac_closure_ops(const Rational& t, const Rational& s1, const Rational& s2);

struct OrbitElement {
    Rational value;
    std::string provenance;
};

struct RationalParamSet {
    std::vector<OrbitElement> elements;  // sorted by value, unique

    bool contains(const Rational& r) const;
    // Largest gap between consecutive elements of {0} u values u {1}.
    Rational mesh() const;
};

// Breadth-first closure of the seed set under the three operations, capped.
RationalParamSet closure_orbit(const std::vector<Rational>& seeds, int depth, std::size_t cap = 4096);

// r_i = (l^{n+1} - l^i (m-l)^{n+1-i}) / (l^{n+1} - (m-l)^{n+1}), i = 1..n.
std::vector<Rational> generate_r_fractions(long l, long m, int n);

// A convex evaluator carried in both float and exact form.
struct ConvexGenerator {
    std::string label;
    RealFn eval;
    std::function<Rational(const Rational&)> exact;
};

ConvexGenerator square_generator();

// Prp-x1 family on I = [lo, a] with a = sup I in Q1: h on (I n Q0) u {a},
// +inf elsewhere.
ExtendedFunction build_x1_function(const ConvexGenerator& h, const Rational& lo, const Rational& a);

struct ExactWitness {
    Rational x, y, m;
    XRat dd;  // the exact upper divided difference; violation is dd < 0
};

struct ExactScanReport {
    Verdict verdict = Verdict::NoViolation;
    long pairs_checked = 0;
    std::optional<ExactWitness> witness;
};

// Exact upper A_t-convexity over all ordered pairs of rationals in the domain
// with denominator <= max_denominator.
ExactScanReport exact_upper_scan(const ExtendedFunction& f, const Rational& t, int max_denominator);

// Lower-side counterpart. Slower: the middle value must be evaluated for
// every pair (an infinite endpoint no longer decides the verdict).
ExactScanReport exact_lower_scan(const ExtendedFunction& f, const Rational& t, int max_denominator);

struct AdditionWitness {
    Rational s, t, sum;   // s, t in Q1, sum = s + t in Q0
    Rational x, y, u;     // u = sum*x + (1-sum)*y
    XRat lhs;             // f(u) = +inf
    Rational rhs;         // sum*h(x) + (1-sum)*h(y), finite
};

// Concrete exact witness that the upper AC set of the x1 function is not
// closed under addition.
AdditionWitness addition_nonclosure_witness(const Rational& s, const Rational& t,
                                            const ConvexGenerator& h, const Rational& lo,
                                            const Rational& a);

}  // namespace meandesc::convexity
