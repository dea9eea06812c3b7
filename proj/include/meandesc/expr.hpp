#pragma once

// The small expression vocabulary used by the CLI and the bindings:
//   means:     A(s) | QA(h, s) | MK(f, g)     (comma-separated tuples)
//   functions: [c*] id | ln | exp | cube | pow(p)
// Numbers are integers, decimals, or rationals "p/q".

#include <string>
#include <vector>

#include "meandesc/convexity.hpp"
#include "meandesc/means.hpp"

namespace meandesc::expr {

struct FnSpec {
    enum class Base { Id, Ln, Exp, Cube, Pow };
    double scale = 1.0;
    Base base = Base::Id;
    double exponent = 1.0;  // for Pow
    std::string text;
};

struct MeanSpec {
    enum class Kind { Arithmetic, QuasiArithmetic, Matkowski };
    Kind kind = Kind::Arithmetic;
    double s = 0.5;      // Arithmetic / QuasiArithmetic weight
    std::string s_text;  // raw weight text, reparseable as an exact rational
    FnSpec f;            // QuasiArithmetic generator, or Matkowski f
    FnSpec g;            // Matkowski g
    std::string text;
};

std::vector<MeanSpec> parse_means(const std::string& src);  // throws ParseError
FnSpec parse_fn(const std::string& src);
double parse_number(const std::string& src);  // throws ParseError

MonotoneFn build_fn(const FnSpec& spec, Interval domain);
Mean build_mean(const MeanSpec& spec, Interval domain);
std::vector<Mean> build_means(const std::vector<MeanSpec>& specs, Interval domain);

// Function vocabulary for the convexity checks: square | exp | abs | negsquare | cube.
convexity::ExtendedFunction build_extended_function(const std::string& name, Interval domain);

}  // namespace meandesc::expr
