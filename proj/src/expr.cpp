#include "meandesc/expr.hpp"

#include <cctype>
#include <cstdlib>

namespace meandesc::expr {

namespace {

class Cursor {
public:
    explicit Cursor(const std::string& src) : src_(src) {}

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= src_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected an identifier");
        return src_.substr(start, pos_ - start);
    }
    double number() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        if (digits() == 0) fail("expected a number");
        double value;
        if (pos_ < src_.size() && src_[pos_] == '/') {
            const double num = std::strtod(src_.substr(start, pos_ - start).c_str(), nullptr);
            ++pos_;
            std::size_t dstart = pos_;
            if (digits() == 0) fail("expected a denominator");
            const double den = std::strtod(src_.substr(dstart, pos_ - dstart).c_str(), nullptr);
            if (den == 0.0) fail("denominator must be nonzero");
            value = num / den;
        } else {
            if (pos_ < src_.size() && src_[pos_] == '.') {
                ++pos_;
                if (digits() == 0) fail("expected digits after '.'");
            }
            value = std::strtod(src_.substr(start, pos_ - start).c_str(), nullptr);
        }
        return value;
    }
    bool number_ahead() {
        skip_ws();
        if (pos_ >= src_.size()) return false;
        const char c = src_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
    }
    std::string slice(std::size_t start) const { return src_.substr(start, pos_ - start); }
    std::size_t pos() const { return pos_; }

    [[noreturn]] void fail(const std::string& msg) {
        skip_ws();
        throw ParseError(msg, 1, static_cast<int>(pos_) + 1);
    }

private:
    const std::string& src_;
    std::size_t pos_ = 0;
};

FnSpec parse_fn_at(Cursor& cur) {
    FnSpec spec;
    const std::size_t start = cur.pos();
    if (cur.number_ahead()) {
        spec.scale = cur.number();
        cur.expect('*');
        if (!(spec.scale > 0.0)) cur.fail("function scale must be positive");
    }
    const std::string name = cur.ident();
    if (name == "id") {
        spec.base = FnSpec::Base::Id;
    } else if (name == "ln") {
        spec.base = FnSpec::Base::Ln;
    } else if (name == "exp") {
        spec.base = FnSpec::Base::Exp;
    } else if (name == "cube") {
        spec.base = FnSpec::Base::Cube;
    } else if (name == "pow") {
        spec.base = FnSpec::Base::Pow;
        cur.expect('(');
        spec.exponent = cur.number();
        cur.expect(')');
    } else {
        cur.fail("unknown function '" + name + "' (expected id, ln, exp, cube, or pow(p))");
    }
    spec.text = cur.slice(start);
    return spec;
}

MeanSpec parse_mean_at(Cursor& cur) {
    MeanSpec spec;
    const std::size_t start = cur.pos();
    auto weight = [&cur, &spec] {
        cur.skip_ws();
        const std::size_t s0 = cur.pos();
        spec.s = cur.number();
        spec.s_text = cur.slice(s0);
    };
    const std::string name = cur.ident();
    if (name == "A") {
        spec.kind = MeanSpec::Kind::Arithmetic;
        cur.expect('(');
        weight();
        cur.expect(')');
    } else if (name == "QA") {
        spec.kind = MeanSpec::Kind::QuasiArithmetic;
        cur.expect('(');
        spec.f = parse_fn_at(cur);
        cur.expect(',');
        weight();
        cur.expect(')');
    } else if (name == "MK") {
        spec.kind = MeanSpec::Kind::Matkowski;
        cur.expect('(');
        spec.f = parse_fn_at(cur);
        cur.expect(',');
        spec.g = parse_fn_at(cur);
        cur.expect(')');
    } else {
        cur.fail("unknown mean '" + name + "' (expected A, QA, or MK)");
    }
    spec.text = cur.slice(start);
    return spec;
}

}  // namespace

std::vector<MeanSpec> parse_means(const std::string& src) {
    Cursor cur(src);
    std::vector<MeanSpec> out;
    out.push_back(parse_mean_at(cur));
    while (cur.accept(',')) out.push_back(parse_mean_at(cur));
    if (!cur.done()) cur.fail("unexpected trailing input");
    return out;
}

FnSpec parse_fn(const std::string& src) {
    Cursor cur(src);
    FnSpec spec = parse_fn_at(cur);
    if (!cur.done()) cur.fail("unexpected trailing input");
    return spec;
}

double parse_number(const std::string& src) {
    Cursor cur(src);
    const double v = cur.number();
    if (!cur.done()) cur.fail("unexpected trailing input");
    return v;
}

MonotoneFn build_fn(const FnSpec& spec, Interval domain) {
    MonotoneFn base = [&]() -> MonotoneFn {
        switch (spec.base) {
            case FnSpec::Base::Id: return make_identity(domain);
            case FnSpec::Base::Ln: return make_log(domain);
            case FnSpec::Base::Exp: return make_exp(domain);
            case FnSpec::Base::Cube: return make_cube(domain);
            case FnSpec::Base::Pow: return make_power(spec.exponent, domain);
        }
        throw ParamOutOfRange("unreachable function base");
    }();
    if (spec.scale != 1.0) return spec.scale * base;
    return base;
}

Mean build_mean(const MeanSpec& spec, Interval domain) {
    switch (spec.kind) {
        case MeanSpec::Kind::Arithmetic: return weighted_arithmetic(spec.s);
        case MeanSpec::Kind::QuasiArithmetic: return quasi_arithmetic(build_fn(spec.f, domain), spec.s);
        case MeanSpec::Kind::Matkowski:
            return matkowski(build_fn(spec.f, domain), build_fn(spec.g, domain));
    }
    throw ParamOutOfRange("unreachable mean kind");
}

std::vector<Mean> build_means(const std::vector<MeanSpec>& specs, Interval domain) {
    std::vector<Mean> out;
    out.reserve(specs.size());
    for (const MeanSpec& s : specs) out.push_back(build_mean(s, domain));
    return out;
}

convexity::ExtendedFunction build_extended_function(const std::string& name, Interval domain) {
    if (name == "square") return convexity::square_fn(domain);
    if (name == "exp") return convexity::exp_fn(domain);
    if (name == "abs") return convexity::abs_fn(domain);
    if (name == "negsquare") return convexity::neg_square_fn(domain);
    if (name == "cube") return convexity::cube_fn(domain);
    throw ParseError("unknown function '" + name + "' (expected square, exp, abs, negsquare, or cube)",
                     1, 1);
}

}  // namespace meandesc::expr
