#include "meandesc/rational.hpp"

#include <cmath>
#include <cstdint>

namespace meandesc {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw DomainViolation("rational denominator must be nonzero");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::from_double(double x) {
    if (!std::isfinite(x)) throw DomainViolation("cannot convert a non-finite double to a rational");
    if (x == 0.0) return Rational();
    int exp = 0;
    const double frac = std::frexp(x, &exp);            // x = frac * 2^exp, |frac| in [0.5, 1)
    const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));  // exactly integral
    const int shift = exp - 53;
    if (shift >= 0) return Rational(BigInt(mant) << shift, 1);
    return Rational(BigInt(mant), BigInt(1) << (-shift));
}

Rational Rational::parse(std::string_view text) {
    std::size_t pos = 0;
    auto fail = [&](const std::string& msg) -> ParseError {
        return ParseError(msg, 1, static_cast<int>(pos) + 1);
    };
    auto read_digits = [&]() {
        std::string out;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') out.push_back(text[pos++]);
        return out;
    };

    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    const std::string whole = read_digits();
    if (whole.empty()) throw fail("expected a number");

    BigInt num(whole);
    BigInt den(1);
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        const std::string d = read_digits();
        if (d.empty()) throw fail("expected a denominator after '/'");
        den = BigInt(d);
        if (den == 0) throw fail("denominator must be nonzero");
    } else if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::string frac = read_digits();
        if (frac.empty()) throw fail("expected digits after '.'");
        for (char c : frac) {
            num = num * 10 + (c - '0');
            den *= 10;
        }
    }
    if (pos != text.size()) throw fail("unexpected trailing characters in number");
    if (negative) num = -num;
    return Rational(std::move(num), std::move(den));
}

double Rational::to_double() const {
    return num_.convert_to<double>() / den_.convert_to<double>();
}

std::string Rational::str() const {
    std::string s = num_.str();
    if (den_ != 1) {
        s += "/";
        s += den_.str();
    }
    return s;
}

Rational Rational::pow(unsigned k) const {
    Rational result(1);
    Rational base = *this;
    while (k > 0) {
        if (k & 1u) result = result * base;
        base = base * base;
        k >>= 1u;
    }
    return result;
}

}  // namespace meandesc
