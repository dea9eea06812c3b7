#pragma once

// Extended real scalars with the two distinct additions (upper and lower sum)
// and upper/lower second-order divided differences. The scalar type is a
// template parameter so the same arithmetic runs on doubles and on exact
// rationals.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <ostream>
#include <vector>

#include "meandesc/errors.hpp"

namespace meandesc {

enum class XTag { NegInf, Finite, PosInf };

namespace detail {

inline void validate_finite_scalar(double v) {
    if (!std::isfinite(v)) {
        throw DomainViolation("finite extended value must be a finite float (no NaN, no raw infinity)");
    }
}

// Exact scalar types carry no non-finite states.
template <class T>
inline void validate_finite_scalar(const T&) {}

}  // namespace detail

template <class T>
class Extended {
public:
    Extended() : tag_(XTag::Finite), value_{} {}
    Extended(T v) : tag_(XTag::Finite), value_(std::move(v)) { detail::validate_finite_scalar(value_); }

    static Extended neg_inf() { return Extended(XTag::NegInf); }
    static Extended pos_inf() { return Extended(XTag::PosInf); }

    XTag tag() const { return tag_; }
    bool is_finite() const { return tag_ == XTag::Finite; }
    bool is_neg_inf() const { return tag_ == XTag::NegInf; }
    bool is_pos_inf() const { return tag_ == XTag::PosInf; }

    const T& value() const {
        if (!is_finite()) throw DomainViolation("value() called on an infinite extended value");
        return value_;
    }

    // Multiplication by a nonzero finite coefficient: infinities keep or flip
    // sign with the sign of the coefficient.
    Extended scaled(const T& c) const {
        if (is_finite()) return Extended(value_ * c);
        if (c == T(0)) throw DomainViolation("cannot scale an infinite value by zero");
        const bool flip = c < T(0);
        if (is_pos_inf()) return flip ? neg_inf() : pos_inf();
        return flip ? pos_inf() : neg_inf();
    }

    Extended operator-() const {
        if (is_pos_inf()) return neg_inf();
        if (is_neg_inf()) return pos_inf();
        return Extended(-value_);
    }

    friend bool operator==(const Extended& a, const Extended& b) {
        if (a.tag_ != b.tag_) return false;
        return a.tag_ != XTag::Finite || a.value_ == b.value_;
    }
    friend bool operator!=(const Extended& a, const Extended& b) { return !(a == b); }

    // Total order: -inf < finite < +inf, finite by value.
    friend bool operator<(const Extended& a, const Extended& b) {
        if (a.tag_ == b.tag_) return a.tag_ == XTag::Finite && a.value_ < b.value_;
        if (a.tag_ == XTag::NegInf) return true;
        if (a.tag_ == XTag::PosInf) return false;
        return b.tag_ == XTag::PosInf;
    }
    friend bool operator>(const Extended& a, const Extended& b) { return b < a; }
    friend bool operator<=(const Extended& a, const Extended& b) { return !(b < a); }
    friend bool operator>=(const Extended& a, const Extended& b) { return !(a < b); }

private:
    explicit Extended(XTag tag) : tag_(tag), value_{} {}

    XTag tag_;
    T value_;
};

// x (+) y: ordinary sum unless a +inf is present, in which case +inf wins.
template <class T>
Extended<T> upper_sum(const Extended<T>& a, const Extended<T>& b) {
    if (a.is_pos_inf() || b.is_pos_inf()) return Extended<T>::pos_inf();
    if (a.is_neg_inf() || b.is_neg_inf()) return Extended<T>::neg_inf();
    return Extended<T>(a.value() + b.value());
}

// x (.) y: ordinary sum unless a -inf is present, in which case -inf wins.
template <class T>
Extended<T> lower_sum(const Extended<T>& a, const Extended<T>& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return Extended<T>::neg_inf();
    if (a.is_pos_inf() || b.is_pos_inf()) return Extended<T>::pos_inf();
    return Extended<T>(a.value() + b.value());
}

using XReal = Extended<double>;

inline std::ostream& operator<<(std::ostream& os, const XReal& v) {
    if (v.is_pos_inf()) return os << "inf";
    if (v.is_neg_inf()) return os << "-inf";
    return os << v.value();
}

namespace detail {

template <class T, class F>
std::array<Extended<T>, 3> dd_terms(const T& x, const T& y, const T& z, F&& f) {
    if (x == y || y == z || x == z) {
        throw DistinctnessViolation("divided difference requires pairwise distinct points");
    }
    const T cx = T(1) / ((y - x) * (z - x));
    const T cy = T(1) / ((x - y) * (z - y));
    const T cz = T(1) / ((x - z) * (y - z));
    return {f(x).scaled(cx), f(y).scaled(cy), f(z).scaled(cz)};
}

}  // namespace detail

// Lower second-order divided difference: three-term fold under the lower sum.
// Symmetric in (x, y, z).
template <class T, class F>
Extended<T> lower_dd(const T& x, const T& y, const T& z, F&& f) {
    const auto t = detail::dd_terms(x, y, z, std::forward<F>(f));
    return lower_sum(lower_sum(t[0], t[1]), t[2]);
}

// Upper second-order divided difference: same terms folded under the upper sum.
template <class T, class F>
Extended<T> upper_dd(const T& x, const T& y, const T& z, F&& f) {
    const auto t = detail::dd_terms(x, y, z, std::forward<F>(f));
    return upper_sum(upper_sum(t[0], t[1]), t[2]);
}

// Both divided differences of f at one triple; lower <= upper always.
struct DividedDifferencePair {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    XReal lower;
    XReal upper;
};

template <class F>
DividedDifferencePair divided_differences(double x, double y, double z, F&& f) {
    const auto t = detail::dd_terms(x, y, z, std::forward<F>(f));
    DividedDifferencePair out;
    out.x = x;
    out.y = y;
    out.z = z;
    out.lower = lower_sum(lower_sum(t[0], t[1]), t[2]);
    out.upper = upper_sum(upper_sum(t[0], t[1]), t[2]);
    return out;
}

struct ChainReport {
    XReal min_lower;   // min over consecutive lower divided differences
    XReal lower;       // lower dd at (x_0, x_i, x_{n+1})
    XReal upper;       // upper dd at (x_0, x_i, x_{n+1})
    XReal max_upper;   // max over consecutive upper divided differences
    bool holds = false;
};

namespace detail {

// a <= b up to float rounding slack; the two sides come from different
// arithmetic over different point triples.
inline bool le_with_slack(const XReal& a, const XReal& b, double slack) {
    if (!a.is_finite() || !b.is_finite()) return a <= b;
    const double scale = std::max({1.0, std::abs(a.value()), std::abs(b.value())});
    return a.value() <= b.value() + slack * scale;
}

}  // namespace detail

// Extended chain inequality report for x_0 < ... < x_{n+1} and 1 <= i <= n.
inline ChainReport check_chain(const std::vector<double>& points, int i,
                               const std::function<XReal(double)>& f, double slack = 1e-12) {
    const int n = static_cast<int>(points.size()) - 2;
    if (n < 1) throw ParamOutOfRange("chain needs at least three points");
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
        if (!(points[k] < points[k + 1])) {
            throw DistinctnessViolation("chain points must be strictly increasing");
        }
    }
    if (i < 1 || i > n) throw IndexOutOfRange("chain index must be in 1..n");

    ChainReport rep;
    rep.min_lower = XReal::pos_inf();
    rep.max_upper = XReal::neg_inf();
    for (int j = 1; j <= n; ++j) {
        const auto dd = divided_differences(points[j - 1], points[j], points[j + 1], f);
        if (dd.lower < rep.min_lower) rep.min_lower = dd.lower;
        if (dd.upper > rep.max_upper) rep.max_upper = dd.upper;
    }
    const auto coarse = divided_differences(points.front(), points[i], points.back(), f);
    rep.lower = coarse.lower;
    rep.upper = coarse.upper;
    rep.holds = detail::le_with_slack(rep.min_lower, rep.lower, slack) &&
                rep.lower <= rep.upper &&
                detail::le_with_slack(rep.upper, rep.max_upper, slack);
    return rep;
}

}  // namespace meandesc
