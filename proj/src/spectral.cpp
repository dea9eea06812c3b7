#include "meandesc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace meandesc::spectral {

namespace {

double gershgorin_radius(const TwoDiagonalMatrix& A) {
    double cmax = 0.0;
    for (int k = 0; k < A.n(); ++k) cmax = std::max(cmax, std::sqrt(A.u[k] * A.v[k]));
    return 1.0 + 2.0 * cmax;
}

}  // namespace

TwoDiagonalMatrix::TwoDiagonalMatrix(std::vector<double> u_, std::vector<double> v_)
    : u(std::move(u_)), v(std::move(v_)) {
    if (u.size() != v.size()) throw ShapeMismatch("u and v must have the same length");
    if (u.empty()) throw ShapeMismatch("the two-diagonal matrix needs n >= 1");
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!(u[k] > 0.0) || !(v[k] > 0.0) || !std::isfinite(u[k]) || !std::isfinite(v[k])) {
            throw ParamOutOfRange("u and v must have positive finite components");
        }
    }
}

std::vector<double> TwoDiagonalMatrix::apply(const std::vector<double>& x) const {
    const int m = size();
    if (static_cast<int>(x.size()) != m) throw ShapeMismatch("vector length must be n+1");
    std::vector<double> y(m, 0.0);
    for (int i = 0; i < m; ++i) {
        if (i + 1 < m) y[i] += u[i] * x[i + 1];
        if (i > 0) y[i] += v[i - 1] * x[i - 1];
    }
    return y;
}

std::vector<double> w_sequence(const TwoDiagonalMatrix& A) {
    const int n = A.n();
    std::vector<double> w(n);
    double prev2 = 1.0;  // w_{-1}
    double prev = 1.0;   // w_0
    for (int k = 0; k < n; ++k) {
        w[k] = prev - (A.u[k] * A.v[k]) * prev2;
        prev2 = prev;
        prev = w[k];
    }
    return w;
}

double char_poly(const TwoDiagonalMatrix& A, int k, double lambda) {
    if (k < 0 || k > A.n()) throw IndexOutOfRange("char_poly block index must be in 0..n");
    double prev = lambda;  // P_0
    if (k == 0) return prev;
    double cur = lambda * lambda - A.u[0] * A.v[0];  // P_1
    for (int j = 2; j <= k; ++j) {
        // Same expression shape as the w-recursion so that P_k(1) == w_k exactly.
        const double next = lambda * cur - (A.u[j - 1] * A.v[j - 1]) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

int sturm_count_below(const TwoDiagonalMatrix& A, double lambda) {
    // LDL^T pivots of T - lambda*I for the symmetric tridiagonal T with zero
    // diagonal and off-diagonals sqrt(u_k v_k); negative pivots count the
    // eigenvalues below lambda (Sylvester inertia).
    const int m = A.size();
    constexpr double tiny = 1e-300;
    double d = -lambda;
    if (d == 0.0) d = tiny;
    int count = d < 0.0 ? 1 : 0;
    for (int i = 1; i < m; ++i) {
        const double b2 = A.u[i - 1] * A.v[i - 1];
        d = -lambda - b2 / d;
        if (d == 0.0) d = tiny;
        if (d < 0.0) ++count;
    }
    return count;
}

std::vector<double> eigenvalues(const TwoDiagonalMatrix& A, double tol) {
    if (!(tol > 0.0)) throw ParamOutOfRange("eigenvalue tolerance must be positive");
    const int m = A.size();
    const double R = gershgorin_radius(A);
    std::vector<double> eig(m);
    for (int k = 0; k < m; ++k) {
        double lo = -R;
        double hi = R;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                throw ToleranceTooSmall("eigenvalue bisection stalled at float resolution");
            }
            if (sturm_count_below(A, mid) <= k) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        eig[k] = 0.5 * (lo + hi);
    }
    return eig;
}

SpectralReport all_below_one(const TwoDiagonalMatrix& A, double eig_tol, double boundary_tol) {
    SpectralReport rep;
    rep.w = w_sequence(A);
    rep.eigenvalues = eigenvalues(A, eig_tol);
    rep.below_one_by_w = std::all_of(rep.w.begin(), rep.w.end(), [](double w) { return w > 0.0; });
    const double max_eig = rep.eigenvalues.back();
    rep.below_one_by_eig = max_eig < 1.0;
    rep.near_boundary = std::abs(max_eig - 1.0) <= boundary_tol;
    return rep;
}

bool sufficiency_check(const TwoDiagonalMatrix& A) {
    const int n = A.n();
    if (A.v[0] > 1.0) return false;
    for (int i = 0; i + 1 < n; ++i) {
        if (A.u[i] + A.v[i + 1] > 1.0) return false;
    }
    return A.u[n - 1] < 1.0;
}

EigenPair positive_eigenvector(const TwoDiagonalMatrix& A, double tol, long max_iter) {
    if (!(tol > 0.0)) throw ParamOutOfRange("eigenvector tolerance must be positive");
    const int m = A.size();
    const double R = gershgorin_radius(A);
    std::vector<double> c(m, 1.0 / m);
    double lambda_prev = std::numeric_limits<double>::infinity();
    for (long iter = 0; iter < max_iter; ++iter) {
        const std::vector<double> Ac = A.apply(c);
        double lambda = 0.0;
        for (double y : Ac) lambda += y;  // sum(c) == 1
        double residual = 0.0;
        double cmax = 0.0;
        for (int i = 0; i < m; ++i) {
            residual = std::max(residual, std::abs(Ac[i] - lambda * c[i]));
            cmax = std::max(cmax, std::abs(c[i]));
        }
        if (residual <= tol * cmax && std::abs(lambda - lambda_prev) <= 1e-13 * (1.0 + std::abs(lambda))) {
            EigenPair out{std::move(c), lambda};
            return out;
        }
        lambda_prev = lambda;
        // shifted step keeps every component strictly positive
        double sum = 0.0;
        for (int i = 0; i < m; ++i) {
            c[i] = Ac[i] + R * c[i];
            sum += c[i];
        }
        for (int i = 0; i < m; ++i) c[i] /= sum;
    }
    throw NonConvergence("power iteration did not reach the requested residual");
}

}  // namespace meandesc::spectral
