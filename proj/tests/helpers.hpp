#pragma once

// Test-only utilities: an independent dense eigensolver oracle, random convex
// functions, and table-backed extended functions.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "meandesc/convexity.hpp"
#include "meandesc/sampler.hpp"
#include "meandesc/xreal.hpp"

namespace testutil {

// Classical Jacobi rotations; independent of the Sturm bisection path.
inline std::vector<double> dense_symmetric_eigenvalues(std::vector<std::vector<double>> A) {
    const int n = static_cast<int>(A.size());
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) off += A[i][j] * A[i][j];
        }
        if (off < 1e-26) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(A[p][q]) < 1e-300) continue;
                const double tau = (A[q][q] - A[p][p]) / (2.0 * A[p][q]);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = A[k][p];
                    const double akq = A[k][q];
                    A[k][p] = c * akp - s * akq;
                    A[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = A[p][k];
                    const double aqk = A[q][k];
                    A[p][k] = c * apk - s * aqk;
                    A[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = A[i][i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

inline std::vector<std::vector<double>> two_diagonal_dense(const std::vector<double>& u,
                                                           const std::vector<double>& v,
                                                           bool symmetrized) {
    const int m = static_cast<int>(u.size()) + 1;
    std::vector<std::vector<double>> A(m, std::vector<double>(m, 0.0));
    for (int k = 0; k + 1 < m; ++k) {
        if (symmetrized) {
            const double c = std::sqrt(u[k] * v[k]);
            A[k][k + 1] = c;
            A[k + 1][k] = c;
        } else {
            A[k][k + 1] = u[k];
            A[k + 1][k] = v[k];
        }
    }
    return A;
}

// a*t^2 + b*t + c with a bounded away from zero: convex with a margin.
struct RandomConvex {
    double a, b, c;
    double operator()(double t) const { return a * t * t + b * t + c; }
};

inline RandomConvex random_convex(meandesc::Rng& rng) {
    return RandomConvex{0.1 + 2.0 * rng.uniform(), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
}

// Extended function given by a value table over a fixed point set.
inline std::function<meandesc::XReal(double)> table_fn(std::map<double, meandesc::XReal> table) {
    return [table = std::move(table)](double t) {
        const auto it = table.find(t);
        if (it == table.end()) throw meandesc::DomainViolation("table function probed off its support");
        return it->second;
    };
}

}  // namespace testutil
