#pragma once

// The two-diagonal matrix A(u, v): w-recursion criterion, characteristic
// polynomial recursion, Sturm-bisection eigenvalues of the symmetrized
// tridiagonal, the sufficiency inequalities, and the positive eigenpair.

#include <vector>

#include "meandesc/errors.hpp"

namespace meandesc::spectral {

// (n+1) x (n+1) matrix with superdiagonal u and subdiagonal v, zero elsewhere;
// all entries positive.
struct TwoDiagonalMatrix {
    std::vector<double> u;
    std::vector<double> v;

    TwoDiagonalMatrix(std::vector<double> u_, std::vector<double> v_);

    int n() const { return static_cast<int>(u.size()); }
    int size() const { return n() + 1; }

    std::vector<double> apply(const std::vector<double>& x) const;
};

// w_1..w_n from w_k = w_{k-1} - u_k v_k w_{k-2}, seeded w_{-1} = w_0 = 1.
std::vector<double> w_sequence(const TwoDiagonalMatrix& A);

// P_{A_k}(lambda) with P_0 = lambda, P_1 = lambda^2 - u_1 v_1 and the
// three-term recursion; 0 <= k <= n.
double char_poly(const TwoDiagonalMatrix& A, int k, double lambda);

// Number of eigenvalues strictly below lambda (Sturm pivot count on the
// symmetrized tridiagonal).
int sturm_count_below(const TwoDiagonalMatrix& A, double lambda);

// All n+1 eigenvalues, each bracketed to width <= tol, ascending.
std::vector<double> eigenvalues(const TwoDiagonalMatrix& A, double tol = 1e-12);

struct SpectralReport {
    std::vector<double> eigenvalues;
    std::vector<double> w;
    bool below_one_by_w = false;
    bool below_one_by_eig = false;
    // max eigenvalue within boundary_tol of 1: the cross-check between the two
    // verdicts is indeterminate at float resolution.
    bool near_boundary = false;
};

SpectralReport all_below_one(const TwoDiagonalMatrix& A, double eig_tol = 1e-12,
                             double boundary_tol = 1e-6);

// v_1 <= 1, max_i(u_i + v_{i+1}) <= 1, u_n < 1.
bool sufficiency_check(const TwoDiagonalMatrix& A);

struct EigenPair {
    std::vector<double> c;  // positive components, normalized to sum 1
    double lambda = 0.0;    // positive; equals the maximal eigenvalue
};

// Power iteration on A + R*I with simplex renormalization; residual
// ||A c - lambda c||_inf <= tol * ||c||_inf on return.
EigenPair positive_eigenvector(const TwoDiagonalMatrix& A, double tol = 1e-11,
                               long max_iter = 2000000);

}  // namespace meandesc::spectral
