#pragma once

#include <utility>
#include <vector>

#include "ritz/types.hpp"

namespace ritz {

// Tolerance scale for rank / singularity decisions, relative to the
// Frobenius norm of the operator involved.
inline constexpr double kRankTol = 1e-13;

struct HermitianEigResult {
    Eigen::VectorXd eigenvalues;      // ascending
    ComplexDenseMatrix eigenvectors;  // column i <-> eigenvalue i, orthonormal
};

// Full spectrum of a Hermitian matrix. Input is symmetrized internally;
// asymmetry beyond 1e-12 relative is rejected.
HermitianEigResult hermitian_eig(const ComplexDenseMatrix& M);

// Right eigenpairs (theta, y) of a general small square matrix, ||y|| = 1.
std::vector<std::pair<Complex, ComplexVector>> general_eig_small(const ComplexDenseMatrix& H);

// Solve M x = b with M Hermitian positive definite. Throws NearSingularError
// when the pivot scale falls below kRankTol * ||M||_F; for the extraction
// pipeline that signals an exact eigenpair, not a failure.
ComplexVector solve_hpd(const ComplexDenseMatrix& M, const ComplexVector& b);

// Orthonormal basis of span(W); rank-deficient columns are dropped.
ComplexDenseMatrix orthonormalize(const ComplexDenseMatrix& W);

// Smallest squared singular value of C and its right singular vector.
// Computed from the k x k Gram matrix C*C (k is small here), then refined
// with one inverse-iteration step on C*C.
std::pair<double, ComplexVector> smallest_singular_right(const ComplexDenseMatrix& C);

}  // namespace ritz
