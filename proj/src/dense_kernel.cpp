#include "ritz/dense_kernel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace ritz {

bool all_finite(const ComplexVector& v) {
    return v.allFinite();
}

bool all_finite(const ComplexDenseMatrix& m) {
    return m.allFinite();
}

void phase_normalize(ComplexVector& v) {
    if (v.size() == 0) return;
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const Complex pivot = v[imax];
    const double mag = std::abs(pivot);
    if (mag > 0) v *= std::conj(pivot) / mag;
}

HermitianEigResult hermitian_eig(const ComplexDenseMatrix& M) {
    if (!all_finite(M)) throw NonFiniteError("hermitian_eig: non-finite input");
    if (M.rows() != M.cols()) throw DimensionMismatchError("hermitian_eig: not square");
    const double scale = M.norm();
    const double asym = (M - M.adjoint()).norm();
    if (scale > 0 && asym > 1e-10 * scale)
        throw DimensionMismatchError("hermitian_eig: input not Hermitian");
    const ComplexDenseMatrix S = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexDenseMatrix> es(S);
    if (es.info() != Eigen::Success)
        throw NoConvergenceError("hermitian_eig: eigensolver did not converge");
    HermitianEigResult res;
    res.eigenvalues = es.eigenvalues();
    res.eigenvectors = es.eigenvectors();
    for (Eigen::Index j = 0; j < res.eigenvectors.cols(); ++j) {
        ComplexVector col = res.eigenvectors.col(j);
        phase_normalize(col);
        res.eigenvectors.col(j) = col;
    }
    return res;
}

std::vector<std::pair<Complex, ComplexVector>> general_eig_small(const ComplexDenseMatrix& H) {
    if (!all_finite(H)) throw NonFiniteError("general_eig_small: non-finite input");
    if (H.rows() != H.cols()) throw DimensionMismatchError("general_eig_small: not square");
    if (H.rows() > 512) throw TooLargeError("general_eig_small: k > 512");
    Eigen::ComplexEigenSolver<ComplexDenseMatrix> es(H);
    if (es.info() != Eigen::Success)
        throw NoConvergenceError("general_eig_small: QR iteration did not converge");
    std::vector<std::pair<Complex, ComplexVector>> pairs;
    pairs.reserve(static_cast<std::size_t>(H.rows()));
    for (Eigen::Index j = 0; j < H.rows(); ++j) {
        ComplexVector y = es.eigenvectors().col(j);
        y.normalize();
        phase_normalize(y);
        pairs.emplace_back(es.eigenvalues()[j], std::move(y));
    }
    return pairs;
}

ComplexVector solve_hpd(const ComplexDenseMatrix& M, const ComplexVector& b) {
    if (!all_finite(M) || !all_finite(b)) throw NonFiniteError("solve_hpd: non-finite input");
    if (M.rows() != M.cols() || M.rows() != b.size())
        throw DimensionMismatchError("solve_hpd: dimension mismatch");
    const ComplexDenseMatrix S = 0.5 * (M + M.adjoint());
    const double scale = S.norm();
    Eigen::LLT<ComplexDenseMatrix> llt(S);
    if (llt.info() != Eigen::Success)
        throw NearSingularError("solve_hpd: matrix not numerically positive definite");
    const auto& L = llt.matrixLLT();
    double min_pivot = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < L.rows(); ++i)
        min_pivot = std::min(min_pivot, std::abs(L(i, i)));
    if (min_pivot * min_pivot <= kRankTol * scale)
        throw NearSingularError("solve_hpd: pivot below rank tolerance");
    return llt.solve(b);
}

ComplexDenseMatrix orthonormalize(const ComplexDenseMatrix& W) {
    if (!all_finite(W)) throw NonFiniteError("orthonormalize: non-finite input");
    const double scale = W.norm();
    if (scale == 0) throw ZeroRankError("orthonormalize: all columns zero");
    // MGS with a second pass per column; rank-deficient directions dropped.
    ComplexDenseMatrix V(W.rows(), W.cols());
    Eigen::Index rank = 0;
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
        ComplexVector v = W.col(j);
        const double norm_in = v.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < rank; ++i)
                v -= V.col(i) * (V.col(i).dot(v));
        const double norm_out = v.norm();
        if (norm_out <= std::max(kRankTol * scale, 1e-12 * norm_in)) continue;
        V.col(rank++) = v / norm_out;
    }
    if (rank == 0) throw ZeroRankError("orthonormalize: zero numerical rank");
    return V.leftCols(rank);
}

std::pair<double, ComplexVector> smallest_singular_right(const ComplexDenseMatrix& C) {
    if (!all_finite(C)) throw NonFiniteError("smallest_singular_right: non-finite input");
    if (C.rows() < C.cols() || C.cols() < 1)
        throw DimensionMismatchError("smallest_singular_right: need n >= k >= 1");
    const ComplexDenseMatrix G = C.adjoint() * C;
    HermitianEigResult eig = hermitian_eig(G);
    double sigma_sq = std::max(eig.eigenvalues[0], 0.0);
    ComplexVector z = eig.eigenvectors.col(0);
    // One inverse-iteration step on C*C recovers accuracy lost to squaring.
    const double gscale = G.norm();
    const double shift = sigma_sq - 1e-14 * gscale;
    Eigen::LDLT<ComplexDenseMatrix> ldlt(G - shift * ComplexDenseMatrix::Identity(G.rows(), G.cols()));
    if (ldlt.info() == Eigen::Success) {
        ComplexVector z1 = ldlt.solve(z);
        const double n1 = z1.norm();
        if (std::isfinite(n1) && n1 > 0) {
            z1 /= n1;
            const double refined = std::real(z1.dot(G * z1));
            if (std::isfinite(refined) && refined >= 0 && refined <= sigma_sq * (1 + 1e-10) + 1e-14 * gscale) {
                sigma_sq = std::max(refined, 0.0);
                z = z1;
            }
        }
    }
    phase_normalize(z);
    return {(C * z).squaredNorm(), z};
}

}  // namespace ritz
