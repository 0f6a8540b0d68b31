#include "ritz/extraction.hpp"

#include <algorithm>
#include <cmath>

namespace ritz {

std::string to_string(const ReportFlags& flags) {
    std::string out;
    auto add = [&](ReportFlag f, const char* name) {
        if (flags.has(f)) {
            if (!out.empty()) out += '|';
            out += name;
        }
    };
    add(ReportFlag::ExactPair, "ExactPair");
    add(ReportFlag::ZeroCorrection, "ZeroCorrection");
    add(ReportFlag::TauDegenerate, "TauDegenerate");
    add(ReportFlag::OrthogonalZr, "OrthogonalZr");
    add(ReportFlag::BoundGap, "BoundGap");
    if (out.empty()) out = "-";
    return out;
}

ComplexDenseMatrix gram_matrix(const CsrMatrix& A, const ComplexDenseMatrix& V, Complex theta) {
    const ComplexDenseMatrix W = shifted_block_apply(A, theta, V);
    ComplexDenseMatrix M = W.adjoint() * W;
    M = 0.5 * (M + M.adjoint()).eval();
    return M;
}

std::vector<RitzPair> rayleigh_ritz(const CsrMatrix& A, const ComplexDenseMatrix& V,
                                    SelectionRule select) {
    if (static_cast<std::size_t>(V.rows()) != A.n)
        throw DimensionMismatchError("rayleigh_ritz: basis rows != n");
    const Eigen::Index k = V.cols();
    ComplexDenseMatrix AV(V.rows(), k);
    for (Eigen::Index j = 0; j < k; ++j) AV.col(j) = matvec(A, V.col(j));
    const ComplexDenseMatrix H = V.adjoint() * AV;
    auto eig = general_eig_small(H);

    std::vector<RitzPair> pairs;
    pairs.reserve(eig.size());
    for (auto& [theta, y] : eig) {
        RitzPair p;
        p.theta = theta;
        p.ritz_vector = V * y;
        p.residual_norm_sq = (AV * y - theta * (V * y)).squaredNorm();
        p.y = std::move(y);
        pairs.push_back(std::move(p));
    }
    auto key = [select](const RitzPair& p) {
        return select == SelectionRule::Rightmost ? p.theta.real() : std::abs(p.theta);
    };
    std::stable_sort(pairs.begin(), pairs.end(),
                     [&](const RitzPair& a, const RitzPair& b) { return key(a) > key(b); });
    return pairs;
}

RefinedResult refined_vector(const CsrMatrix& A, const ComplexDenseMatrix& V, Complex theta) {
    const ComplexDenseMatrix W = shifted_block_apply(A, theta, V);
    auto [sigma_sq, z] = smallest_singular_right(W);
    RefinedResult res;
    res.sigma_sq = sigma_sq;
    res.refined_vector = V * z;
    res.z_r = std::move(z);
    return res;
}

LlsResult lls_least_squares(const ComplexDenseMatrix& M, const RitzPair& pair, ReportFlags& flags) {
    LlsResult lls;
    const ComplexVector& y = pair.y;
    ComplexVector x;
    try {
        x = solve_hpd(M, y);
    } catch (const NearSingularError&) {
        // (theta, Vy) is numerically an exact eigenpair
        flags.set(ReportFlag::ExactPair);
        lls.m = y;
        lls.s = y;
        lls.K = pair.residual_norm_sq;
        lls.rho_s = pair.residual_norm_sq;
        return lls;
    }
    lls.x = x;

    const Complex yx = y.dot(x);  // y* x, real positive for HPD M
    const double K = 1.0 / yx.real();
    lls.K = K;

    ComplexVector corr = K * (x - y * (y.dot(x)));  // K (I - yy*) x = (I-yy*)z
    lls.znorm_sq = corr.squaredNorm();
    lls.m = y + corr;
    if (std::sqrt(lls.znorm_sq) / K <= 1e-14 || lls.znorm_sq == 0.0) {
        flags.set(ReportFlag::ZeroCorrection);
        lls.znorm_sq = 0;
        lls.m = y;
        lls.s = y;
        lls.tau = 1.0;
        lls.rho_s = pair.residual_norm_sq;
        return lls;
    }
    lls.w = corr / std::sqrt(lls.znorm_sq);
    return lls;
}

void lls_line_search(const ComplexDenseMatrix& M, LlsResult& lls, ReportFlags& flags) {
    if (flags.has(ReportFlag::ExactPair) || flags.has(ReportFlag::ZeroCorrection)) return;
    const Eigen::Index k = M.rows();
    ComplexDenseMatrix B(k, 2);
    // the 2x2 line-search problem: columns y and w of the search plane
    // (lls.m = y + (I-yy*)z, so y = m - sqrt(znorm_sq) * w)
    const ComplexVector y = lls.m - std::sqrt(lls.znorm_sq) * lls.w;
    B.col(0) = y;
    B.col(1) = lls.w;
    ComplexDenseMatrix G = B.adjoint() * M * B;
    G = 0.5 * (G + G.adjoint()).eval();

    HermitianEigResult eig = hermitian_eig(G);
    const double rho_min = eig.eigenvalues[0];
    ComplexVector c = eig.eigenvectors.col(0);

    const double zn = std::sqrt(lls.znorm_sq);
    if (std::abs(c[0]) <= 1e-12) {
        // minimizer orthogonal to y; fall back to the least-squares vector
        flags.set(ReportFlag::TauDegenerate);
        lls.tau = 1.0;
        lls.s = lls.m;
        lls.rho_s = std::real(lls.m.dot(M * lls.m)) / lls.m.squaredNorm();
        return;
    }
    // phase so that the y coefficient is real positive
    c *= std::conj(c[0]) / std::abs(c[0]);
    const Complex step = c[1] / c[0];
    lls.tau_imag_residue = std::abs(step.imag()) / std::max(1.0, std::abs(step));
    lls.tau = step.real() / zn;
    lls.s = y + lls.tau * zn * lls.w;  // = y + tau (I-yy*)z
    lls.rho_s = rho_min;
}

double tau_crosscheck(const ComplexVector& s_unit, const ComplexVector& y) {
    const ComplexVector proj = s_unit - y * (y.dot(s_unit));
    const double p = proj.squaredNorm();
    if (p >= 1.0 - 1e-14)
        throw DegenerateTauError("tau_crosscheck: ||(I-yy*)s||^2 at 1, ratio undefined");
    return p / (1.0 - p);
}

ResidualBounds residual_bounds(double tau, double znorm_sq, double residual_norm_sq_y) {
    ResidualBounds b;
    b.L = 1.0 + tau * znorm_sq;
    b.U = 14.0 * tau * tau * znorm_sq + 1.0;
    b.sigma_pred_lo = (tau - 1.0) * residual_norm_sq_y / (tau * b.U);
    b.sigma_pred_hi = residual_norm_sq_y / b.L;
    return b;
}

ExtractionReport extract(const CsrMatrix& A, const ComplexDenseMatrix& V,
                         const ExtractOptions& opts) {
    ExtractionReport report;
    auto pairs = rayleigh_ritz(A, V, opts.select);
    report.ritz = pairs.front();

    const ComplexDenseMatrix M = gram_matrix(A, V, report.ritz.theta);
    report.lls = lls_least_squares(M, report.ritz, report.flags);
    lls_line_search(M, report.lls, report.flags);
    report.lls.lls_vector = V * report.lls.s;
    report.lls.lls_vector.normalize();

    const ResidualBounds b =
        residual_bounds(report.lls.tau, report.lls.znorm_sq, report.ritz.residual_norm_sq);
    report.bound_lower = b.L;
    report.bound_upper = b.U;
    report.sigma_pred_lo = b.sigma_pred_lo;
    report.sigma_pred_hi = b.sigma_pred_hi;

    if (opts.compute_refined) {
        report.refined = refined_vector(A, V, report.ritz.theta);
        const Complex zr_y = report.refined->z_r.dot(report.ritz.y);
        if (std::abs(zr_y) <= 1e-10) report.flags.set(ReportFlag::OrthogonalZr);

        const double sigma_sq = report.refined->sigma_sq;
        if (!report.flags.has(ReportFlag::ExactPair) &&
            !report.flags.has(ReportFlag::ZeroCorrection) &&
            !report.flags.has(ReportFlag::TauDegenerate) && sigma_sq > 0) {
            const double ratio = report.lls.K / sigma_sq;
            if (ratio < b.L * (1 - 1e-9) || ratio > b.U * (1 + 1e-9))
                report.flags.set(ReportFlag::BoundGap);
        }
    }
    return report;
}

}  // namespace ritz
