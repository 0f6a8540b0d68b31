#pragma once

#include <optional>
#include <vector>

#include "ritz/dense_kernel.hpp"
#include "ritz/sparse.hpp"

namespace ritz {

enum class SelectionRule { Rightmost, LargestMagnitude };

enum class ReportFlag : unsigned {
    ExactPair = 1u << 0,      // gram matrix numerically singular at (theta, Vy)
    ZeroCorrection = 1u << 1, // (I-yy*)z vanished, m = y
    TauDegenerate = 1u << 2,  // line-search minimizer orthogonal to y
    OrthogonalZr = 1u << 3,   // refined and Ritz coefficient vectors orthogonal
    BoundGap = 1u << 4,       // K/sigma^2 outside [L, U]: the sectional division
                              // hypothesis behind the tau - 1/14 cap fails, or
                              // sigma^2 sits at the Gram-matrix roundoff floor
};

struct ReportFlags {
    unsigned bits = 0;
    bool has(ReportFlag f) const { return bits & static_cast<unsigned>(f); }
    void set(ReportFlag f) { bits |= static_cast<unsigned>(f); }
    bool any() const { return bits != 0; }
};

std::string to_string(const ReportFlags& flags);

struct RitzPair {
    Complex theta;
    ComplexVector y;            // unit coefficient vector, length k
    ComplexVector ritz_vector;  // Vy
    double residual_norm_sq;    // ||(A - theta I) V y||^2
};

struct LlsResult {
    ComplexVector x;       // solution of M x = y
    double K = 0;          // ||(A - theta I) V m||^2
    ComplexVector w;       // unit (I-yy*)z / ||(I-yy*)z||, empty when ZeroCorrection
    double znorm_sq = 0;   // ||(I-yy*)z||^2
    ComplexVector m;       // y + (I-yy*)z
    double tau = 1.0;
    double tau_imag_residue = 0;  // discarded imaginary part of the raw step
    ComplexVector s;       // y + tau (I-yy*)z
    double rho_s = 0;      // ||(A - theta I) V s||^2 / ||s||^2
    ComplexVector lls_vector;  // Vs / ||Vs||
};

struct RefinedResult {
    double sigma_sq = 0;
    ComplexVector z_r;            // unit right singular coefficient vector
    ComplexVector refined_vector; // V z_r
};

struct ExtractionReport {
    RitzPair ritz;
    LlsResult lls;
    std::optional<RefinedResult> refined;
    double bound_lower = 1;   // L = 1 + tau * znorm_sq
    double bound_upper = 1;   // U = 14 tau^2 * znorm_sq + 1
    double sigma_pred_lo = 0;
    double sigma_pred_hi = 0;
    ReportFlags flags;
};

// M = V*(A-theta I)*(A-theta I)V, Hermitian PSD; y*My = ||(A-theta I)Vy||^2.
ComplexDenseMatrix gram_matrix(const CsrMatrix& A, const ComplexDenseMatrix& V, Complex theta);

// Ritz pairs of V*AV sorted by the selection rule.
std::vector<RitzPair> rayleigh_ritz(const CsrMatrix& A, const ComplexDenseMatrix& V,
                                    SelectionRule select);

RefinedResult refined_vector(const CsrMatrix& A, const ComplexDenseMatrix& V, Complex theta);

// Least-squares stage: solves M x = y, K = 1/(y*x), m = y + K (I-yy*)x.
// Sets ExactPair on a singular gram matrix and ZeroCorrection when the
// correction direction vanishes; fills x, K, w, znorm_sq, m.
LlsResult lls_least_squares(const ComplexDenseMatrix& M, const RitzPair& pair, ReportFlags& flags);

// Line-search stage over span{y, w}: 2x2 projected eigenproblem gives
// (tau, s, rho_s). Sets TauDegenerate and falls back to s = m when the
// minimizer is orthogonal to y.
void lls_line_search(const ComplexDenseMatrix& M, LlsResult& lls, ReportFlags& flags);

// tau^2 * znorm_sq recovered from the unit LLS vector alone; cross-checks
// the line-search value.
double tau_crosscheck(const ComplexVector& s_unit, const ComplexVector& y);

struct ResidualBounds {
    double L, U, sigma_pred_lo, sigma_pred_hi;
};
ResidualBounds residual_bounds(double tau, double znorm_sq, double residual_norm_sq_y);

struct ExtractOptions {
    SelectionRule select = SelectionRule::Rightmost;
    bool compute_refined = true;
};

// Full pipeline for the selected Ritz value: Rayleigh-Ritz, least squares,
// line search, bounds, and (optionally) the refined vector.
ExtractionReport extract(const CsrMatrix& A, const ComplexDenseMatrix& V,
                         const ExtractOptions& opts = {});

}  // namespace ritz
