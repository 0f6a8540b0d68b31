#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ritz/extraction.hpp"

namespace ritz {

struct ArnoldiFactorization {
    ComplexDenseMatrix V;     // n x (k+1), orthonormal columns
    ComplexDenseMatrix Hbar;  // (k+1) x k, upper Hessenberg
    std::size_t k = 0;
    bool breakdown = false;   // invariant subspace found

    static ArnoldiFactorization start(const ComplexVector& v0);
    ComplexDenseMatrix basis() const { return V.leftCols(k); }
};

// Modified Gram-Schmidt Arnoldi with one conditional reorthogonalization
// pass. Stops early on breakdown (new direction below 1e-14 of its norm).
void arnoldi_expand(const CsrMatrix& A, ArnoldiFactorization& fact, std::size_t steps);

struct GmresResult {
    ComplexVector x;
    std::vector<double> residual_history;  // ||b - Op x_j||, non-increasing
};

using LinearOperator = std::function<ComplexVector(const ComplexVector&)>;

// Un-restarted GMRES with zero initial guess; breakdown is treated as an
// exact solve.
GmresResult gmres(const LinearOperator& apply, const ComplexVector& b, std::size_t max_iters);

enum class SolverMethod { Jd, Arnoldi };
enum class InitialVector { Uniform, Ones, File };

struct SolverConfig {
    SolverMethod method = SolverMethod::Jd;
    SelectionRule target = SelectionRule::Rightmost;
    std::size_t subspace_max = 200;  // JD search space cap, no restart
    std::size_t restart_len = 10;    // Arnoldi Krylov size per restart
    std::size_t gmres_iters = 20;
    double tol = 1e-8;               // on the LLS residual sqrt(rho_s)
    std::size_t max_outer = 200;
    InitialVector initial = InitialVector::Uniform;
    std::string initial_file;
    bool compute_refined_every_step = true;
    std::uint64_t seed = 0;
};

struct IterationRecord {
    std::size_t iter = 0;
    Complex theta;
    double r2_y = 0, K = 0, rho_s = 0, sigma_sq = 0;
    double tau = 0, znorm_sq = 0;
    double L = 0, U = 0, ratio = 0;  // ratio = K / sigma^2
    double sigma_pred_lo = 0, sigma_pred_hi = 0;
    double alpha3 = 0;
    ReportFlags flags;
    double lls_residual = 0;   // sqrt(rho_s)
    double ritz_residual = 0;  // sqrt(r2_y)
};

struct SolverResult {
    bool converged = false;
    Complex theta;
    ComplexVector eigenvector;
    std::vector<IterationRecord> trace;
};

ComplexVector make_initial_vector(const SolverConfig& cfg, std::size_t n);

// Jacobi-Davidson without restart: per outer step runs the extraction on
// the current basis, uses the LLS vector in the correction equation and
// expands the basis with the projected GMRES solution.
SolverResult jd_outer(const CsrMatrix& A, const SolverConfig& cfg);

// Explicitly restarted Arnoldi; the restart vector is the LLS vector.
SolverResult restarted_arnoldi(const CsrMatrix& A, const SolverConfig& cfg);

SolverResult run_solver(const CsrMatrix& A, const SolverConfig& cfg);

IterationRecord make_record(std::size_t iter, const ExtractionReport& report);

}  // namespace ritz
