#include "ritz/krylov.hpp"

#include <cmath>
#include <fstream>

#include "ritz/bounds.hpp"

namespace ritz {

ArnoldiFactorization ArnoldiFactorization::start(const ComplexVector& v0) {
    const double norm = v0.norm();
    if (norm <= 0 || !all_finite(v0))
        throw NonFiniteError("arnoldi: bad start vector");
    ArnoldiFactorization fact;
    fact.V = ComplexDenseMatrix(v0.size(), 1);
    fact.V.col(0) = v0 / norm;
    fact.Hbar = ComplexDenseMatrix(1, 0);
    fact.k = 0;
    return fact;
}

void arnoldi_expand(const CsrMatrix& A, ArnoldiFactorization& fact, std::size_t steps) {
    for (std::size_t step = 0; step < steps && !fact.breakdown; ++step) {
        const auto k = static_cast<Eigen::Index>(fact.k);
        ComplexVector w = matvec(A, fact.V.col(k));
        const double norm_in = w.norm();

        ComplexVector h = ComplexVector::Zero(k + 2);
        for (Eigen::Index i = 0; i <= k; ++i) {
            const Complex hij = fact.V.col(i).dot(w);
            h[i] = hij;
            w -= hij * fact.V.col(i);
        }
        // "twice is enough": one extra MGS pass when cancellation ate more
        // than half of the norm
        if (w.norm() < 0.5 * norm_in) {
            for (Eigen::Index i = 0; i <= k; ++i) {
                const Complex corr = fact.V.col(i).dot(w);
                h[i] += corr;
                w -= corr * fact.V.col(i);
            }
        }
        const double beta = w.norm();
        h[k + 1] = beta;

        ComplexDenseMatrix Hnew = ComplexDenseMatrix::Zero(k + 2, k + 1);
        Hnew.topLeftCorner(k + 1, k) = fact.Hbar;
        Hnew.col(k).head(k + 2) = h;

        if (beta <= 1e-14 * std::max(norm_in, 1.0)) {
            // invariant subspace: A V = V H exactly, beta row dropped
            fact.breakdown = true;
            fact.Hbar = Hnew.topRows(k + 1);
            fact.k = static_cast<std::size_t>(k + 1);
            return;
        }

        ComplexDenseMatrix Vnew(fact.V.rows(), k + 2);
        Vnew.leftCols(k + 1) = fact.V;
        Vnew.col(k + 1) = w / beta;
        fact.V = Vnew;
        fact.Hbar = Hnew;
        fact.k = static_cast<std::size_t>(k + 1);
    }
}

GmresResult gmres(const LinearOperator& apply, const ComplexVector& b, std::size_t max_iters) {
    GmresResult res;
    const double beta0 = b.norm();
    res.residual_history.push_back(beta0);
    if (beta0 == 0 || max_iters == 0) {
        res.x = ComplexVector::Zero(b.size());
        return res;
    }

    const Eigen::Index n = b.size();
    const auto m = static_cast<Eigen::Index>(max_iters);
    ComplexDenseMatrix Q(n, m + 1);
    ComplexDenseMatrix H = ComplexDenseMatrix::Zero(m + 1, m);
    Q.col(0) = b / beta0;

    // Givens rotations applied progressively to H; g tracks the rotated rhs
    ComplexVector g = ComplexVector::Zero(m + 1);
    g[0] = beta0;
    std::vector<Complex> cs(max_iters), sn(max_iters);

    Eigen::Index j = 0;
    for (; j < m; ++j) {
        ComplexVector w = apply(Q.col(j));
        const double norm_in = w.norm();
        for (Eigen::Index i = 0; i <= j; ++i) {
            H(i, j) = Q.col(i).dot(w);
            w -= H(i, j) * Q.col(i);
        }
        if (w.norm() < 0.5 * norm_in) {
            for (Eigen::Index i = 0; i <= j; ++i) {
                const Complex corr = Q.col(i).dot(w);
                H(i, j) += corr;
                w -= corr * Q.col(i);
            }
        }
        const double beta = w.norm();
        H(j + 1, j) = beta;

        // previous rotations
        for (Eigen::Index i = 0; i < j; ++i) {
            const Complex t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
            H(i + 1, j) = -std::conj(sn[i]) * H(i, j) + std::conj(cs[i]) * H(i + 1, j);
            H(i, j) = t;
        }
        // new rotation zeroing H(j+1, j)
        const double denom = std::hypot(std::abs(H(j, j)), beta);
        if (denom == 0) {
            cs[j] = 1;
            sn[j] = 0;
        } else {
            cs[j] = std::conj(H(j, j)) / denom;
            sn[j] = beta / denom;
        }
        const Complex t = cs[j] * H(j, j) + sn[j] * H(j + 1, j);
        H(j + 1, j) = 0;
        H(j, j) = t;
        g[j + 1] = -std::conj(sn[j]) * g[j];
        g[j] = cs[j] * g[j];
        res.residual_history.push_back(std::abs(g[j + 1]));

        if (beta <= 1e-14 * std::max(norm_in, 1.0)) {
            // lucky breakdown: the Krylov space is invariant, solve exactly
            ++j;
            break;
        }
        Q.col(j + 1) = w / beta;
    }

    // back substitution on the rotated triangular system
    ComplexVector ycoef = ComplexVector::Zero(j);
    for (Eigen::Index i = j - 1; i >= 0; --i) {
        Complex acc = g[i];
        for (Eigen::Index l = i + 1; l < j; ++l) acc -= H(i, l) * ycoef[l];
        ycoef[i] = acc / H(i, i);
    }
    res.x = Q.leftCols(j) * ycoef;
    return res;
}

ComplexVector make_initial_vector(const SolverConfig& cfg, std::size_t n) {
    const auto ni = static_cast<Eigen::Index>(n);
    switch (cfg.initial) {
        case InitialVector::Uniform:
            return ComplexVector::Constant(ni, Complex(1.0 / std::sqrt(double(n)), 0.0));
        case InitialVector::Ones: {
            ComplexVector v = ComplexVector::Constant(ni, Complex(1.0, 0.0));
            return v / v.norm();
        }
        case InitialVector::File: {
            std::ifstream in(cfg.initial_file);
            if (!in) throw ParseError("cannot read initial vector: " + cfg.initial_file);
            ComplexVector v(ni);
            for (Eigen::Index i = 0; i < ni; ++i) {
                double re, im = 0;
                if (!(in >> re)) throw ParseError("initial vector file too short");
                in >> im;
                in.clear();
                v[i] = Complex(re, im);
            }
            return v / v.norm();
        }
    }
    throw Error("unreachable");
}

IterationRecord make_record(std::size_t iter, const ExtractionReport& report) {
    IterationRecord rec;
    rec.iter = iter;
    rec.theta = report.ritz.theta;
    rec.r2_y = report.ritz.residual_norm_sq;
    rec.K = report.lls.K;
    rec.rho_s = report.lls.rho_s;
    rec.sigma_sq = report.refined ? report.refined->sigma_sq : 0.0;
    rec.tau = report.lls.tau;
    rec.znorm_sq = report.lls.znorm_sq;
    rec.L = report.bound_lower;
    rec.U = report.bound_upper;
    rec.ratio = (report.refined && report.refined->sigma_sq > 0)
                    ? report.lls.K / report.refined->sigma_sq
                    : 0.0;
    rec.sigma_pred_lo = report.sigma_pred_lo;
    rec.sigma_pred_hi = report.sigma_pred_hi;
    rec.flags = report.flags;
    rec.lls_residual = std::sqrt(std::max(report.lls.rho_s, 0.0));
    rec.ritz_residual = std::sqrt(std::max(report.ritz.residual_norm_sq, 0.0));
    if (report.refined && !report.flags.any() && report.lls.tau > 1.0 + 1e-10 &&
        report.lls.znorm_sq > 0 && report.lls.K > report.refined->sigma_sq) {
        try {
            rec.alpha3 = alpha_roots(AlphaContext::from_report(report)).alpha3;
        } catch (const DegenerateTauError&) {
            rec.alpha3 = 0.0;
        }
    }
    return rec;
}

SolverResult jd_outer(const CsrMatrix& A, const SolverConfig& cfg) {
    SolverResult result;
    ComplexVector v0 = make_initial_vector(cfg, A.n);
    ComplexDenseMatrix V = v0 / v0.norm();

    ExtractOptions opts;
    opts.select = cfg.target;
    opts.compute_refined = cfg.compute_refined_every_step;

    for (std::size_t outer = 1; outer <= cfg.max_outer; ++outer) {
        ExtractionReport report = extract(A, V, opts);

        const Complex theta = report.ritz.theta;
        ComplexVector u = V * report.lls.s;
        u.normalize();
        ComplexVector r = matvec(A, u) - theta * u;

        IterationRecord rec = make_record(outer, report);
        // the direct n-space residual equals sqrt(rho_s) but is not limited
        // by the Gram-matrix roundoff floor
        rec.lls_residual = r.norm();
        result.trace.push_back(rec);

        result.theta = theta;
        result.eigenvector = u;
        if (result.trace.back().lls_residual <= cfg.tol) {
            result.converged = true;
            break;
        }
        if (static_cast<std::size_t>(V.cols()) >= cfg.subspace_max) break;

        // correction equation (I-uu*)(A - theta I)(I-uu*) t = -(I-uu*) r
        LinearOperator op = [&](const ComplexVector& x) {
            ComplexVector px = x - u * u.dot(x);
            ComplexVector ax = matvec(A, px) - theta * px;
            return ComplexVector(ax - u * u.dot(ax));
        };
        ComplexVector rhs = -(r - u * u.dot(r));
        ComplexVector t = gmres(op, rhs, cfg.gmres_iters).x;
        t -= u * u.dot(t);

        // expand the search basis
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < V.cols(); ++i) t -= V.col(i) * V.col(i).dot(t);
        const double tnorm = t.norm();
        if (tnorm <= 1e-14) break;  // stagnation: nothing new to add
        V.conservativeResize(Eigen::NoChange, V.cols() + 1);
        V.col(V.cols() - 1) = t / tnorm;
    }
    return result;
}

SolverResult restarted_arnoldi(const CsrMatrix& A, const SolverConfig& cfg) {
    SolverResult result;
    ComplexVector start = make_initial_vector(cfg, A.n);

    ExtractOptions opts;
    opts.select = cfg.target;
    opts.compute_refined = cfg.compute_refined_every_step;

    for (std::size_t restart = 1; restart <= cfg.max_outer; ++restart) {
        ArnoldiFactorization fact = ArnoldiFactorization::start(start);
        arnoldi_expand(A, fact, cfg.restart_len);
        ComplexDenseMatrix V = fact.breakdown ? orthonormalize(fact.basis()) : fact.basis();

        ExtractionReport report = extract(A, V, opts);

        ComplexVector u = V * report.lls.s;
        u.normalize();
        ComplexVector r = matvec(A, u) - report.ritz.theta * u;
        IterationRecord rec = make_record(restart, report);
        rec.lls_residual = r.norm();
        result.trace.push_back(rec);

        result.theta = report.ritz.theta;
        result.eigenvector = u;
        if (result.trace.back().lls_residual <= cfg.tol) {
            result.converged = true;
            break;
        }
        if (fact.breakdown && result.trace.back().lls_residual <= 1e-12) break;
        start = u;
    }
    return result;
}

SolverResult run_solver(const CsrMatrix& A, const SolverConfig& cfg) {
    return cfg.method == SolverMethod::Jd ? jd_outer(A, cfg) : restarted_arnoldi(A, cfg);
}

}  // namespace ritz
