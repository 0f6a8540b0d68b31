#include "doctest.h"
#include "oracles.hpp"
#include "ritz/extraction.hpp"
#include "ritz/verify.hpp"

#include <random>

using namespace ritz;

namespace {

CsrMatrix random_dense_as_csr(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0, 1);
    ComplexDenseMatrix D(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < D.rows(); ++i)
        for (Eigen::Index j = 0; j < D.cols(); ++j) D(i, j) = Complex(gauss(rng), gauss(rng));
    return CsrMatrix::from_dense(D);
}

}  // namespace

TEST_CASE("gram_matrix trivial cases") {
    std::mt19937_64 rng(101);
    CsrMatrix I = CsrMatrix::identity(8);
    ComplexDenseMatrix V = random_orthonormal(8, 3, rng);
    CHECK((gram_matrix(I, V, Complex(0, 0)) - ComplexDenseMatrix::Identity(3, 3)).norm() < 1e-12);
    CHECK(gram_matrix(I, V, Complex(1, 0)).norm() < 1e-24);
}

TEST_CASE("gram_matrix matches dense oracle") {
    std::mt19937_64 rng(103);
    CsrMatrix A = random_dense_as_csr(20, rng);
    ComplexDenseMatrix V = random_orthonormal(20, 4, rng);
    const Complex theta(0.3, 1.1);
    ComplexDenseMatrix M = gram_matrix(A, V, theta);

    ComplexDenseMatrix C = to_dense(A) * V - theta * V;
    ComplexDenseMatrix ref = oracle::dense_matmul(C.adjoint(), C);
    CHECK((M - ref).norm() <= 1e-12 * ref.norm());

    // y*My = ||(A - theta I)Vy||^2 for random y
    for (int t = 0; t < 10; ++t) {
        ComplexVector y = oracle::random_unit(4, rng);
        const double quad = std::real(y.dot(M * y));
        const double direct = oracle::dense_matvec(C, y).squaredNorm();
        CHECK(quad == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("rayleigh_ritz on a diagonal matrix with coordinate basis") {
    ComplexVector d(6);
    d << 5, 1, 4, 2, 6, 3;
    CsrMatrix A = CsrMatrix::diagonal(d);
    ComplexDenseMatrix V = ComplexDenseMatrix::Identity(6, 3);  // spans e1,e2,e3
    auto pairs = rayleigh_ritz(A, V, SelectionRule::Rightmost);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].theta.real() == doctest::Approx(5.0));
    CHECK(pairs[1].theta.real() == doctest::Approx(4.0));
    CHECK(pairs[2].theta.real() == doctest::Approx(1.0));
}

TEST_CASE("rayleigh_ritz with a unitary basis recovers the full spectrum") {
    std::mt19937_64 rng(107);
    ComplexVector d(5);
    d << Complex(1, 0), Complex(2, 1), Complex(-1, 2), Complex(0, 0), Complex(3, -1);
    CsrMatrix A = CsrMatrix::diagonal(d);
    ComplexDenseMatrix V = random_orthonormal(5, 5, rng);
    auto pairs = rayleigh_ritz(A, V, SelectionRule::LargestMagnitude);
    std::vector<double> got, want;
    for (auto& p : pairs) got.push_back(std::abs(p.theta));
    for (int i = 0; i < 5; ++i) want.push_back(std::abs(d[i]));
    std::sort(want.rbegin(), want.rend());
    for (int i = 0; i < 5; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
}

TEST_CASE("rayleigh_ritz Galerkin condition and Rayleigh quotient") {
    std::mt19937_64 rng(109);
    CsrMatrix A = random_dense_as_csr(30, rng);
    ComplexDenseMatrix V = random_orthonormal(30, 6, rng);
    ComplexDenseMatrix D = to_dense(A);
    const double scale = D.norm();
    for (const auto& p : rayleigh_ritz(A, V, SelectionRule::Rightmost)) {
        CHECK(p.y.norm() == doctest::Approx(1.0).epsilon(1e-12));
        ComplexVector res = oracle::dense_matvec(D, p.ritz_vector) - p.theta * p.ritz_vector;
        CHECK((V.adjoint() * res).norm() <= 1e-10 * scale);
        // theta is the Rayleigh quotient of the Ritz vector
        const Complex rq = p.ritz_vector.dot(oracle::dense_matvec(D, p.ritz_vector));
        CHECK(std::abs(rq - p.theta) <= 1e-12 * scale);
    }
}

TEST_CASE("refined_vector exact eigenpair and k=1") {
    ComplexVector d(6);
    d << 1, 2, 3, 4, 5, 6;
    CsrMatrix A = CsrMatrix::diagonal(d);
    // span of two exact eigenvectors: theta = 2 is exact
    ComplexDenseMatrix V = ComplexDenseMatrix::Identity(6, 2);
    auto refined = refined_vector(A, V, Complex(2, 0));
    CHECK(refined.sigma_sq <= 1e-20 * 36);

    // k = 1: z_r = y (the single basis coefficient), sigma^2 = residual
    std::mt19937_64 rng(113);
    ComplexDenseMatrix V1(6, 1);
    V1.col(0) = oracle::random_unit(6, rng);
    auto pairs = rayleigh_ritz(A, V1, SelectionRule::Rightmost);
    auto r1 = refined_vector(A, V1, pairs[0].theta);
    CHECK(r1.sigma_sq == doctest::Approx(pairs[0].residual_norm_sq).epsilon(1e-10));
    CHECK(std::abs(r1.z_r[0]) == doctest::Approx(1.0));
}

TEST_CASE("refined_vector matches dense eigensolver oracle") {
    std::mt19937_64 rng(127);
    for (int trial = 0; trial < 5; ++trial) {
        CsrMatrix A = random_dense_as_csr(25, rng);
        ComplexDenseMatrix V = random_orthonormal(25, 5, rng);
        auto pairs = rayleigh_ritz(A, V, SelectionRule::Rightmost);
        const Complex theta = pairs[0].theta;
        auto refined = refined_vector(A, V, theta);

        ComplexDenseMatrix C = to_dense(A) * V - theta * V;
        const double ref = oracle::smallest_eig_bisect(oracle::dense_matmul(C.adjoint(), C));
        CHECK(refined.sigma_sq == doctest::Approx(ref).epsilon(1e-10));
        CHECK((C * refined.z_r).squaredNorm() ==
              doctest::Approx(refined.sigma_sq).epsilon(1e-10));
    }
}

TEST_CASE("lls_least_squares k=1 forces zero correction") {
    std::mt19937_64 rng(131);
    ComplexVector d(5);
    d << 1, 2, 3, 4, 5;
    CsrMatrix A = CsrMatrix::diagonal(d);
    ComplexDenseMatrix V(5, 1);
    V.col(0) = oracle::random_unit(5, rng);
    auto report = extract(A, V, {SelectionRule::Rightmost, true});
    CHECK(report.flags.has(ReportFlag::ZeroCorrection));
    CHECK(report.lls.K == doctest::Approx(report.ritz.residual_norm_sq).epsilon(1e-10));
    CHECK(report.bound_lower == doctest::Approx(1.0));
    CHECK(report.bound_upper == doctest::Approx(1.0));
}

TEST_CASE("lls_least_squares eq19 consistency for K") {
    std::mt19937_64 rng(137);
    for (int trial = 0; trial < 10; ++trial) {
        CsrMatrix A = random_dense_as_csr(30, rng);
        ComplexDenseMatrix V = random_orthonormal(30, 6, rng);
        auto pairs = rayleigh_ritz(A, V, SelectionRule::Rightmost);
        const RitzPair& p = pairs[0];
        ComplexDenseMatrix M = gram_matrix(A, V, p.theta);
        ReportFlags flags;
        LlsResult lls = lls_least_squares(M, p, flags);
        REQUIRE(!flags.any());

        // K = ||(A-theta I)Vy||^2 + K <(A-theta I)V(I-yy*)x, (A-theta I)Vy>
        ComplexDenseMatrix C = to_dense(A) * V - p.theta * V;
        ComplexVector px = lls.x - p.y * (p.y.dot(lls.x));
        const Complex inner = oracle::dense_matvec(C, p.y).dot(oracle::dense_matvec(C, px));
        const Complex rhs = Complex(p.residual_norm_sq, 0) + lls.K * inner;
        CHECK(std::abs(lls.K - rhs) <= 1e-9 * p.residual_norm_sq);

        // K cross-check through m* M m
        const double quad = std::real(lls.m.dot(M * lls.m));
        CHECK(lls.K == doctest::Approx(quad).epsilon(1e-10));
    }
}

TEST_CASE("lls_least_squares m matches the dense constrained LS oracle") {
    std::mt19937_64 rng(139);
    for (int trial = 0; trial < 10; ++trial) {
        CsrMatrix A = random_dense_as_csr(25, rng);
        ComplexDenseMatrix V = random_orthonormal(25, 5, rng);
        auto pairs = rayleigh_ritz(A, V, SelectionRule::Rightmost);
        ComplexDenseMatrix M = gram_matrix(A, V, pairs[0].theta);
        ReportFlags flags;
        LlsResult lls = lls_least_squares(M, pairs[0], flags);
        REQUIRE(!flags.any());

        ComplexDenseMatrix C = to_dense(A) * V - pairs[0].theta * V;
        ComplexVector m_ref = oracle::constrained_ls_minimizer(C, pairs[0].y);
        const double K_ref = oracle::dense_matvec(C, m_ref).squaredNorm();
        CHECK(std::abs(lls.K - K_ref) <= 1e-8 * pairs[0].residual_norm_sq);
        CHECK((lls.m - m_ref).norm() <= 1e-7 * m_ref.norm());

        // m - y is orthogonal to y
        CHECK(std::abs(pairs[0].y.dot(lls.m - pairs[0].y)) <= 1e-12);
    }
}

TEST_CASE("lls_line_search isotropic and decoupled special cases") {
    // M = I: every Rayleigh quotient is 1
    {
        ComplexDenseMatrix M = ComplexDenseMatrix::Identity(2, 2);
        LlsResult lls;
        ComplexVector y(2), w(2);
        y << 1, 0;
        w << 0, 1;
        lls.znorm_sq = 1.0;
        lls.w = w;
        lls.m = y + w;
        lls.K = 1.0;
        ReportFlags flags;
        lls_line_search(M, lls, flags);
        CHECK(lls.rho_s == doctest::Approx(1.0));
    }
    // M = diag(4,1): minimizer is e2, orthogonal to y
    {
        ComplexDenseMatrix M = ComplexDenseMatrix::Zero(2, 2);
        M(0, 0) = 4;
        M(1, 1) = 1;
        LlsResult lls;
        ComplexVector y(2), w(2);
        y << 1, 0;
        w << 0, 1;
        lls.znorm_sq = 1.0;
        lls.w = w;
        lls.m = y + w;
        lls.K = 1.0;
        ReportFlags flags;
        lls_line_search(M, lls, flags);
        CHECK(flags.has(ReportFlag::TauDegenerate));
        CHECK((lls.s - lls.m).norm() == 0.0);
    }
}

TEST_CASE("lls_line_search beats a 1-D scan of the search line") {
    std::mt19937_64 rng(149);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    for (int trial = 0; trial < 5; ++trial) {
        CsrMatrix A = random_dense_as_csr(30, rng);
        ComplexDenseMatrix V = random_orthonormal(30, 6, rng);
        auto report = extract(A, V, {SelectionRule::Rightmost, false});
        REQUIRE(!report.flags.any());

        ComplexDenseMatrix M = gram_matrix(A, V, report.ritz.theta);
        const ComplexVector& y = report.ritz.y;
        const ComplexVector p = report.lls.m - y;  // (I-yy*)z
        for (int t = 0; t < 1000; ++t) {
            ComplexVector cand = y + unif(rng) * p;
            const double rq = std::real(cand.dot(M * cand)) / cand.squaredNorm();
            CHECK(report.lls.rho_s <= rq + 1e-10 * report.ritz.residual_norm_sq);
        }
    }
}

TEST_CASE("tau_crosscheck closed forms") {
    ComplexVector y(3);
    y << 1, 0, 0;
    CHECK(tau_crosscheck(y, y) == doctest::Approx(0.0));

    ComplexVector s(3);
    s << std::sqrt(0.5), std::sqrt(0.5), 0;
    CHECK(tau_crosscheck(s, y) == doctest::Approx(1.0));

    ComplexVector s2(3);
    s2 << 0, 1, 0;
    CHECK_THROWS_AS(tau_crosscheck(s2, y), DegenerateTauError);
}

TEST_CASE("residual_bounds arithmetic") {
    auto b = residual_bounds(1.0, 0.0, 2.0);
    CHECK(b.L == doctest::Approx(1.0));
    CHECK(b.U == doctest::Approx(1.0));
    CHECK(b.sigma_pred_lo == doctest::Approx(0.0));
    CHECK(b.sigma_pred_hi == doctest::Approx(2.0));

    auto b2 = residual_bounds(2.0, 1.0, 1.0);
    CHECK(b2.L == doctest::Approx(3.0));
    CHECK(b2.U == doctest::Approx(57.0));
    CHECK(b2.sigma_pred_lo <= b2.sigma_pred_hi);
}

TEST_CASE("extract on an exact invariant subspace flags ExactPair") {
    ComplexVector d(8);
    d << 1, 2, 3, 4, 5, 6, 7, 8;
    CsrMatrix A = CsrMatrix::diagonal(d);
    ComplexDenseMatrix V = ComplexDenseMatrix::Identity(8, 3);
    auto report = extract(A, V, {SelectionRule::Rightmost, true});
    CHECK(report.flags.has(ReportFlag::ExactPair));
    CHECK(report.refined->sigma_sq <= 1e-18);
}

TEST_CASE("extract random instance satisfies the report invariants") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        VerifyInstance inst = make_instance(60, 8, seed);
        const auto& rep = inst.report;
        REQUIRE(!rep.flags.any());
        const double r2 = rep.ritz.residual_norm_sq;
        const double eps = 1e-10 * r2;
        const double sigma_sq = rep.refined->sigma_sq;

        CHECK(rep.lls.tau >= 1.0 - 1e-10);
        CHECK(sigma_sq <= rep.lls.rho_s + eps);
        CHECK(rep.lls.rho_s <= rep.lls.K / rep.lls.m.squaredNorm() + eps);
        CHECK(rep.lls.K <= r2 + eps);
        CHECK(rep.lls.s.squaredNorm() ==
              doctest::Approx(1.0 + rep.lls.tau * rep.lls.tau * rep.lls.znorm_sq)
                  .epsilon(1e-12));

        const double ratio = rep.lls.K / sigma_sq;
        CHECK(rep.bound_lower <= ratio * (1 + 1e-9));
        CHECK(ratio <= rep.bound_upper * (1 + 1e-9));
        CHECK(rep.sigma_pred_lo * (1 - 1e-9) <= sigma_sq);
        CHECK(sigma_sq <= rep.sigma_pred_hi * (1 + 1e-9));
    }
}
