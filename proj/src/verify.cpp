#include "ritz/verify.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <ostream>
#include <thread>

namespace ritz {

CsrMatrix random_sparse(std::size_t n, double density, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::tuple<std::size_t, std::size_t, Complex>> t;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const bool keep = i == j || unit(rng) < density;
            const Complex v(gauss(rng), gauss(rng));  // draw even when dropped: layout-independent stream
            if (keep) t.emplace_back(i, j, v);
        }
    }
    return CsrMatrix::from_triplets(n, std::move(t));
}

ComplexDenseMatrix random_orthonormal(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexDenseMatrix W(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (Eigen::Index j = 0; j < W.cols(); ++j)
        for (Eigen::Index i = 0; i < W.rows(); ++i)
            W(i, j) = Complex(gauss(rng), gauss(rng));
    return orthonormalize(W);
}

VerifyInstance make_instance(std::size_t n, std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    VerifyInstance inst;
    inst.A = random_sparse(n, 0.25, rng);
    inst.V = random_orthonormal(n, k, rng);
    inst.report = extract(inst.A, inst.V, {SelectionRule::Rightmost, /*compute_refined=*/true});
    inst.M = gram_matrix(inst.A, inst.V, inst.report.ritz.theta);
    return inst;
}

VerifySummary run_verify(std::size_t n, std::size_t k, std::size_t instances,
                         std::uint64_t seed, std::ostream* log) {
    VerifySummary summary;
    summary.instances = instances;
    summary.min_tau = std::numeric_limits<double>::infinity();
    summary.max_tau = -std::numeric_limits<double>::infinity();

    struct InstanceResult {
        std::vector<CheckResult> checks;
        double tau = 0;
        bool skipped = false;
    };
    std::vector<InstanceResult> results(instances);

    std::size_t workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (const char* env = std::getenv("RITZ_EXTRACT_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) workers = std::min<std::size_t>(workers, static_cast<std::size_t>(cap));
    }
    workers = std::min(workers, std::max<std::size_t>(instances, 1));

    auto work = [&](std::size_t w) {
        for (std::size_t i = w; i < instances; i += workers) {
            VerifyInstance inst = make_instance(n, k, seed * 1000003ull + i);
            results[i].checks = identity_suite(inst.report, inst.M);
            results[i].tau = inst.report.lls.tau;
            results[i].skipped = inst.report.flags.any();
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    std::map<std::string, std::size_t> fail_counts;
    for (std::size_t i = 0; i < instances; ++i) {
        const auto& res = results[i];
        summary.min_tau = std::min(summary.min_tau, res.tau);
        summary.max_tau = std::max(summary.max_tau, res.tau);
        if (res.skipped) ++summary.skipped;
        bool ok = true;
        for (const auto& check : res.checks) {
            if (check.skipped || !check.gating) continue;
            if (!check.pass) {
                ok = false;
                ++fail_counts[check.name];
                if (summary.first_failure.empty())
                    summary.first_failure =
                        "instance " + std::to_string(i) + ": " + check.name;
                if (log)
                    *log << "FAIL instance " << i << " check " << check.name
                         << " scaled residual " << check.residual << "\n";
            }
        }
        if (ok) ++summary.passed;
    }
    for (const auto& [name, count] : fail_counts)
        summary.failures_by_check.emplace_back(name, count);

    if (log) {
        *log << "instances: " << summary.instances << "  passed: " << summary.passed
             << "  skipped(vacuous): " << summary.skipped << "\n"
             << "tau range: [" << summary.min_tau << ", " << summary.max_tau << "]\n";
        for (const auto& [name, count] : summary.failures_by_check)
            *log << "  failing check " << name << ": " << count << " instances\n";
    }
    return summary;
}

}  // namespace ritz
