#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>

#include "ritz/bounds.hpp"

namespace ritz {

// One seeded random (A, V) instance plus its extraction report; the unit
// of work for the verification suite.
struct VerifyInstance {
    CsrMatrix A;
    ComplexDenseMatrix V;
    ExtractionReport report;
    ComplexDenseMatrix M;  // gram matrix at the selected theta
};

// Deterministic random square complex matrix with ~density fraction of
// entries present (diagonal always kept).
CsrMatrix random_sparse(std::size_t n, double density, std::mt19937_64& rng);

ComplexDenseMatrix random_orthonormal(std::size_t n, std::size_t k, std::mt19937_64& rng);

VerifyInstance make_instance(std::size_t n, std::size_t k, std::uint64_t seed);

struct VerifySummary {
    std::size_t instances = 0;
    std::size_t passed = 0;
    std::size_t skipped = 0;      // fully-flagged instances (vacuous pass)
    std::string first_failure;    // "instance 12: E8" style, empty when ok
    double min_tau = 0;
    double max_tau = 0;
    std::vector<std::pair<std::string, std::size_t>> failures_by_check;
};

// Runs identity_suite + alpha_roots over `instances` seeded instances.
// Worker count is capped by RITZ_EXTRACT_THREADS; results are ordered by
// instance index regardless of scheduling.
VerifySummary run_verify(std::size_t n, std::size_t k, std::size_t instances,
                         std::uint64_t seed, std::ostream* log = nullptr);

}  // namespace ritz
