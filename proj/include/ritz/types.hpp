#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ritz {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexDenseMatrix = Eigen::MatrixXcd;  // column-major

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonFiniteError : Error { using Error::Error; };
struct NoConvergenceError : Error { using Error::Error; };
struct NearSingularError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct ZeroRankError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct TooLargeError : Error { using Error::Error; };
struct BadTraceError : Error { using Error::Error; };
struct DegenerateTauError : Error { using Error::Error; };
struct PoleAtTauError : Error { using Error::Error; };

bool all_finite(const ComplexVector& v);
bool all_finite(const ComplexDenseMatrix& m);

// Scale so the largest-magnitude entry is real positive; keeps reported
// vectors reproducible across runs.
void phase_normalize(ComplexVector& v);

}  // namespace ritz
