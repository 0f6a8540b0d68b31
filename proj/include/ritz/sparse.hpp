#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ritz/types.hpp"

namespace ritz {

// Square sparse matrix in compressed-row storage. Immutable after
// construction; col indices strictly increasing within each row.
struct CsrMatrix {
    std::size_t n = 0;
    std::vector<std::size_t> row_offsets;  // length n+1
    std::vector<std::size_t> col_indices;
    std::vector<Complex> values;

    static CsrMatrix from_triplets(std::size_t n,
                                   std::vector<std::tuple<std::size_t, std::size_t, Complex>> entries,
                                   bool sum_duplicates = true);
    static CsrMatrix identity(std::size_t n);
    static CsrMatrix diagonal(const ComplexVector& d);
    static CsrMatrix from_dense(const ComplexDenseMatrix& dense, double drop_tol = 0.0);

    std::size_t nnz() const { return values.size(); }
};

enum class MmFormat { Coordinate, Array };
enum class MmField { Real, Complex, Integer, Pattern };
enum class MmSymmetry { General, Symmetric, SkewSymmetric, Hermitian };

struct MatrixMarketHeader {
    MmFormat format = MmFormat::Coordinate;
    MmField field = MmField::Real;
    MmSymmetry symmetry = MmSymmetry::General;
};

// Matrix Market reader for square matrices. Symmetry is expanded to
// explicit storage, pattern entries get value 1, duplicates are summed
// (or rejected when strict_duplicates is set).
CsrMatrix parse_matrix_market(std::istream& in, bool strict_duplicates = false);
CsrMatrix load_matrix_market(const std::string& path, bool strict_duplicates = false);

// Coordinate/general/complex writer; round-trips through the parser.
void write_matrix_market(std::ostream& out, const CsrMatrix& A);

ComplexVector matvec(const CsrMatrix& A, const ComplexVector& x);

// Column j of the result is A v_j - theta v_j.
ComplexDenseMatrix shifted_block_apply(const CsrMatrix& A, Complex theta, const ComplexDenseMatrix& V);

ComplexDenseMatrix to_dense(const CsrMatrix& A);  // n <= 512

}  // namespace ritz
