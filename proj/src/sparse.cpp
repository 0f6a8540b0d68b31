#include "ritz/sparse.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace ritz {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

MatrixMarketHeader parse_banner(const std::string& line) {
    std::istringstream iss(line);
    std::string banner, object, format, field, symmetry;
    iss >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket")
        throw ParseError("BadBanner: file does not start with %%MatrixMarket");
    if (lower(object) != "matrix")
        throw ParseError("BadBanner: unsupported object '" + object + "'");
    MatrixMarketHeader h;
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format == "coordinate") h.format = MmFormat::Coordinate;
    else if (format == "array") h.format = MmFormat::Array;
    else throw ParseError("BadBanner: unsupported format '" + format + "'");
    if (field == "real") h.field = MmField::Real;
    else if (field == "complex") h.field = MmField::Complex;
    else if (field == "integer") h.field = MmField::Integer;
    else if (field == "pattern") h.field = MmField::Pattern;
    else throw ParseError("UnsupportedField: '" + field + "'");
    if (symmetry == "general") h.symmetry = MmSymmetry::General;
    else if (symmetry == "symmetric") h.symmetry = MmSymmetry::Symmetric;
    else if (symmetry == "skew-symmetric") h.symmetry = MmSymmetry::SkewSymmetric;
    else if (symmetry == "hermitian") h.symmetry = MmSymmetry::Hermitian;
    else throw ParseError("BadBanner: unsupported symmetry '" + symmetry + "'");
    if (h.field == MmField::Pattern && h.format == MmFormat::Array)
        throw ParseError("UnsupportedField: pattern array");
    return h;
}

bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '%') continue;
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
        if (!blank) return true;
    }
    return false;
}

Complex read_value(std::istringstream& iss, MmField field) {
    switch (field) {
        case MmField::Pattern:
            return Complex(1.0, 0.0);
        case MmField::Complex: {
            double re, im;
            if (!(iss >> re >> im)) throw ParseError("BadDimensions: malformed complex entry");
            return Complex(re, im);
        }
        default: {
            double re;
            if (!(iss >> re)) throw ParseError("BadDimensions: malformed entry value");
            return Complex(re, 0.0);
        }
    }
}

}  // namespace

CsrMatrix CsrMatrix::from_triplets(std::size_t n,
                                   std::vector<std::tuple<std::size_t, std::size_t, Complex>> entries,
                                   bool sum_duplicates) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) {
                  return std::tie(std::get<0>(a), std::get<1>(a)) <
                         std::tie(std::get<0>(b), std::get<1>(b));
              });
    CsrMatrix A;
    A.n = n;
    A.row_offsets.assign(n + 1, 0);
    bool have_prev = false;
    std::size_t prev_i = 0, prev_j = 0;
    for (const auto& [i, j, v] : entries) {
        if (i >= n || j >= n) throw ParseError("IndexOutOfRange: entry outside matrix");
        if (have_prev && i == prev_i && j == prev_j) {
            if (!sum_duplicates) throw ParseError("duplicate entry in strict mode");
            A.values.back() += v;
            continue;
        }
        A.col_indices.push_back(j);
        A.values.push_back(v);
        A.row_offsets[i + 1] = A.col_indices.size();
        have_prev = true;
        prev_i = i;
        prev_j = j;
    }
    for (std::size_t i = 1; i <= n; ++i)
        A.row_offsets[i] = std::max(A.row_offsets[i], A.row_offsets[i - 1]);
    return A;
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
    std::vector<std::tuple<std::size_t, std::size_t, Complex>> t;
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) t.emplace_back(i, i, Complex(1, 0));
    return from_triplets(n, std::move(t));
}

CsrMatrix CsrMatrix::diagonal(const ComplexVector& d) {
    std::vector<std::tuple<std::size_t, std::size_t, Complex>> t;
    const auto n = static_cast<std::size_t>(d.size());
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) t.emplace_back(i, i, d[static_cast<Eigen::Index>(i)]);
    return from_triplets(n, std::move(t));
}

CsrMatrix CsrMatrix::from_dense(const ComplexDenseMatrix& dense, double drop_tol) {
    if (dense.rows() != dense.cols()) throw ParseError("NonSquare: dense input not square");
    std::vector<std::tuple<std::size_t, std::size_t, Complex>> t;
    for (Eigen::Index i = 0; i < dense.rows(); ++i)
        for (Eigen::Index j = 0; j < dense.cols(); ++j)
            if (std::abs(dense(i, j)) > drop_tol)
                t.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j), dense(i, j));
    return from_triplets(static_cast<std::size_t>(dense.rows()), std::move(t));
}

CsrMatrix parse_matrix_market(std::istream& in, bool strict_duplicates) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("BadBanner: empty input");
    const MatrixMarketHeader h = parse_banner(line);

    if (!next_data_line(in, line)) throw ParseError("BadDimensions: missing size line");
    std::istringstream size_line(line);
    long long rows = 0, cols = 0, nnz = 0;
    if (h.format == MmFormat::Coordinate) {
        if (!(size_line >> rows >> cols >> nnz) || rows <= 0 || cols <= 0 || nnz < 0)
            throw ParseError("BadDimensions: bad coordinate size line");
    } else {
        if (!(size_line >> rows >> cols) || rows <= 0 || cols <= 0)
            throw ParseError("BadDimensions: bad array size line");
    }
    if (rows != cols) throw ParseError("NonSquare: matrix must be square");
    const auto n = static_cast<std::size_t>(rows);

    const bool mirrored = h.symmetry != MmSymmetry::General;
    const bool skew = h.symmetry == MmSymmetry::SkewSymmetric;
    if (h.format == MmFormat::Array) {
        if (skew) nnz = rows * (rows - 1) / 2;          // strictly lower
        else if (mirrored) nnz = rows * (rows + 1) / 2; // lower triangle
        else nnz = rows * cols;
    }
    // column-major walk for array files; symmetric variants carry only the
    // (strictly) lower triangle of each column
    long long arr_i = skew ? 1 : 0, arr_j = 0;
    std::vector<std::tuple<std::size_t, std::size_t, Complex>> entries;
    entries.reserve(static_cast<std::size_t>(nnz) * (mirrored ? 2 : 1));

    for (long long e = 0; e < nnz; ++e) {
        if (!next_data_line(in, line))
            throw ParseError("BadDimensions: fewer entries than declared");
        std::istringstream iss(line);
        long long fi, fj;
        if (h.format == MmFormat::Coordinate) {
            if (!(iss >> fi >> fj)) throw ParseError("BadDimensions: malformed entry line");
            if (fi < 1 || fj < 1 || fi > rows || fj > cols)
                throw ParseError("IndexOutOfRange: entry index outside matrix");
        } else {
            fi = arr_i + 1;
            fj = arr_j + 1;
            if (++arr_i >= rows) {
                ++arr_j;
                arr_i = mirrored ? (skew ? arr_j + 1 : arr_j) : 0;
            }
        }
        const Complex v = read_value(iss, h.field);
        const auto i = static_cast<std::size_t>(fi - 1);
        const auto j = static_cast<std::size_t>(fj - 1);
        entries.emplace_back(i, j, v);
        if (mirrored && i != j) {
            switch (h.symmetry) {
                case MmSymmetry::Symmetric: entries.emplace_back(j, i, v); break;
                case MmSymmetry::SkewSymmetric: entries.emplace_back(j, i, -v); break;
                case MmSymmetry::Hermitian: entries.emplace_back(j, i, std::conj(v)); break;
                default: break;
            }
        }
    }
    return CsrMatrix::from_triplets(n, std::move(entries), !strict_duplicates);
}

CsrMatrix load_matrix_market(const std::string& path, bool strict_duplicates) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read matrix: " + path);
    return parse_matrix_market(in, strict_duplicates);
}

void write_matrix_market(std::ostream& out, const CsrMatrix& A) {
    out << "%%MatrixMarket matrix coordinate complex general\n";
    out << A.n << " " << A.n << " " << A.nnz() << "\n";
    char buf[96];
    for (std::size_t i = 0; i < A.n; ++i) {
        for (std::size_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p) {
            std::snprintf(buf, sizeof buf, "%zu %zu %.17g %.17g\n", i + 1,
                          A.col_indices[p] + 1, A.values[p].real(), A.values[p].imag());
            out << buf;
        }
    }
}

ComplexVector matvec(const CsrMatrix& A, const ComplexVector& x) {
    if (static_cast<std::size_t>(x.size()) != A.n)
        throw DimensionMismatchError("matvec: vector length != n");
    ComplexVector y = ComplexVector::Zero(x.size());
    for (std::size_t i = 0; i < A.n; ++i) {
        Complex acc(0, 0);
        for (std::size_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p)
            acc += A.values[p] * x[static_cast<Eigen::Index>(A.col_indices[p])];
        y[static_cast<Eigen::Index>(i)] = acc;
    }
    return y;
}

ComplexDenseMatrix shifted_block_apply(const CsrMatrix& A, Complex theta,
                                       const ComplexDenseMatrix& V) {
    if (static_cast<std::size_t>(V.rows()) != A.n)
        throw DimensionMismatchError("shifted_block_apply: row count != n");
    ComplexDenseMatrix W(V.rows(), V.cols());
    for (Eigen::Index j = 0; j < V.cols(); ++j)
        W.col(j) = matvec(A, V.col(j)) - theta * V.col(j);
    return W;
}

ComplexDenseMatrix to_dense(const CsrMatrix& A) {
    if (A.n > 512) throw TooLargeError("to_dense: n > 512");
    ComplexDenseMatrix D = ComplexDenseMatrix::Zero(static_cast<Eigen::Index>(A.n),
                                                    static_cast<Eigen::Index>(A.n));
    for (std::size_t i = 0; i < A.n; ++i)
        for (std::size_t p = A.row_offsets[i]; p < A.row_offsets[i + 1]; ++p)
            D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(A.col_indices[p])) = A.values[p];
    return D;
}

}  // namespace ritz
