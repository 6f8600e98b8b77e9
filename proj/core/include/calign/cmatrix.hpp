#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "calign/errors.hpp"

namespace calign {

using cplx = std::complex<double>;

class RealMatrix;

/// Dense complex matrix, row-major. The carrier for every spectral object in
/// the library (weights W, degrees D, Laplacians L, embeddings Y, Grams K).
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, cplx(0.0, 0.0)) {}

    /// Construct from row-major entries. Rejects NaN/Inf.
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const cplx> diag);
    static CMatrix diagonal(std::span<const double> diag);
    static CMatrix from_real(const RealMatrix& re);
    static CMatrix from_parts(const RealMatrix& re, const RealMatrix& im);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return entries_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::span<const cplx> data() const { return entries_; }

    CMatrix operator+(const CMatrix& o) const;
    CMatrix operator-(const CMatrix& o) const;
    CMatrix operator*(const CMatrix& o) const;   // matrix product
    CMatrix operator*(cplx s) const;             // scalar
    friend CMatrix operator*(cplx s, const CMatrix& m) { return m * s; }

    CMatrix transpose() const;
    CMatrix conjugate() const;
    CMatrix adjoint() const;                     // conjugate transpose

    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    RealMatrix real_part() const;                // entrywise Re
    RealMatrix imag_part() const;                // entrywise Im

    std::vector<cplx> col(std::size_t j) const;
    std::vector<cplx> row(std::size_t i) const;
    void set_col(std::size_t j, std::span<const cplx> v);
    CMatrix columns(std::size_t first, std::size_t count) const;

    /// Multiply by a vector: this * x.
    std::vector<cplx> apply(std::span<const cplx> x) const;

    bool all_finite() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> entries_;
};

/// Dense real matrix, row-major. Used for datasets, real weight matrices and
/// the real halves of embeddings.
class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}
    RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::span<const double> data() const { return entries_; }
    std::span<const double> row_span(std::size_t i) const {
        return std::span<const double>(entries_).subspan(i * cols_, cols_);
    }

    RealMatrix operator+(const RealMatrix& o) const;
    RealMatrix operator-(const RealMatrix& o) const;
    RealMatrix operator*(double s) const;

    double frobenius_norm() const;
    bool all_finite() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> entries_;
};

/// Squared Euclidean distance between rows i and j of a real matrix.
double row_dist_sq(const RealMatrix& m, std::size_t i, std::size_t j);

// Complex vector helpers (standard inner product (x,y) = sum x_j conj(y_j)).
cplx dot(std::span<const cplx> x, std::span<const cplx> y);
double norm2(std::span<const cplx> x);

/// The Hermitian components of a square matrix: re = (A+A*)/2, im = (A-A*)/(2i),
/// so that A = re + i*im with both parts Hermitian.
struct HermitianPair {
    CMatrix re_part;
    CMatrix im_part;
};

HermitianPair hermitian_components(const CMatrix& a);

/// True iff ||A A* - A* A||_F <= tol * ||A||_F^2. The zero matrix is normal.
bool is_normal(const CMatrix& a, double tol);

/// Max |a_ij - conj(a_ji)| relative to ||A||_F; 0 for exactly Hermitian input.
double hermitian_residual(const CMatrix& a);

} // namespace calign
