#include "calign/cmatrix.hpp"

#include <algorithm>
#include <cmath>

namespace calign {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidArgument(std::string(op) + ": shape mismatch");
}

} // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        throw InvalidArgument("CMatrix: entries.size() != rows*cols");
    if (!all_finite())
        throw InvalidArgument("CMatrix: non-finite entry");
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> diag) {
    CMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

CMatrix CMatrix::diagonal(std::span<const double> diag) {
    CMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

CMatrix CMatrix::from_real(const RealMatrix& re) {
    CMatrix m(re.rows(), re.cols());
    for (std::size_t i = 0; i < re.rows(); ++i)
        for (std::size_t j = 0; j < re.cols(); ++j) m(i, j) = re(i, j);
    return m;
}

CMatrix CMatrix::from_parts(const RealMatrix& re, const RealMatrix& im) {
    if (re.rows() != im.rows() || re.cols() != im.cols())
        throw InvalidArgument("from_parts: shape mismatch");
    CMatrix m(re.rows(), re.cols());
    for (std::size_t i = 0; i < re.rows(); ++i)
        for (std::size_t j = 0; j < re.cols(); ++j) m(i, j) = cplx(re(i, j), im(i, j));
    return m;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
    require_same_shape(*this, o, "operator+");
    CMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] + o.entries_[k];
    return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
    require_same_shape(*this, o, "operator-");
    CMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] - o.entries_[k];
    return r;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
    if (cols_ != o.rows_) throw InvalidArgument("operator*: inner dimensions disagree");
    CMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const cplx aik = (*this)(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    }
    return r;
}

CMatrix CMatrix::operator*(cplx s) const {
    CMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] * s;
    return r;
}

CMatrix CMatrix::transpose() const {
    CMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

CMatrix CMatrix::conjugate() const {
    CMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = std::conj(entries_[k]);
    return r;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

cplx CMatrix::trace() const {
    if (!is_square()) throw InvalidArgument("trace: non-square matrix");
    cplx t(0.0, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& e : entries_) s += std::norm(e);
    return std::sqrt(s);
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

RealMatrix CMatrix::real_part() const {
    RealMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).real();
    return r;
}

RealMatrix CMatrix::imag_part() const {
    RealMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).imag();
    return r;
}

std::vector<cplx> CMatrix::col(std::size_t j) const {
    std::vector<cplx> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

std::vector<cplx> CMatrix::row(std::size_t i) const {
    std::vector<cplx> v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
}

void CMatrix::set_col(std::size_t j, std::span<const cplx> v) {
    if (v.size() != rows_) throw InvalidArgument("set_col: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

CMatrix CMatrix::columns(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw InvalidArgument("columns: range out of bounds");
    CMatrix r(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < count; ++j) r(i, j) = (*this)(i, first + j);
    return r;
}

std::vector<cplx> CMatrix::apply(std::span<const cplx> x) const {
    if (x.size() != cols_) throw InvalidArgument("apply: length mismatch");
    std::vector<cplx> y(rows_, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
}

bool CMatrix::all_finite() const {
    for (const cplx& e : entries_)
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    return true;
}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        throw InvalidArgument("RealMatrix: entries.size() != rows*cols");
    if (!all_finite())
        throw InvalidArgument("RealMatrix: non-finite entry");
}

RealMatrix RealMatrix::operator+(const RealMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("operator+: shape mismatch");
    RealMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] + o.entries_[k];
    return r;
}

RealMatrix RealMatrix::operator-(const RealMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("operator-: shape mismatch");
    RealMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] - o.entries_[k];
    return r;
}

RealMatrix RealMatrix::operator*(double s) const {
    RealMatrix r(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] * s;
    return r;
}

double RealMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double e : entries_) s += e * e;
    return std::sqrt(s);
}

bool RealMatrix::all_finite() const {
    for (double e : entries_)
        if (!std::isfinite(e)) return false;
    return true;
}

double row_dist_sq(const RealMatrix& m, std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const double d = m(i, c) - m(j, c);
        s += d * d;
    }
    return s;
}

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
    if (x.size() != y.size()) throw InvalidArgument("dot: length mismatch");
    cplx s(0.0, 0.0);
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * std::conj(y[k]);
    return s;
}

double norm2(std::span<const cplx> x) {
    double s = 0.0;
    for (const cplx& e : x) s += std::norm(e);
    return std::sqrt(s);
}

HermitianPair hermitian_components(const CMatrix& a) {
    if (!a.is_square()) throw InvalidArgument("hermitian_components: non-square input");
    const std::size_t n = a.rows();
    CMatrix re(n, n), im(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const cplx aij = a(i, j);
            const cplx aji = std::conj(a(j, i));
            re(i, j) = (aij + aji) * 0.5;
            im(i, j) = (aij - aji) / cplx(0.0, 2.0);
        }
    }
    return {std::move(re), std::move(im)};
}

bool is_normal(const CMatrix& a, double tol) {
    if (!a.is_square()) throw InvalidArgument("is_normal: non-square input");
    if (tol <= 0.0) throw InvalidArgument("is_normal: tol must be positive");
    const CMatrix ah = a.adjoint();
    const double f = a.frobenius_norm();
    const double resid = (a * ah - ah * a).frobenius_norm();
    return resid <= tol * f * f;
}

double hermitian_residual(const CMatrix& a) {
    if (!a.is_square()) throw InvalidArgument("hermitian_residual: non-square input");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    const double f = a.frobenius_norm();
    return f > 0.0 ? worst / f : worst;
}

} // namespace calign
