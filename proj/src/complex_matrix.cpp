#include "fdx/complex_matrix.hpp"

#include <cmath>
#include <cstring>

#include "fdx/kernels/kernels.hpp"

namespace fdx {

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw ShapeMismatch("matrix add: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw ShapeMismatch("matrix sub: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix c = *this;
    for (auto& v : c.data_) v = std::conj(v);
    return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
}

ComplexMatrix ComplexMatrix::submatrix(std::size_t r0, std::size_t c0,
                                       std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_)
        throw ShapeMismatch("submatrix out of range");
    ComplexMatrix s(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) s(i, j) = (*this)(r0 + i, c0 + j);
    return s;
}

void ComplexMatrix::set_submatrix(std::size_t r0, std::size_t c0,
                                  const ComplexMatrix& block) {
    if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_)
        throw ShapeMismatch("set_submatrix out of range");
    for (std::size_t i = 0; i < block.rows_; ++i)
        for (std::size_t j = 0; j < block.cols_; ++j)
            (*this)(r0 + i, c0 + j) = block(i, j);
}

ComplexMatrix ComplexMatrix::col(std::size_t j) const {
    return submatrix(0, j, rows_, 1);
}

void ComplexMatrix::set_col(std::size_t j, const ComplexMatrix& v) {
    if (v.cols() != 1 || v.rows() != rows_) throw ShapeMismatch("set_col shape");
    set_submatrix(0, j, v);
}

double ComplexMatrix::frobenius_norm_sq() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return s;
}

double ComplexMatrix::frobenius_norm() const { return std::sqrt(frobenius_norm_sq()); }

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool ComplexMatrix::is_finite() const {
    for (const auto& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    const std::size_t n = std::min(rows_, cols_);
    for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix ComplexMatrix::matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw ShapeMismatch("matmul: inner dimensions differ");
    ComplexMatrix c(a.rows_, b.cols_);
    kern::active().zgemm(false, a.rows_, b.cols_, a.cols_,
                         reinterpret_cast<const double*>(a.data()),
                         reinterpret_cast<const double*>(b.data()),
                         reinterpret_cast<double*>(c.data()));
    return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0)) continue;
            for (std::size_t r = 0; r < b.rows(); ++r)
                for (std::size_t c = 0; c < b.cols(); ++c)
                    k(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
        }
    return k;
}

ComplexMatrix vec(const ComplexMatrix& a) {
    ComplexMatrix v(a.rows() * a.cols(), 1);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) v(idx++, 0) = a(i, j);
    return v;
}

ComplexMatrix unvec(const ComplexMatrix& v, std::size_t rows) {
    if (v.cols() != 1 || rows == 0 || v.rows() % rows != 0)
        throw ShapeMismatch("unvec: not a compatible column vector");
    const std::size_t cols = v.rows() / rows;
    ComplexMatrix m(rows, cols);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = v(idx++, 0);
    return m;
}

ComplexMatrix hermitian_solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw ShapeMismatch("hermitian_solve: A not square");
    if (b.rows() != n) throw ShapeMismatch("hermitian_solve: B row count");

    const double tol = 1e-12 * a.trace().real() / double(n);

    // In-place lower Cholesky A = L L^H.
    ComplexMatrix l = a;
    for (std::size_t k = 0; k < n; ++k) {
        double d = l(k, k).real();
        for (std::size_t j = 0; j < k; ++j) d -= std::norm(l(k, j));
        if (!(d > tol))
            throw NotPositiveDefinite("hermitian_solve: pivot " + std::to_string(k) +
                                      " below tolerance");
        const double lkk = std::sqrt(d);
        l(k, k) = lkk;
        for (std::size_t i = k + 1; i < n; ++i) {
            cplx s = l(i, k);
            for (std::size_t j = 0; j < k; ++j) s -= l(i, j) * std::conj(l(k, j));
            l(i, k) = s / lkk;
        }
    }

    // Forward then backward substitution, one right-hand side at a time.
    ComplexMatrix x = b;
    const std::size_t m = b.cols();
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = x(i, c);
            for (std::size_t j = 0; j < i; ++j) s -= l(i, j) * x(j, c);
            x(i, c) = s / l(i, i).real();
        }
        for (std::size_t ii = n; ii-- > 0;) {
            cplx s = x(ii, c);
            for (std::size_t j = ii + 1; j < n; ++j) s -= std::conj(l(j, ii)) * x(j, c);
            x(ii, c) = s / l(ii, ii).real();
        }
    }
    return x;
}

ComplexMatrix sample_cn(RngStream& rng, std::size_t n) {
    ComplexMatrix v(n, 1);
    for (std::size_t i = 0; i < n; ++i) v(i, 0) = rng.complex_normal();
    return v;
}

ComplexMatrix sample_cn_matrix(RngStream& rng, std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) m.data()[i] = rng.complex_normal();
    return m;
}

} // namespace fdx
