#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fdx/errors.hpp"
#include "fdx/rng.hpp"

namespace fdx {

using cplx = std::complex<double>;

/// Dense row-major complex matrix; the carrier of channels, pilots and
/// received signals throughout the estimation path.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
        a += b;
        return a;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
        a -= b;
        return a;
    }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) {
        a *= s;
        return a;
    }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) {
        a *= s;
        return a;
    }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        return matmul(a, b);
    }

    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix adjoint() const;

    ComplexMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr,
                            std::size_t nc) const;
    void set_submatrix(std::size_t r0, std::size_t c0, const ComplexMatrix& block);
    ComplexMatrix col(std::size_t j) const;
    void set_col(std::size_t j, const ComplexMatrix& v);

    double frobenius_norm_sq() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool is_finite() const;
    cplx trace() const;

    static ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Kronecker product: entry [(i*B.rows+k), (j*B.cols+l)] = A(i,j) * B(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-stacking vectorization: columns of A stacked top to bottom into
/// a (rows*cols) x 1 vector.
ComplexMatrix vec(const ComplexMatrix& a);

/// Inverse of vec() given the row count of the original matrix.
ComplexMatrix unvec(const ComplexMatrix& v, std::size_t rows);

/// Solves A X = B for Hermitian positive definite A via a Cholesky
/// factorization; never forms an explicit inverse. Throws
/// NotPositiveDefinite when a pivot falls below 1e-12 * trace(A)/n.
ComplexMatrix hermitian_solve(const ComplexMatrix& a, const ComplexMatrix& b);

/// n i.i.d. CN(0,1) samples as an n x 1 vector.
ComplexMatrix sample_cn(RngStream& rng, std::size_t n);

/// Matrix with i.i.d. CN(0,1) entries, filled row-major.
ComplexMatrix sample_cn_matrix(RngStream& rng, std::size_t rows, std::size_t cols);

} // namespace fdx
