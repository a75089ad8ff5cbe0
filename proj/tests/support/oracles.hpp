#pragma once

// Test-only oracles, deliberately independent of the library's solve and
// estimator code paths: a plain partial-pivot LU for linear systems and a
// joint-Gaussian conditional-mean estimator assembled from stacked block
// covariances.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fdx/complex_matrix.hpp"

namespace oracle {

using fdx::ComplexMatrix;
using fdx::cplx;

/// Gaussian elimination with partial pivoting; no reuse of the library's
/// Cholesky path.
inline ComplexMatrix lu_solve(ComplexMatrix a, ComplexMatrix b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.rows() != n) throw std::invalid_argument("lu_solve dims");
    const std::size_t m = b.cols();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                piv = i;
            }
        if (best == 0.0) throw std::runtime_error("lu_solve: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(b(k, j), b(piv, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            a(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < m; ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = 0; j < m; ++j) {
            cplx s = b(ii, j);
            for (std::size_t k2 = ii + 1; k2 < n; ++k2) s -= a(ii, k2) * b(k2, j);
            b(ii, j) = s / a(ii, ii);
        }
    }
    return b;
}

/// Zero-mean jointly Gaussian model y = sum_k A_k x_k + n with independent
/// blocks x_k ~ CN(0, C_k) and n ~ CN(0, I). Conditional mean of block
/// `which` given y: C_w A_w^H (sum A_k C_k A_k^H + I)^-1 y.
struct JointBlock {
    ComplexMatrix a;   ///< observation operator for this block
    ComplexMatrix cov; ///< block covariance
};

inline ComplexMatrix conditional_mean(const std::vector<JointBlock>& blocks,
                                      std::size_t which, const ComplexMatrix& y) {
    const std::size_t dim_y = blocks.at(0).a.rows();
    ComplexMatrix c_yy(dim_y, dim_y);
    for (const auto& blk : blocks) c_yy += (blk.a * blk.cov) * blk.a.adjoint();
    for (std::size_t i = 0; i < dim_y; ++i) c_yy(i, i) += 1.0;
    const ComplexMatrix c_hy = blocks.at(which).cov * blocks.at(which).a.adjoint();
    return c_hy * lu_solve(c_yy, y);
}

/// Random Hermitian positive definite matrix M M^H + ridge I.
inline ComplexMatrix random_hpd(fdx::RngStream& rng, std::size_t n, double ridge = 0.5) {
    ComplexMatrix m = fdx::sample_cn_matrix(rng, n, n);
    ComplexMatrix r = m * m.adjoint();
    r *= 1.0 / double(n);
    for (std::size_t i = 0; i < n; ++i) r(i, i) += ridge;
    // Exact Hermitian symmetrization.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (r(i, j) + std::conj(r(j, i)));
            r(i, j) = v;
            r(j, i) = std::conj(v);
        }
    return r;
}

/// Lower Cholesky factor, test-local (used to draw correlated Gaussians).
inline ComplexMatrix cholesky_factor(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    ComplexMatrix l(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double d = a(k, k).real();
        for (std::size_t j = 0; j < k; ++j) d -= std::norm(l(k, j));
        if (d <= 0.0) throw std::runtime_error("cholesky_factor: not PD");
        l(k, k) = std::sqrt(d);
        for (std::size_t i = k + 1; i < n; ++i) {
            cplx s = a(i, k);
            for (std::size_t j = 0; j < k; ++j) s -= l(i, j) * std::conj(l(k, j));
            l(i, k) = s / l(k, k).real();
        }
    }
    return l;
}

inline double rel_err(const ComplexMatrix& got, const ComplexMatrix& want) {
    ComplexMatrix d = got;
    d -= want;
    const double ref = want.frobenius_norm();
    return ref > 0.0 ? d.frobenius_norm() / ref : d.frobenius_norm();
}

/// Central-difference derivative of a scalar functional at x[i].
template <class F>
double central_diff(F&& f, std::vector<double>& x, std::size_t i, double h) {
    const double orig = x[i];
    x[i] = orig + h;
    const double up = f();
    x[i] = orig - h;
    const double dn = f();
    x[i] = orig;
    return (up - dn) / (2.0 * h);
}

} // namespace oracle
