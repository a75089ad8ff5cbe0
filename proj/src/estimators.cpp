#include "fdx/estimators.hpp"

#include <cmath>

#include "fdx/parallel.hpp"

namespace fdx::est {

ComplexMatrix empirical_covariance(const std::vector<ComplexMatrix>& samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("empirical_covariance: need >= 2 samples");
    const std::size_t rows = samples[0].rows();
    const std::size_t cols = samples[0].cols();
    const std::size_t dim = rows * cols;

    // Stack vec(H_i) as columns of V, then R = V V^H / M via one gemm.
    ComplexMatrix v(dim, samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        if (samples[s].rows() != rows || samples[s].cols() != cols)
            throw ShapeMismatch("empirical_covariance: inconsistent sample shapes");
        const ComplexMatrix vs = vec(samples[s]);
        for (std::size_t i = 0; i < dim; ++i) v(i, s) = vs(i, 0);
    }
    ComplexMatrix r = v * v.adjoint();
    r *= 1.0 / double(samples.size());
    // Re-Hermitize to remove rounding asymmetry from the product.
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) {
            const cplx m = 0.5 * (r(i, j) + std::conj(r(j, i)));
            r(i, j) = m;
            r(j, i) = std::conj(m);
        }
    return r;
}

CovarianceModel build_covariance(const channel::SystemConfig& cfg, int m_realizations,
                                 std::uint64_t seed, std::uint64_t stream_base,
                                 int threads) {
    std::vector<ComplexMatrix> si{std::size_t(m_realizations)};
    std::vector<ComplexMatrix> ue{std::size_t(m_realizations)};
    parallel_chunks(std::size_t(m_realizations), threads,
                    [&](std::size_t b, std::size_t e, int) {
                        for (std::size_t i = b; i < e; ++i) {
                            RngStream rng(seed, stream_base + i);
                            channel::ChannelRealization ch = channel::gen_realization(cfg, rng);
                            pilot::normalize_channels(ch);
                            si[i] = std::move(ch.h_si);
                            ue[i] = std::move(ch.h_ue);
                        }
                    });
    CovarianceModel cov;
    cov.r_si = empirical_covariance(si);
    cov.r_ue = empirical_covariance(ue);
    cov.n_realizations = m_realizations;
    return cov;
}

ComplexMatrix ls_estimate(const ComplexMatrix& y_corr, int tau, double snr) {
    if (!(snr > 0.0)) throw std::invalid_argument("ls_estimate: snr must be > 0");
    ComplexMatrix h = y_corr;
    h *= 1.0 / (double(tau) * std::sqrt(snr));
    return h;
}

ComplexMatrix ls_si(const pilot::ReceivedPilot& y, const pilot::PilotScheme& scheme) {
    return ls_estimate(pilot::correlate(y, scheme.w_si), scheme.ls_tau_si, y.snr_si);
}

ComplexMatrix ls_ue(const pilot::ReceivedPilot& y, const pilot::PilotScheme& scheme) {
    return ls_estimate(pilot::correlate(y, scheme.w_ue), scheme.ls_tau_ue, y.snr_ue);
}

ComplexMatrix vec_operator(const ComplexMatrix& x, int n_rx) {
    return kron(x.transpose(), ComplexMatrix::identity(std::size_t(n_rx)));
}

namespace {

/// s_si X_si R_SI X_si^H + s_ue X_ue R_UE X_ue^H + I over the vec(Y) domain.
ComplexMatrix observation_gram(const ComplexMatrix& x_si, const ComplexMatrix& x_ue,
                               const ComplexMatrix& r_si, const ComplexMatrix& r_ue,
                               double snr_si, double snr_ue) {
    ComplexMatrix s = (x_si * r_si) * x_si.adjoint();
    s *= snr_si;
    ComplexMatrix ue_term = (x_ue * r_ue) * x_ue.adjoint();
    ue_term *= snr_ue;
    s += ue_term;
    for (std::size_t i = 0; i < s.rows(); ++i) s(i, i) += 1.0;
    return s;
}

} // namespace

MmseOperator build_mmse_si(const pilot::PilotScheme& scheme, const CovarianceModel& cov,
                           double snr_si, double snr_ue, int n_rx) {
    const ComplexMatrix x_si = vec_operator(scheme.w_si, n_rx);
    const ComplexMatrix x_ue = vec_operator(scheme.w_ue, n_rx);
    const ComplexMatrix s =
        observation_gram(x_si, x_ue, cov.r_si, cov.r_ue, snr_si, snr_ue);
    // G^H = sqrt(s_si) S^-1 X_si R_SI, solved column-block at once.
    ComplexMatrix rhs = x_si * cov.r_si;
    ComplexMatrix gh = hermitian_solve(s, rhs);
    gh *= std::sqrt(snr_si);
    MmseOperator op;
    op.gain = gh.adjoint();
    op.out_rows = cov.r_si.rows();
    return op;
}

ComplexMatrix si_error_covariance(const pilot::PilotScheme& scheme,
                                  const CovarianceModel& cov, double snr_si,
                                  double snr_ue, int n_rx) {
    const ComplexMatrix x_si = vec_operator(scheme.w_si, n_rx);
    const ComplexMatrix x_ue = vec_operator(scheme.w_ue, n_rx);
    const ComplexMatrix s =
        observation_gram(x_si, x_ue, cov.r_si, cov.r_ue, snr_si, snr_ue);
    const ComplexMatrix xr = x_si * cov.r_si;
    ComplexMatrix reduction = xr.adjoint() * hermitian_solve(s, xr);
    reduction *= snr_si;
    ComplexMatrix r_e = cov.r_si;
    r_e -= reduction;
    for (std::size_t i = 0; i < r_e.rows(); ++i)
        for (std::size_t j = i; j < r_e.cols(); ++j) {
            const cplx m = 0.5 * (r_e(i, j) + std::conj(r_e(j, i)));
            r_e(i, j) = m;
            r_e(j, i) = std::conj(m);
        }
    return r_e;
}

MmseOperator build_mmse_ue(const pilot::PilotScheme& scheme, const CovarianceModel& cov,
                           const ComplexMatrix& r_e, double snr_si, double snr_ue,
                           int n_rx) {
    const ComplexMatrix x_si = vec_operator(scheme.w_si, n_rx);
    const ComplexMatrix x_ue = vec_operator(scheme.w_ue, n_rx);
    // The residual-SI interference term carries X_si on both sides; r_e is
    // the covariance of vec(E_SI).
    const ComplexMatrix s =
        observation_gram(x_ue, x_si, cov.r_ue, r_e, snr_ue, snr_si);
    ComplexMatrix rhs = x_ue * cov.r_ue;
    ComplexMatrix gh = hermitian_solve(s, rhs);
    gh *= std::sqrt(snr_ue);
    MmseOperator op;
    op.gain = gh.adjoint();
    op.out_rows = cov.r_ue.rows();
    return op;
}

ComplexMatrix apply_mmse(const MmseOperator& op, const pilot::ReceivedPilot& y,
                         std::size_t h_rows) {
    const ComplexMatrix v = op.gain * vec(y.y);
    return unvec(v, h_rows);
}

ComplexMatrix mmse_si(const pilot::ReceivedPilot& y, const pilot::PilotScheme& scheme,
                      const CovarianceModel& cov, int n_rx) {
    const MmseOperator op = build_mmse_si(scheme, cov, y.snr_si, y.snr_ue, n_rx);
    return apply_mmse(op, y, std::size_t(n_rx));
}

ComplexMatrix mmse_ue(const pilot::ReceivedPilot& y, const pilot::PilotScheme& scheme,
                      const CovarianceModel& cov, const ComplexMatrix& r_e, int n_rx) {
    const MmseOperator op = build_mmse_ue(scheme, cov, r_e, y.snr_si, y.snr_ue, n_rx);
    return apply_mmse(op, y, std::size_t(n_rx));
}

ComplexMatrix mmse_orthogonal(const ComplexMatrix& y_corr, int tau, double snr,
                              const ComplexMatrix& r) {
    const std::size_t dim = r.rows();
    const ComplexMatrix yv = vec(y_corr);
    if (yv.rows() != dim) throw ShapeMismatch("mmse_orthogonal: covariance dimension");
    ComplexMatrix lhs = r;
    lhs *= double(tau) * snr;
    for (std::size_t i = 0; i < dim; ++i) lhs(i, i) += 1.0;
    ComplexMatrix v = hermitian_solve(lhs, r * yv);
    v *= std::sqrt(snr);
    return unvec(v, y_corr.rows());
}

} // namespace fdx::est
