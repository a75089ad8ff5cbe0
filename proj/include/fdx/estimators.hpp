#pragma once

#include <cstdint>

#include "fdx/channel.hpp"
#include "fdx/complex_matrix.hpp"
#include "fdx/pilot.hpp"

namespace fdx::est {

/// Empirical vec-domain covariances of the SI and UE channels.
struct CovarianceModel {
    ComplexMatrix r_si; ///< (N_t N_r) x (N_t N_r)
    ComplexMatrix r_ue; ///< (K N_r) x (K N_r)
    int n_realizations = 0;
};

/// (1/M) sum vec(H_i) vec(H_i)^H over the given sample set.
ComplexMatrix empirical_covariance(const std::vector<ComplexMatrix>& samples);

/// Covariances from M fresh channel realizations, normalized exactly like
/// the pilot stage normalizes them.
CovarianceModel build_covariance(const channel::SystemConfig& cfg, int m_realizations,
                                 std::uint64_t seed, std::uint64_t stream_base,
                                 int threads = 1);

/// H_hat = Y_corr / (tau sqrt(snr)) where Y_corr = correlate(Y, W).
ComplexMatrix ls_estimate(const ComplexMatrix& y_corr, int tau, double snr);

/// LS estimates of both channels from one received block.
ComplexMatrix ls_si(const pilot::ReceivedPilot& y, const pilot::PilotScheme& scheme);
ComplexMatrix ls_ue(const pilot::ReceivedPilot& y, const pilot::PilotScheme& scheme);

/// Precomputed linear MMSE operator: h_hat = G vec(Y), plus the SI error
/// covariance when relevant. Building one costs a dense Hermitian solve;
/// applying it is a single matrix-vector product per trial.
struct MmseOperator {
    ComplexMatrix gain; ///< (dim_h) x (N_r tau)
    std::size_t out_rows = 0;
};

/// vec(H_SI) estimator: sqrt(s_si) R_SI X_si^H (s_si X_si R_SI X_si^H +
/// s_ue X_ue R_UE X_ue^H + I)^-1. The identity has the dimension of
/// vec(Y), N_r tau.
MmseOperator build_mmse_si(const pilot::PilotScheme& scheme, const CovarianceModel& cov,
                           double snr_si, double snr_ue, int n_rx);

/// Error covariance of the MMSE SI estimate:
/// R_E = R_SI - s_si R_SI X_si^H (...)^-1 X_si R_SI.
ComplexMatrix si_error_covariance(const pilot::PilotScheme& scheme,
                                  const CovarianceModel& cov, double snr_si,
                                  double snr_ue, int n_rx);

/// vec(H_UE) estimator applied to the (optionally cancelled) block; the
/// residual SI interference enters through r_e (use R_SI when nothing was
/// cancelled).
MmseOperator build_mmse_ue(const pilot::PilotScheme& scheme, const CovarianceModel& cov,
                           const ComplexMatrix& r_e, double snr_si, double snr_ue,
                           int n_rx);

ComplexMatrix apply_mmse(const MmseOperator& op, const pilot::ReceivedPilot& y,
                         std::size_t h_rows);

/// One-call conveniences matching the operator builders.
ComplexMatrix mmse_si(const pilot::ReceivedPilot& y, const pilot::PilotScheme& scheme,
                      const CovarianceModel& cov, int n_rx);
ComplexMatrix mmse_ue(const pilot::ReceivedPilot& y, const pilot::PilotScheme& scheme,
                      const CovarianceModel& cov, const ComplexMatrix& r_e, int n_rx);

/// Single-channel MMSE on the orthogonal layout, evaluated in the
/// correlated domain: vec(H_hat) = sqrt(snr) (R^-1 + tau snr I)^-1 vec(Y_corr),
/// computed as (I + tau snr R)^-1 R vec(Y_corr) so R is never inverted.
ComplexMatrix mmse_orthogonal(const ComplexMatrix& y_corr, int tau, double snr,
                              const ComplexMatrix& r);

/// (X^T kron I_n): the vec-domain operator of right-multiplication by X.
ComplexMatrix vec_operator(const ComplexMatrix& x, int n_rx);

} // namespace fdx::est
