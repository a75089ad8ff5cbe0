#pragma once

#include <string>

#include "fdx/channel.hpp"
#include "fdx/complex_matrix.hpp"

namespace fdx::pilot {

enum class SchemeKind {
    Orthogonal, ///< tau = N_t + K, SI and UE pilots time-multiplexed
    SharedNt,   ///< tau = N_t, UEs reuse the BS pilot resources
    SharedK,    ///< tau = K, SI estimated with fewer pilots than unknowns
};

std::string to_string(SchemeKind k);
SchemeKind scheme_from_string(const std::string& s);

/// Pilot layout over one coherence block: the effective SI codebook
/// F X_SI = W, the UE codebook X_UE, and the active-slot masks for the
/// orthogonal layout.
struct PilotScheme {
    SchemeKind kind = SchemeKind::Orthogonal;
    int tau = 0;
    ComplexMatrix w_si; ///< N_t x tau
    ComplexMatrix w_ue; ///< K x tau
    std::vector<bool> si_slots;
    std::vector<bool> ue_slots;

    /// Slot count that normalizes the LS estimate: the Gram of each
    /// codebook over the full block is ls_tau(target) * I.
    int ls_tau_si = 0;
    int ls_tau_ue = 0;
};

struct ReceivedPilot {
    ComplexMatrix y; ///< N_r x tau
    double snr_si = 1.0;
    double snr_ue = 1.0;
};

/// DFT codebook, entry (r, c) = s * omega^(r c) with omega = exp(-2 pi j / tau);
/// s = 1 when unit_modulus, 1/sqrt(m) otherwise.
ComplexMatrix dft_codebook(int m, int tau, bool unit_modulus = true);

PilotScheme build_scheme(SchemeKind kind, const channel::SystemConfig& cfg,
                         bool unit_modulus = true);

/// Y = sqrt(SNR_SI) H_SI W_SI + sqrt(SNR_UE) H_UE X_UE + N, noise i.i.d. CN(0,1).
ReceivedPilot assemble_rx(const PilotScheme& scheme, const ComplexMatrix& h_si,
                          const ComplexMatrix& h_ue, double snr_si, double snr_ue,
                          RngStream& rng);

/// Subtracts the reconstructed SI pilot contribution; what remains of the
/// SI term is sqrt(SNR_SI) (H_SI - H_hat) W_SI.
ReceivedPilot cancel_si(const ReceivedPilot& y, const ComplexMatrix& h_si_hat,
                        const PilotScheme& scheme);

/// Y W^H against the given codebook.
ComplexMatrix correlate(const ComplexMatrix& y, const ComplexMatrix& w);
ComplexMatrix correlate(const ReceivedPilot& y, const ComplexMatrix& w);

/// Rescales M so its average element power is one (||M||_F^2 = rows*cols);
/// returns the applied gain. Channel matrices are normalized this way at
/// the pilot stage so the SNR knobs are the only power levers.
double normalize_unit_power(ComplexMatrix& m);

/// Normalizes h_si and h_ue of a realization in place.
void normalize_channels(channel::ChannelRealization& ch);

} // namespace fdx::pilot
