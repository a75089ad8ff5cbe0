#include "fdx/pilot.hpp"

#include <cmath>

namespace fdx::pilot {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

std::string to_string(SchemeKind k) {
    switch (k) {
        case SchemeKind::Orthogonal: return "orthogonal";
        case SchemeKind::SharedNt: return "shared_nt";
        case SchemeKind::SharedK: return "shared_k";
    }
    return "?";
}

SchemeKind scheme_from_string(const std::string& s) {
    if (s == "orthogonal") return SchemeKind::Orthogonal;
    if (s == "shared_nt") return SchemeKind::SharedNt;
    if (s == "shared_k") return SchemeKind::SharedK;
    throw std::invalid_argument("unknown pilot scheme: " + s);
}

ComplexMatrix dft_codebook(int m, int tau, bool unit_modulus) {
    if (m < 1 || tau < 1)
        throw std::invalid_argument("dft_codebook: m and tau must be >= 1");
    const double s = unit_modulus ? 1.0 : 1.0 / std::sqrt(double(m));
    ComplexMatrix w{std::size_t(m), std::size_t(tau)};
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < tau; ++c) {
            // Reduce the exponent mod tau before evaluating so large r*c
            // does not lose precision.
            const long long e = (static_cast<long long>(r) * c) % tau;
            const double ph = -kTwoPi * double(e) / double(tau);
            w(std::size_t(r), std::size_t(c)) = cplx(s * std::cos(ph), s * std::sin(ph));
        }
    }
    return w;
}

PilotScheme build_scheme(SchemeKind kind, const channel::SystemConfig& cfg,
                         bool unit_modulus) {
    const int nt = cfg.n_tx;
    const int k = cfg.k_total();
    PilotScheme ps;
    ps.kind = kind;
    switch (kind) {
        case SchemeKind::Orthogonal: {
            ps.tau = nt + k;
            ps.w_si = ComplexMatrix(std::size_t(nt), std::size_t(ps.tau));
            ps.w_ue = ComplexMatrix(std::size_t(k), std::size_t(ps.tau));
            ps.w_si.set_submatrix(0, 0, dft_codebook(nt, nt, unit_modulus));
            ps.w_ue.set_submatrix(0, std::size_t(nt), dft_codebook(k, k, unit_modulus));
            ps.si_slots.assign(std::size_t(ps.tau), false);
            ps.ue_slots.assign(std::size_t(ps.tau), false);
            for (int t = 0; t < nt; ++t) ps.si_slots[std::size_t(t)] = true;
            for (int t = nt; t < ps.tau; ++t) ps.ue_slots[std::size_t(t)] = true;
            ps.ls_tau_si = nt;
            ps.ls_tau_ue = k;
            break;
        }
        case SchemeKind::SharedNt: {
            ps.tau = nt;
            ps.w_si = dft_codebook(nt, nt, unit_modulus);
            ps.w_ue = dft_codebook(k, nt, unit_modulus);
            ps.si_slots.assign(std::size_t(ps.tau), true);
            ps.ue_slots.assign(std::size_t(ps.tau), true);
            ps.ls_tau_si = nt;
            ps.ls_tau_ue = nt;
            break;
        }
        case SchemeKind::SharedK: {
            ps.tau = k;
            ps.w_si = dft_codebook(nt, k, unit_modulus);
            ps.w_ue = dft_codebook(k, k, unit_modulus);
            ps.si_slots.assign(std::size_t(ps.tau), true);
            ps.ue_slots.assign(std::size_t(ps.tau), true);
            ps.ls_tau_si = k;
            ps.ls_tau_ue = k;
            break;
        }
    }
    return ps;
}

ReceivedPilot assemble_rx(const PilotScheme& scheme, const ComplexMatrix& h_si,
                          const ComplexMatrix& h_ue, double snr_si, double snr_ue,
                          RngStream& rng) {
    if (h_si.cols() != scheme.w_si.rows() || h_ue.cols() != scheme.w_ue.rows() ||
        h_si.rows() != h_ue.rows())
        throw ShapeMismatch("assemble_rx: channel/codebook dimensions");
    ReceivedPilot rp;
    rp.snr_si = snr_si;
    rp.snr_ue = snr_ue;
    ComplexMatrix y = h_si * scheme.w_si;
    y *= std::sqrt(snr_si);
    ComplexMatrix ue_part = h_ue * scheme.w_ue;
    ue_part *= std::sqrt(snr_ue);
    y += ue_part;
    ComplexMatrix n = sample_cn_matrix(rng, y.rows(), y.cols());
    y += n;
    rp.y = std::move(y);
    return rp;
}

ReceivedPilot cancel_si(const ReceivedPilot& y, const ComplexMatrix& h_si_hat,
                        const PilotScheme& scheme) {
    if (h_si_hat.rows() != y.y.rows() || h_si_hat.cols() != scheme.w_si.rows())
        throw ShapeMismatch("cancel_si: estimate shape");
    ReceivedPilot out = y;
    ComplexMatrix recon = h_si_hat * scheme.w_si;
    recon *= std::sqrt(y.snr_si);
    out.y -= recon;
    return out;
}

ComplexMatrix correlate(const ComplexMatrix& y, const ComplexMatrix& w) {
    if (y.cols() != w.cols()) throw ShapeMismatch("correlate: slot counts differ");
    return y * w.adjoint();
}

ComplexMatrix correlate(const ReceivedPilot& y, const ComplexMatrix& w) {
    return correlate(y.y, w);
}

double normalize_unit_power(ComplexMatrix& m) {
    const double target = double(m.rows() * m.cols());
    const double cur = m.frobenius_norm_sq();
    if (!(cur > 0.0)) throw ZeroReference("normalize_unit_power: zero matrix");
    const double gain = std::sqrt(target / cur);
    m *= gain;
    return gain;
}

void normalize_channels(channel::ChannelRealization& ch) {
    normalize_unit_power(ch.h_si);
    normalize_unit_power(ch.h_ue);
}

} // namespace fdx::pilot
