#pragma once

#include <vector>

#include "fdx/complex_matrix.hpp"
#include "fdx/rng.hpp"

namespace fdx::channel {

/// Physical and system parameters of the full-duplex base station and its
/// user population. Angles are degrees, gains are dB, distances are
/// wavelengths unless the suffix says otherwise.
struct SystemConfig {
    int n_tx = 16;
    int n_rx = 16;
    int k_uplink = 4;
    int k_downlink = 4;
    int n_paths = 5;
    double angular_spread_deg = 60.0;
    std::vector<double> nominal_angle_deg; ///< per-UE scattering center; empty = all 0
    double carrier_hz = 28e9;
    double antenna_spacing_wl = 0.5;  ///< d / lambda
    double array_separation_wl = 10.0; ///< gap between TX and RX arrays, in lambda
    double rician_kappa_db = 40.0;
    double si_suppression_db = -40.0; ///< epsilon_SI
    double si_beta = 1.0;             ///< large-scale gain of the far-field SI term (linear)
    double pathloss_ref_db = -72.0;   ///< Gamma at 1 m
    double pathloss_exp = 2.92;       ///< eta
    double shadow_std_db = 8.7;       ///< sigma_sf
    double ue_standoff_m = 10.0;      ///< near edge of the UE square
    double ue_area_m2 = 20.0;

    int k_total() const { return k_uplink + k_downlink; }
    double wavelength_m() const { return 299792458.0 / carrier_hz; }
    void validate() const;
};

struct PathSet {
    std::vector<cplx> alpha;  ///< small-scale gains, CN(0,1)
    std::vector<double> theta; ///< AoA/AoD per path, radians
    double beta = 1.0;         ///< large-scale gain (linear)
};

/// One draw of all channels entering a coherence block.
struct ChannelRealization {
    ComplexMatrix h_si;    ///< N_r x N_t
    ComplexMatrix h_ue;    ///< N_r x K, uplink UEs first then downlink UEs
    ComplexMatrix h_ue_tx; ///< N_t x K_d, TX-side channels for the downlink UEs
    std::vector<PathSet> ue_paths; ///< per UE, shared by h_ue and h_ue_tx columns
    PathSet si_paths;              ///< far-field SI paths
};

/// ULA response, entry m = (1/sqrt(n)) * exp(j 2 pi spacing_wl m sin(theta)).
ComplexMatrix steering_vector(double theta_rad, int n, double spacing_wl);

/// Linear power gain: beta_dB = Gamma - 10 eta log10(r) + chi,
/// chi ~ N(0, sigma_sf^2) in the dB domain.
double large_scale_fading(double r_m, const SystemConfig& cfg, RngStream& rng);

/// Geometric UE channels toward the RX array, one column per UE.
std::pair<ComplexMatrix, std::vector<PathSet>> gen_ue_channels(const SystemConfig& cfg,
                                                               RngStream& rng);

/// Far-field SI term: sum of steering outer products over paths.
ComplexMatrix gen_si_farfield(const SystemConfig& cfg, RngStream& rng);
ComplexMatrix gen_si_farfield(const SystemConfig& cfg, RngStream& rng, PathSet& paths_out);

/// Near-field SI term from the element-to-element ray distances of two
/// collinear ULAs; deterministic given the geometry, normalized so
/// ||H||_F^2 = N_r * N_t.
ComplexMatrix gen_si_nearfield(const SystemConfig& cfg);

/// Rician mix of the near- and far-field terms with the propagation-domain
/// suppression applied to the near field.
ComplexMatrix gen_si_channel(const SystemConfig& cfg, RngStream& rng);

/// RX/TX channel pair of one downlink UE sharing path gains and angles;
/// the TX side picks up the array-separation delay phase per path. Path
/// angles are drawn around nominal_rad.
std::pair<ComplexMatrix, ComplexMatrix> gen_rx_tx_pair(const SystemConfig& cfg,
                                                       RngStream& rng,
                                                       double nominal_rad = 0.0);

/// Full realization: SI channel, UE matrix and the TX-side channels of the
/// downlink UEs built from the same path draws.
ChannelRealization gen_realization(const SystemConfig& cfg, RngStream& rng);

} // namespace fdx::channel
