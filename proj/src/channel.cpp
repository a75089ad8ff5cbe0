#include "fdx/channel.hpp"

#include <cmath>

namespace fdx::channel {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
constexpr double kPi = 3.141592653589793238462643;

double deg2rad(double d) { return d * kPi / 180.0; }

/// Uniform UE drop in a square of side sqrt(area) whose near edge sits at
/// the configured standoff from the BS; returns the BS-UE distance.
double sample_ue_distance(const SystemConfig& cfg, RngStream& rng) {
    const double side = std::sqrt(cfg.ue_area_m2);
    const double x = cfg.ue_standoff_m + side * rng.uniform();
    const double y = side * (rng.uniform() - 0.5);
    return std::hypot(x, y);
}

PathSet sample_paths(const SystemConfig& cfg, RngStream& rng, double nominal_rad,
                     double beta) {
    PathSet p;
    p.beta = beta;
    const double half = deg2rad(cfg.angular_spread_deg) / 2.0;
    p.theta.resize(std::size_t(cfg.n_paths));
    p.alpha.resize(std::size_t(cfg.n_paths));
    for (int i = 0; i < cfg.n_paths; ++i) {
        p.theta[std::size_t(i)] = rng.uniform(nominal_rad - half, nominal_rad + half);
        p.alpha[std::size_t(i)] = rng.complex_normal();
    }
    return p;
}
} // namespace

void SystemConfig::validate() const {
    if (n_tx < 1 || n_rx < 1 || k_uplink < 0 || k_downlink < 0 || k_total() < 1 ||
        n_paths < 1)
        throw std::invalid_argument("SystemConfig: counts must be positive");
    if (carrier_hz <= 0.0 || antenna_spacing_wl <= 0.0)
        throw std::invalid_argument("SystemConfig: carrier and spacing must be positive");
    if (!nominal_angle_deg.empty() &&
        nominal_angle_deg.size() != std::size_t(k_total()))
        throw std::invalid_argument("SystemConfig: nominal_angle_deg length != K");
}

ComplexMatrix steering_vector(double theta_rad, int n, double spacing_wl) {
    if (n < 1) throw std::invalid_argument("steering_vector: n >= 1 required");
    ComplexMatrix a(std::size_t(n), 1);
    const double scale = 1.0 / std::sqrt(double(n));
    const double phase_step = kTwoPi * spacing_wl * std::sin(theta_rad);
    for (int m = 0; m < n; ++m) {
        const double ph = phase_step * double(m);
        a(std::size_t(m), 0) = cplx(scale * std::cos(ph), scale * std::sin(ph));
    }
    return a;
}

double large_scale_fading(double r_m, const SystemConfig& cfg, RngStream& rng) {
    if (!(r_m > 0.0)) throw std::invalid_argument("large_scale_fading: r must be > 0");
    const double chi = cfg.shadow_std_db * rng.gaussian();
    const double beta_db = cfg.pathloss_ref_db - 10.0 * cfg.pathloss_exp * std::log10(r_m) + chi;
    return std::pow(10.0, beta_db / 10.0);
}

std::pair<ComplexMatrix, std::vector<PathSet>> gen_ue_channels(const SystemConfig& cfg,
                                                               RngStream& rng) {
    const int k_total = cfg.k_total();
    ComplexMatrix h(std::size_t(cfg.n_rx), std::size_t(k_total));
    std::vector<PathSet> paths;
    paths.reserve(std::size_t(k_total));

    const double col_scale = std::sqrt(double(cfg.n_rx) / double(cfg.n_paths));
    for (int k = 0; k < k_total; ++k) {
        const double r = sample_ue_distance(cfg, rng);
        const double beta = large_scale_fading(r, cfg, rng);
        const double nominal = cfg.nominal_angle_deg.empty()
                                   ? 0.0
                                   : deg2rad(cfg.nominal_angle_deg[std::size_t(k)]);
        PathSet p = sample_paths(cfg, rng, nominal, beta);

        ComplexMatrix colv(std::size_t(cfg.n_rx), 1);
        for (int i = 0; i < cfg.n_paths; ++i) {
            ComplexMatrix a = steering_vector(p.theta[std::size_t(i)], cfg.n_rx,
                                              cfg.antenna_spacing_wl);
            a *= p.alpha[std::size_t(i)];
            colv += a;
        }
        colv *= col_scale * std::sqrt(beta);
        h.set_col(std::size_t(k), colv);
        paths.push_back(std::move(p));
    }
    return {std::move(h), std::move(paths)};
}

ComplexMatrix gen_si_farfield(const SystemConfig& cfg, RngStream& rng, PathSet& paths_out) {
    paths_out = sample_paths(cfg, rng, 0.0, cfg.si_beta);
    ComplexMatrix h(std::size_t(cfg.n_rx), std::size_t(cfg.n_tx));
    for (int i = 0; i < cfg.n_paths; ++i) {
        const double th = paths_out.theta[std::size_t(i)];
        const ComplexMatrix aa = steering_vector(th, cfg.n_rx, cfg.antenna_spacing_wl);
        const ComplexMatrix ad = steering_vector(th, cfg.n_tx, cfg.antenna_spacing_wl);
        const cplx g = paths_out.alpha[std::size_t(i)];
        for (int nr = 0; nr < cfg.n_rx; ++nr)
            for (int nt = 0; nt < cfg.n_tx; ++nt)
                h(std::size_t(nr), std::size_t(nt)) +=
                    g * aa(std::size_t(nr), 0) * ad(std::size_t(nt), 0);
    }
    h *= std::sqrt(double(cfg.n_tx) * double(cfg.n_rx) / double(cfg.n_paths)) *
         std::sqrt(paths_out.beta);
    return h;
}

ComplexMatrix gen_si_farfield(const SystemConfig& cfg, RngStream& rng) {
    PathSet unused;
    return gen_si_farfield(cfg, rng, unused);
}

ComplexMatrix gen_si_nearfield(const SystemConfig& cfg) {
    // Both ULAs collinear: TX element m at -m*d, RX element n at l + n*d
    // (wavelength units), so r_nm = l + (n + m) d and r_00 = l.
    const double d = cfg.antenna_spacing_wl;
    const double l = cfg.array_separation_wl;
    ComplexMatrix h(std::size_t(cfg.n_rx), std::size_t(cfg.n_tx));
    double inv_sq_sum = 0.0;
    for (int n = 0; n < cfg.n_rx; ++n) {
        for (int m = 0; m < cfg.n_tx; ++m) {
            const double r = l + double(n + m) * d;
            if (!(r > 0.0))
                throw InvalidGeometry("gen_si_nearfield: coincident antenna elements");
            const double ph = -kTwoPi * r;
            h(std::size_t(n), std::size_t(m)) =
                cplx(std::cos(ph) / r, std::sin(ph) / r);
            inv_sq_sum += 1.0 / (r * r);
        }
    }
    const double rho =
        std::sqrt(double(cfg.n_rx) * double(cfg.n_tx) / inv_sq_sum);
    h *= rho;
    return h;
}

ComplexMatrix gen_si_channel(const SystemConfig& cfg, RngStream& rng) {
    const double kappa = std::pow(10.0, cfg.rician_kappa_db / 10.0);
    const double eps = std::pow(10.0, cfg.si_suppression_db / 10.0);
    const double w_nf = std::sqrt(eps * kappa / (kappa + 1.0));
    const double w_ff = std::sqrt(1.0 / (kappa + 1.0));
    ComplexMatrix h = gen_si_nearfield(cfg);
    h *= w_nf;
    ComplexMatrix ff = gen_si_farfield(cfg, rng);
    ff *= w_ff;
    h += ff;
    return h;
}

std::pair<ComplexMatrix, ComplexMatrix> gen_rx_tx_pair(const SystemConfig& cfg,
                                                       RngStream& rng,
                                                       double nominal_rad) {
    const double r = sample_ue_distance(cfg, rng);
    const double beta = large_scale_fading(r, cfg, rng);
    const PathSet p = sample_paths(cfg, rng, nominal_rad, beta);

    ComplexMatrix h_rx(std::size_t(cfg.n_rx), 1);
    ComplexMatrix h_tx(std::size_t(cfg.n_tx), 1);
    for (int i = 0; i < cfg.n_paths; ++i) {
        const double th = p.theta[std::size_t(i)];
        ComplexMatrix aa = steering_vector(th, cfg.n_rx, cfg.antenna_spacing_wl);
        aa *= p.alpha[std::size_t(i)];
        h_rx += aa;

        const double delay = -kTwoPi * cfg.array_separation_wl * std::cos(th);
        ComplexMatrix ad = steering_vector(th, cfg.n_tx, cfg.antenna_spacing_wl);
        ad *= p.alpha[std::size_t(i)] * cplx(std::cos(delay), std::sin(delay));
        h_tx += ad;
    }
    h_rx *= std::sqrt(beta / double(cfg.n_rx));
    h_tx *= std::sqrt(beta / double(cfg.n_tx));
    return {std::move(h_rx), std::move(h_tx)};
}

ChannelRealization gen_realization(const SystemConfig& cfg, RngStream& rng) {
    ChannelRealization ch;
    auto [h_ue, paths] = gen_ue_channels(cfg, rng);
    ch.h_ue = std::move(h_ue);
    ch.ue_paths = std::move(paths);

    const double kappa = std::pow(10.0, cfg.rician_kappa_db / 10.0);
    const double eps = std::pow(10.0, cfg.si_suppression_db / 10.0);
    ComplexMatrix nf = gen_si_nearfield(cfg);
    nf *= std::sqrt(eps * kappa / (kappa + 1.0));
    ComplexMatrix ff = gen_si_farfield(cfg, rng, ch.si_paths);
    ff *= std::sqrt(1.0 / (kappa + 1.0));
    nf += ff;
    ch.h_si = std::move(nf);

    // TX-side channels for downlink UEs reuse the exact path draws of the
    // corresponding h_ue columns; only the array response and the
    // separation-delay phase differ.
    ch.h_ue_tx = ComplexMatrix(std::size_t(cfg.n_tx), std::size_t(cfg.k_downlink));
    const double col_scale = std::sqrt(double(cfg.n_tx) / double(cfg.n_paths));
    for (int kd = 0; kd < cfg.k_downlink; ++kd) {
        const PathSet& p = ch.ue_paths[std::size_t(cfg.k_uplink + kd)];
        ComplexMatrix colv(std::size_t(cfg.n_tx), 1);
        for (int i = 0; i < cfg.n_paths; ++i) {
            const double th = p.theta[std::size_t(i)];
            const double delay = -kTwoPi * cfg.array_separation_wl * std::cos(th);
            ComplexMatrix ad = steering_vector(th, cfg.n_tx, cfg.antenna_spacing_wl);
            ad *= p.alpha[std::size_t(i)] * cplx(std::cos(delay), std::sin(delay));
            colv += ad;
        }
        colv *= col_scale * std::sqrt(p.beta);
        ch.h_ue_tx.set_col(std::size_t(kd), colv);
    }
    return ch;
}

} // namespace fdx::channel
