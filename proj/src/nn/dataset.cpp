#include "fdx/nn/dataset.hpp"

#include <cmath>

#include "fdx/parallel.hpp"
#include "fdx/quantizer.hpp"

namespace fdx::nn {

std::string to_string(TargetKind t) {
    switch (t) {
        case TargetKind::SI: return "SI";
        case TargetKind::UE: return "UE";
        case TargetKind::RXTX: return "RXTX";
    }
    return "?";
}

TargetKind target_from_string(const std::string& s) {
    if (s == "SI" || s == "si") return TargetKind::SI;
    if (s == "UE" || s == "ue") return TargetKind::UE;
    if (s == "RXTX" || s == "rxtx") return TargetKind::RXTX;
    throw std::invalid_argument("unknown target: " + s);
}

std::size_t Dataset::in_stride() const {
    std::size_t s = 1;
    for (std::size_t d = 1; d < inputs.shape.size(); ++d) s *= std::size_t(inputs.shape[d]);
    return s;
}

std::size_t Dataset::label_stride() const {
    std::size_t s = 1;
    for (std::size_t d = 1; d < labels.shape.size(); ++d) s *= std::size_t(labels.shape[d]);
    return s;
}

std::size_t Dataset::split_offset(int split) const {
    switch (split) {
        case 0: return 0;
        case 1: return n_train;
        case 2: return n_train + n_val;
    }
    throw std::invalid_argument("split index");
}

std::size_t Dataset::split_size(int split) const {
    switch (split) {
        case 0: return n_train;
        case 1: return n_val;
        case 2: return n_test;
    }
    throw std::invalid_argument("split index");
}

void Dataset::validate() const {
    if (n_train + n_val + n_test != size())
        throw ShapeMismatch("Dataset: split sizes do not sum to total");
}

void stack_complex(const ComplexMatrix& m, float* out) {
    const std::size_t n = m.rows() * m.cols();
    const cplx* d = m.data();
    for (std::size_t i = 0; i < n; ++i) {
        out[2 * i] = float(d[i].real());
        out[2 * i + 1] = float(d[i].imag());
    }
}

ComplexMatrix unstack_complex(const float* in, std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i)
        m.data()[i] = cplx(double(in[2 * i]), double(in[2 * i + 1]));
    return m;
}

void stack_complex_vector(const ComplexMatrix& v, float* out) {
    const std::size_t n = v.rows();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = float(v(i, 0).real());
        out[n + i] = float(v(i, 0).imag());
    }
}

ComplexMatrix unstack_complex_vector(const float* in, std::size_t n) {
    ComplexMatrix v(n, 1);
    for (std::size_t i = 0; i < n; ++i)
        v(i, 0) = cplx(double(in[i]), double(in[n + i]));
    return v;
}

std::vector<std::int64_t> input_dims(const channel::SystemConfig& cfg,
                                     const DatasetMeta& meta) {
    switch (meta.target) {
        case TargetKind::SI: return {cfg.n_rx, cfg.n_tx, 2};
        case TargetKind::UE: return {cfg.n_rx, cfg.k_total(), 2};
        case TargetKind::RXTX: return {2 * cfg.n_rx};
    }
    return {};
}

std::vector<std::int64_t> label_dims(const channel::SystemConfig& cfg,
                                     const DatasetMeta& meta) {
    switch (meta.target) {
        case TargetKind::SI: return {cfg.n_rx, cfg.n_tx, 2};
        case TargetKind::UE: return {cfg.n_rx, cfg.k_total(), 2};
        case TargetKind::RXTX: return {2 * cfg.n_tx};
    }
    return {};
}

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void fill_pilot_sample(const channel::SystemConfig& cfg, const DatasetMeta& meta,
                       const pilot::PilotScheme& scheme, std::size_t sample_idx,
                       float* input, float* label) {
    RngStream rng(meta.seed, sample_idx);
    channel::ChannelRealization ch = channel::gen_realization(cfg, rng);
    pilot::normalize_channels(ch);
    const double snr_si =
        db_to_linear(meta.snr_si_db[rng.uniform_index(meta.snr_si_db.size())]);
    const double snr_ue =
        db_to_linear(meta.snr_ue_db[rng.uniform_index(meta.snr_ue_db.size())]);
    pilot::ReceivedPilot y = pilot::assemble_rx(scheme, ch.h_si, ch.h_ue, snr_si,
                                                snr_ue, rng);
    if (meta.bits > 0) {
        const quant::QuantizerSpec q = quant::make_quantizer(meta.bits);
        y.y = quant::agc_quantize(y.y, q);
    }
    if (meta.target == TargetKind::SI) {
        stack_complex(pilot::correlate(y, scheme.w_si), input);
        stack_complex(ch.h_si, label);
    } else {
        stack_complex(pilot::correlate(y, scheme.w_ue), input);
        stack_complex(ch.h_ue, label);
    }
}

void fill_rxtx_sample(const channel::SystemConfig& cfg, const DatasetMeta& meta,
                      std::size_t sample_idx, float* input, float* label) {
    RngStream rng(meta.seed, sample_idx);
    channel::SystemConfig local = cfg;
    if (!meta.rxtx_spreads_deg.empty())
        local.angular_spread_deg =
            meta.rxtx_spreads_deg[rng.uniform_index(meta.rxtx_spreads_deg.size())];
    auto [h_rx, h_tx] = channel::gen_rx_tx_pair(local, rng);
    stack_complex_vector(h_rx, input);
    stack_complex_vector(h_tx, label);
}

} // namespace

Dataset make_dataset(const channel::SystemConfig& cfg, const DatasetMeta& meta,
                     std::size_t size, std::size_t n_train, std::size_t n_val,
                     std::size_t n_test, int threads) {
    if (size < 1) throw std::invalid_argument("make_dataset: size >= 1 required");
    if (n_train + n_val + n_test != size)
        throw std::invalid_argument("make_dataset: split sizes must sum to size");

    channel::SystemConfig local = cfg;
    local.angular_spread_deg = meta.theta_as_deg;
    local.rician_kappa_db = meta.kappa_db;
    local.validate();

    Dataset ds;
    ds.meta = meta;
    ds.n_train = n_train;
    ds.n_val = n_val;
    ds.n_test = n_test;

    std::vector<std::int64_t> in_shape = input_dims(local, meta);
    std::vector<std::int64_t> lab_shape = label_dims(local, meta);
    in_shape.insert(in_shape.begin(), std::int64_t(size));
    lab_shape.insert(lab_shape.begin(), std::int64_t(size));
    ds.inputs = Tensor(in_shape);
    ds.labels = Tensor(lab_shape);

    const std::size_t in_stride = ds.in_stride();
    const std::size_t lab_stride = ds.label_stride();

    if (meta.target == TargetKind::RXTX) {
        parallel_chunks(size, threads, [&](std::size_t b, std::size_t e, int) {
            for (std::size_t i = b; i < e; ++i)
                fill_rxtx_sample(local, meta, i,
                                 ds.inputs.data.data() + i * in_stride,
                                 ds.labels.data.data() + i * lab_stride);
        });
    } else {
        const pilot::PilotScheme scheme = pilot::build_scheme(meta.scheme, local);
        parallel_chunks(size, threads, [&](std::size_t b, std::size_t e, int) {
            for (std::size_t i = b; i < e; ++i)
                fill_pilot_sample(local, meta, scheme, i,
                                  ds.inputs.data.data() + i * in_stride,
                                  ds.labels.data.data() + i * lab_stride);
        });
    }
    return ds;
}

std::pair<MinMaxScaler, MinMaxScaler> fit_scaler(const Dataset& ds) {
    if (ds.n_train == 0) throw DegenerateRange("fit_scaler: empty training split");
    MinMaxScaler in_s, lab_s;
    in_s.fit(ds.inputs.data.data(), ds.n_train * ds.in_stride());
    lab_s.fit(ds.labels.data.data(), ds.n_train * ds.label_stride());
    return {in_s, lab_s};
}

} // namespace fdx::nn
