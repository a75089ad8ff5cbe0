#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdx/nn/tensor.hpp"

namespace fdx::nn {

enum class NetKind { CNN, FNN };

/// Layer-graph description. CNN: n_hidden 3x3/64-kernel ReLU conv layers
/// plus a 3x3/2-kernel linear output conv, input and output both
/// [h, w, 2]. FNN: n_hidden ReLU dense layers of hidden_width plus a
/// linear dense output.
struct NetworkSpec {
    NetKind kind = NetKind::CNN;
    int n_hidden = 0;
    int hidden_channels = 64;
    int hidden_width = 128;
    int in_h = 0, in_w = 0;        ///< CNN spatial dims (2 channels implied)
    int in_len = 0, out_len = 0;   ///< FNN vector lengths

    static NetworkSpec cnn(int n_hidden, int h, int w);
    static NetworkSpec fnn(int n_hidden, int in_len, int out_len, int width = 128);

    int n_layers() const { return n_hidden + 1; }

    /// Feature sizes f_0..f_L (channels for CNN, widths for FNN).
    std::vector<int> features() const;

    /// sum over layers of zeta^2 f_{l-1} f_l with zeta = 3 (CNN only).
    long long conv_flops_sum() const;

    std::size_t in_elems() const;
    std::size_t out_elems() const;
    void validate() const;
    std::string arch_name() const; ///< "CNN2", "FNN3", ...
};

/// Global min-max scaler mapping the fitted range onto [0, 1].
struct MinMaxScaler {
    double lo = 0.0;
    double hi = 1.0;
    bool fitted = false;

    void fit(const float* x, std::size_t n);
    void transform(const float* x, float* y, std::size_t n) const;
    void inverse(const float* x, float* y, std::size_t n) const;
};

struct TrainHyper {
    int batch_size = 512;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int max_epochs = 200;
    int patience = 10;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct Grads;

/// Parameters plus fitted scalers; forward/backward run one sample at a
/// time against caller-owned workspaces so batch evaluation can fan out
/// across threads.
struct Model {
    NetworkSpec spec;
    std::vector<std::vector<float>> weights; ///< CNN: [3*3*f_in*f_out], FNN: [f_out*f_in]
    std::vector<std::vector<float>> biases;  ///< [f_out]
    MinMaxScaler in_scaler, label_scaler;

    struct Workspace {
        std::vector<std::vector<float>> pre; ///< pre-activation per layer
        std::vector<std::vector<float>> act; ///< post-activation per layer
        std::vector<float> ga, gb;           ///< ping-pong gradient buffers
    };

    void init_params(std::uint64_t seed);
    std::size_t param_count() const;
    Workspace make_workspace() const;

    /// Returns the output buffer (valid until the next forward on this
    /// workspace). Input must hold spec.in_elems() scaled values.
    const float* forward(const float* x, Workspace& ws) const;

    /// Accumulates parameter gradients for one sample; grad_out is
    /// dLoss/d(output), x the same input given to forward.
    void backward(const float* x, const float* grad_out, Workspace& ws,
                  Grads& grads) const;
};

struct Grads {
    std::vector<std::vector<float>> w, b;
    void init_like(const Model& m);
    void zero();
    void add(const Grads& o);
};

struct AdamState {
    std::vector<std::vector<float>> m_w, v_w, m_b, v_b;
    int step = 0;
    void init_like(const Model& m);
};

/// One Adam update over every parameter tensor (bias-corrected).
void adam_update(Model& model, const Grads& grads, AdamState& state,
                 const TrainHyper& hyper);

} // namespace fdx::nn
