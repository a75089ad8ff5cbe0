#include "fdx/nn/network.hpp"

#include <cmath>

#include "fdx/kernels/kernels.hpp"
#include "fdx/rng.hpp"

namespace fdx::nn {

NetworkSpec NetworkSpec::cnn(int n_hidden, int h, int w) {
    NetworkSpec s;
    s.kind = NetKind::CNN;
    s.n_hidden = n_hidden;
    s.in_h = h;
    s.in_w = w;
    s.validate();
    return s;
}

NetworkSpec NetworkSpec::fnn(int n_hidden, int in_len, int out_len, int width) {
    NetworkSpec s;
    s.kind = NetKind::FNN;
    s.n_hidden = n_hidden;
    s.in_len = in_len;
    s.out_len = out_len;
    s.hidden_width = width;
    s.validate();
    return s;
}

std::vector<int> NetworkSpec::features() const {
    std::vector<int> f;
    f.reserve(std::size_t(n_layers()) + 1);
    if (kind == NetKind::CNN) {
        f.push_back(2);
        for (int l = 0; l < n_hidden; ++l) f.push_back(hidden_channels);
        f.push_back(2);
    } else {
        f.push_back(in_len);
        for (int l = 0; l < n_hidden; ++l) f.push_back(hidden_width);
        f.push_back(out_len);
    }
    return f;
}

long long NetworkSpec::conv_flops_sum() const {
    const std::vector<int> f = features();
    long long s = 0;
    for (std::size_t l = 1; l < f.size(); ++l)
        s += 9LL * f[l - 1] * f[l];
    return s;
}

std::size_t NetworkSpec::in_elems() const {
    return kind == NetKind::CNN ? std::size_t(in_h) * in_w * 2 : std::size_t(in_len);
}

std::size_t NetworkSpec::out_elems() const {
    return kind == NetKind::CNN ? std::size_t(in_h) * in_w * 2 : std::size_t(out_len);
}

void NetworkSpec::validate() const {
    if (n_hidden < 0) throw std::invalid_argument("NetworkSpec: n_hidden < 0");
    if (kind == NetKind::CNN) {
        if (in_h < 1 || in_w < 1 || hidden_channels < 1)
            throw std::invalid_argument("NetworkSpec: bad CNN dimensions");
    } else {
        if (in_len < 1 || out_len < 1 || hidden_width < 1)
            throw std::invalid_argument("NetworkSpec: bad FNN dimensions");
    }
}

std::string NetworkSpec::arch_name() const {
    return (kind == NetKind::CNN ? "CNN" : "FNN") + std::to_string(n_hidden);
}

void MinMaxScaler::fit(const float* x, std::size_t n) {
    if (n == 0) throw DegenerateRange("MinMaxScaler: empty fit data");
    double mn = x[0], mx = x[0];
    for (std::size_t i = 1; i < n; ++i) {
        mn = std::min(mn, double(x[i]));
        mx = std::max(mx, double(x[i]));
    }
    if (!(mx > mn)) throw DegenerateRange("MinMaxScaler: max == min");
    lo = mn;
    hi = mx;
    fitted = true;
}

void MinMaxScaler::transform(const float* x, float* y, std::size_t n) const {
    const float a = float(1.0 / (hi - lo));
    const float b = float(-lo / (hi - lo));
    kern::active().scale_shift(x, y, n, a, b);
}

void MinMaxScaler::inverse(const float* x, float* y, std::size_t n) const {
    const float a = float(hi - lo);
    const float b = float(lo);
    kern::active().scale_shift(x, y, n, a, b);
}

void Model::init_params(std::uint64_t seed) {
    const std::vector<int> f = spec.features();
    const int n_layers = spec.n_layers();
    weights.assign(std::size_t(n_layers), {});
    biases.assign(std::size_t(n_layers), {});
    for (int l = 0; l < n_layers; ++l) {
        const int fin = f[std::size_t(l)];
        const int fout = f[std::size_t(l) + 1];
        const std::size_t w_count = spec.kind == NetKind::CNN
                                        ? std::size_t(9) * fin * fout
                                        : std::size_t(fout) * fin;
        const int fan_in = spec.kind == NetKind::CNN ? 9 * fin : fin;
        const float bound = float(1.0 / std::sqrt(double(fan_in)));
        RngStream rng(seed, 100 + std::uint64_t(l));
        auto& w = weights[std::size_t(l)];
        w.resize(w_count);
        for (auto& v : w) v = float(rng.uniform(-bound, bound));
        biases[std::size_t(l)].assign(std::size_t(fout), 0.0f);
    }
}

std::size_t Model::param_count() const {
    std::size_t n = 0;
    for (const auto& w : weights) n += w.size();
    for (const auto& b : biases) n += b.size();
    return n;
}

Model::Workspace Model::make_workspace() const {
    Workspace ws;
    const std::vector<int> f = spec.features();
    const int n_layers = spec.n_layers();
    ws.pre.resize(std::size_t(n_layers));
    ws.act.resize(std::size_t(n_layers));
    std::size_t max_elems = spec.in_elems();
    for (int l = 0; l < n_layers; ++l) {
        const std::size_t elems = spec.kind == NetKind::CNN
                                      ? std::size_t(spec.in_h) * spec.in_w *
                                            std::size_t(f[std::size_t(l) + 1])
                                      : std::size_t(f[std::size_t(l) + 1]);
        ws.pre[std::size_t(l)].resize(elems);
        ws.act[std::size_t(l)].resize(elems);
        max_elems = std::max(max_elems, elems);
    }
    ws.ga.resize(max_elems);
    ws.gb.resize(max_elems);
    return ws;
}

const float* Model::forward(const float* x, Workspace& ws) const {
    const std::vector<int> f = spec.features();
    const int n_layers = spec.n_layers();
    const auto& kt = kern::active();
    const float* cur = x;
    for (int l = 0; l < n_layers; ++l) {
        const int fin = f[std::size_t(l)];
        const int fout = f[std::size_t(l) + 1];
        float* pre = ws.pre[std::size_t(l)].data();
        if (spec.kind == NetKind::CNN) {
            kt.conv3x3_fwd(cur, spec.in_h, spec.in_w, fin,
                           weights[std::size_t(l)].data(),
                           biases[std::size_t(l)].data(), fout, pre);
        } else {
            kt.dense_fwd(cur, weights[std::size_t(l)].data(),
                         biases[std::size_t(l)].data(), fout, fin, pre);
        }
        float* act = ws.act[std::size_t(l)].data();
        const std::size_t elems = ws.pre[std::size_t(l)].size();
        if (l < n_layers - 1) {
            kt.relu_fwd(pre, act, elems);
        } else {
            std::copy(pre, pre + elems, act); // linear output layer
        }
        cur = act;
    }
    return cur;
}

void Model::backward(const float* x, const float* grad_out, Workspace& ws,
                     Grads& grads) const {
    const std::vector<int> f = spec.features();
    const int n_layers = spec.n_layers();
    const auto& kt = kern::active();

    // Output layer is linear, so dL/d pre[L-1] = grad_out.
    const std::size_t out_n = ws.pre[std::size_t(n_layers - 1)].size();
    std::copy(grad_out, grad_out + out_n, ws.ga.begin());
    float* g = ws.ga.data();
    float* scratch = ws.gb.data();

    for (int l = n_layers - 1; l >= 0; --l) {
        const int fin = f[std::size_t(l)];
        const int fout = f[std::size_t(l) + 1];
        const float* input = l == 0 ? x : ws.act[std::size_t(l - 1)].data();
        if (spec.kind == NetKind::CNN) {
            kt.conv3x3_bwd(g, input, weights[std::size_t(l)].data(), spec.in_h,
                           spec.in_w, fin, fout, scratch,
                           grads.w[std::size_t(l)].data(),
                           grads.b[std::size_t(l)].data());
        } else {
            kt.dense_bwd(g, input, weights[std::size_t(l)].data(), fout, fin, scratch,
                         grads.w[std::size_t(l)].data(),
                         grads.b[std::size_t(l)].data());
        }
        if (l > 0) {
            // Chain through the hidden ReLU into the other buffer.
            const std::size_t elems = ws.pre[std::size_t(l - 1)].size();
            kt.relu_bwd(scratch, ws.pre[std::size_t(l - 1)].data(), g, elems);
        }
    }
}

void Grads::init_like(const Model& m) {
    w.resize(m.weights.size());
    b.resize(m.biases.size());
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        w[l].assign(m.weights[l].size(), 0.0f);
        b[l].assign(m.biases[l].size(), 0.0f);
    }
}

void Grads::zero() {
    for (auto& g : w) std::fill(g.begin(), g.end(), 0.0f);
    for (auto& g : b) std::fill(g.begin(), g.end(), 0.0f);
}

void Grads::add(const Grads& o) {
    for (std::size_t l = 0; l < w.size(); ++l) {
        for (std::size_t i = 0; i < w[l].size(); ++i) w[l][i] += o.w[l][i];
        for (std::size_t i = 0; i < b[l].size(); ++i) b[l][i] += o.b[l][i];
    }
}

void AdamState::init_like(const Model& m) {
    m_w.resize(m.weights.size());
    v_w.resize(m.weights.size());
    m_b.resize(m.biases.size());
    v_b.resize(m.biases.size());
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        m_w[l].assign(m.weights[l].size(), 0.0f);
        v_w[l].assign(m.weights[l].size(), 0.0f);
        m_b[l].assign(m.biases[l].size(), 0.0f);
        v_b[l].assign(m.biases[l].size(), 0.0f);
    }
}

void adam_update(Model& model, const Grads& grads, AdamState& state,
                 const TrainHyper& hyper) {
    ++state.step;
    const float inv_bc1 = float(1.0 / (1.0 - std::pow(hyper.beta1, state.step)));
    const float inv_bc2 = float(1.0 / (1.0 - std::pow(hyper.beta2, state.step)));
    const auto& kt = kern::active();
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        kt.adam_step(model.weights[l].data(), state.m_w[l].data(), state.v_w[l].data(),
                     grads.w[l].data(), model.weights[l].size(), float(hyper.lr),
                     float(hyper.beta1), float(hyper.beta2), float(hyper.eps), inv_bc1,
                     inv_bc2);
        kt.adam_step(model.biases[l].data(), state.m_b[l].data(), state.v_b[l].data(),
                     grads.b[l].data(), model.biases[l].size(), float(hyper.lr),
                     float(hyper.beta1), float(hyper.beta2), float(hyper.eps), inv_bc1,
                     inv_bc2);
    }
}

} // namespace fdx::nn
