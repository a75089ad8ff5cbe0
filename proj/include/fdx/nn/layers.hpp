#pragma once

#include <utility>

#include "fdx/kernels/kernels.hpp"
#include "fdx/kernels/ref_ops.hpp"
#include "fdx/nn/tensor.hpp"

// Shape-checked layer primitives over TensorT. The float instantiation
// routes through the dispatched kernel table; every other type uses the
// scalar reference directly.

namespace fdx::nn {

template <class T>
TensorT<T> conv2d_forward(const TensorT<T>& x, const TensorT<T>& k,
                          const TensorT<T>& b) {
    if (x.shape.size() != 3 || k.shape.size() != 4 || b.shape.size() != 1)
        throw ShapeMismatch("conv2d_forward: ranks");
    if (k.shape[0] != 3 || k.shape[1] != 3)
        throw ShapeMismatch("conv2d_forward: kernel must be 3x3");
    if (k.shape[2] != x.shape[2] || b.shape[0] != k.shape[3])
        throw ShapeMismatch("conv2d_forward: channel counts");
    const int h = int(x.shape[0]), w = int(x.shape[1]), cin = int(x.shape[2]);
    const int cout = int(k.shape[3]);
    TensorT<T> y({h, w, cout});
    if constexpr (std::is_same_v<T, float>) {
        kern::active().conv3x3_fwd(x.data.data(), h, w, cin, k.data.data(),
                                   b.data.data(), cout, y.data.data());
    } else {
        kern::ref::conv3x3_fwd(x.data.data(), h, w, cin, k.data.data(),
                               b.data.data(), cout, y.data.data());
    }
    return y;
}

/// Returns (grad_x, grad_k, grad_b); exact gradients of conv2d_forward.
template <class T>
void conv2d_backward(const TensorT<T>& gy, const TensorT<T>& x, const TensorT<T>& k,
                     TensorT<T>& gx, TensorT<T>& gk, TensorT<T>& gb) {
    if (gy.shape.size() != 3 || gy.shape[0] != x.shape[0] || gy.shape[1] != x.shape[1] ||
        gy.shape[2] != k.shape[3])
        throw ShapeMismatch("conv2d_backward: grad shape");
    const int h = int(x.shape[0]), w = int(x.shape[1]), cin = int(x.shape[2]);
    const int cout = int(k.shape[3]);
    gx = TensorT<T>(x.shape);
    gk = TensorT<T>(k.shape);
    gb = TensorT<T>({cout});
    if constexpr (std::is_same_v<T, float>) {
        kern::active().conv3x3_bwd(gy.data.data(), x.data.data(), k.data.data(), h, w,
                                   cin, cout, gx.data.data(), gk.data.data(),
                                   gb.data.data());
    } else {
        kern::ref::conv3x3_bwd(gy.data.data(), x.data.data(), k.data.data(), h, w,
                               cin, cout, gx.data.data(), gk.data.data(),
                               gb.data.data());
    }
}

template <class T>
TensorT<T> dense_forward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b) {
    if (x.shape.size() != 1 || w.shape.size() != 2 || b.shape.size() != 1)
        throw ShapeMismatch("dense_forward: ranks");
    if (w.shape[1] != x.shape[0] || b.shape[0] != w.shape[0])
        throw ShapeMismatch("dense_forward: dimensions");
    const int n_out = int(w.shape[0]), n_in = int(w.shape[1]);
    TensorT<T> y({n_out});
    if constexpr (std::is_same_v<T, float>) {
        kern::active().dense_fwd(x.data.data(), w.data.data(), b.data.data(), n_out,
                                 n_in, y.data.data());
    } else {
        kern::ref::dense_fwd(x.data.data(), w.data.data(), b.data.data(), n_out, n_in,
                             y.data.data());
    }
    return y;
}

template <class T>
void dense_backward(const TensorT<T>& gy, const TensorT<T>& x, const TensorT<T>& w,
                    TensorT<T>& gx, TensorT<T>& gw, TensorT<T>& gb) {
    if (gy.shape.size() != 1 || gy.shape[0] != w.shape[0])
        throw ShapeMismatch("dense_backward: grad shape");
    const int n_out = int(w.shape[0]), n_in = int(w.shape[1]);
    gx = TensorT<T>(x.shape);
    gw = TensorT<T>(w.shape);
    gb = TensorT<T>({n_out});
    if constexpr (std::is_same_v<T, float>) {
        kern::active().dense_bwd(gy.data.data(), x.data.data(), w.data.data(), n_out,
                                 n_in, gx.data.data(), gw.data.data(), gb.data.data());
    } else {
        kern::ref::dense_bwd(gy.data.data(), x.data.data(), w.data.data(), n_out, n_in,
                             gx.data.data(), gw.data.data(), gb.data.data());
    }
}

template <class T>
TensorT<T> relu_forward(const TensorT<T>& x) {
    TensorT<T> y(x.shape);
    if constexpr (std::is_same_v<T, float>) {
        kern::active().relu_fwd(x.data.data(), y.data.data(), x.data.size());
    } else {
        kern::ref::relu_fwd(x.data.data(), y.data.data(), x.data.size());
    }
    return y;
}

template <class T>
TensorT<T> relu_backward(const TensorT<T>& gy, const TensorT<T>& x) {
    if (!gy.same_shape(x)) throw ShapeMismatch("relu_backward: shapes");
    TensorT<T> gx(x.shape);
    if constexpr (std::is_same_v<T, float>) {
        kern::active().relu_bwd(gy.data.data(), x.data.data(), gx.data.data(),
                                x.data.size());
    } else {
        kern::ref::relu_bwd(gy.data.data(), x.data.data(), gx.data.data(),
                            x.data.size());
    }
    return gx;
}

/// Batch MSE per the training objective: mean over samples of the
/// per-sample squared Frobenius norm; gradient 2 (pred - label) / batch.
/// The leading dimension of both tensors is the batch.
template <class T>
std::pair<double, TensorT<T>> mse_loss(const TensorT<T>& pred, const TensorT<T>& label) {
    if (!pred.same_shape(label)) throw ShapeMismatch("mse_loss: shapes");
    if (pred.shape.empty() || pred.shape[0] < 1)
        throw ShapeMismatch("mse_loss: empty batch");
    const double batch = double(pred.shape[0]);
    TensorT<T> grad(pred.shape);
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const double d = double(pred.data[i]) - double(label.data[i]);
        acc += d * d;
        grad.data[i] = T(2.0 * d / batch);
    }
    return {acc / batch, std::move(grad)};
}

} // namespace fdx::nn
