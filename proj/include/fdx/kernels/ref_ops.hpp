#pragma once

#include <cmath>
#include <cstddef>
#include <cstring>

// Scalar reference implementations of every hot kernel. These are the
// ground truth the SIMD variants are equivalence-tested against, and the
// instantiation used when a caller needs double precision (gradient
// checks run the double path).

namespace fdx::kern::ref {

/// C (+)= A * B for packed row-major complex matrices stored as
/// interleaved (re, im) doubles. A is m x k, B is k x n, C is m x n.
inline void zgemm(bool accumulate, std::size_t m, std::size_t n, std::size_t k,
                  const double* a, const double* b, double* c) {
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = c + i * 2 * n;
        if (!accumulate) std::memset(crow, 0, sizeof(double) * 2 * n);
        const double* arow = a + i * 2 * k;
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double are = arow[2 * kk];
            const double aim = arow[2 * kk + 1];
            if (are == 0.0 && aim == 0.0) continue;
            const double* brow = b + kk * 2 * n;
            for (std::size_t j = 0; j < n; ++j) {
                const double bre = brow[2 * j];
                const double bim = brow[2 * j + 1];
                crow[2 * j] += are * bre - aim * bim;
                crow[2 * j + 1] += are * bim + aim * bre;
            }
        }
    }
}

/// Mid-rise uniform quantizer. Cells are half-open on the left,
/// (t_{l-1}, t_l] with t_l = (l - 2^{b-1}) * step, so the level index is
/// ceil(x/step + 2^{b-1}) clamped to [1, 2^b].
inline void uniform_quantize(const double* x, double* y, std::size_t n,
                             double step, int bits) {
    const double offset = double(1 << (bits - 1));
    const double max_level = double(1 << bits);
    for (std::size_t i = 0; i < n; ++i) {
        double t = std::ceil(x[i] / step + offset);
        if (t < 1.0) t = 1.0;
        if (t > max_level) t = max_level;
        y[i] = (t - offset - 0.5) * step;
    }
}

/// 3x3 same-padded cross-correlation.
/// x: [h][w][cin], k: [3][3][cin][cout], bias: [cout], y: [h][w][cout].
template <class T>
void conv3x3_fwd(const T* x, int h, int w, int cin, const T* k, const T* bias,
                 int cout, T* y) {
    for (int oy = 0; oy < h; ++oy) {
        for (int ox = 0; ox < w; ++ox) {
            T* out = y + (std::size_t(oy) * w + ox) * cout;
            for (int co = 0; co < cout; ++co) out[co] = bias[co];
            for (int dy = -1; dy <= 1; ++dy) {
                const int iy = oy + dy;
                if (iy < 0 || iy >= h) continue;
                for (int dx = -1; dx <= 1; ++dx) {
                    const int ix = ox + dx;
                    if (ix < 0 || ix >= w) continue;
                    const T* in = x + (std::size_t(iy) * w + ix) * cin;
                    const T* kt = k + std::size_t((dy + 1) * 3 + (dx + 1)) * cin * cout;
                    for (int ci = 0; ci < cin; ++ci) {
                        const T v = in[ci];
                        const T* kr = kt + std::size_t(ci) * cout;
                        for (int co = 0; co < cout; ++co) out[co] += v * kr[co];
                    }
                }
            }
        }
    }
}

/// Backward pass of conv3x3_fwd. gx is overwritten; gk and gb are
/// accumulated into (callers zero them once per reduction chunk).
template <class T>
void conv3x3_bwd(const T* gy, const T* x, const T* k, int h, int w, int cin,
                 int cout, T* gx, T* gk, T* gb) {
    std::memset(gx, 0, sizeof(T) * std::size_t(h) * w * cin);
    for (int oy = 0; oy < h; ++oy) {
        for (int ox = 0; ox < w; ++ox) {
            const T* g = gy + (std::size_t(oy) * w + ox) * cout;
            for (int co = 0; co < cout; ++co) gb[co] += g[co];
            for (int dy = -1; dy <= 1; ++dy) {
                const int iy = oy + dy;
                if (iy < 0 || iy >= h) continue;
                for (int dx = -1; dx <= 1; ++dx) {
                    const int ix = ox + dx;
                    if (ix < 0 || ix >= w) continue;
                    const std::size_t tap = std::size_t((dy + 1) * 3 + (dx + 1)) * cin * cout;
                    const T* in = x + (std::size_t(iy) * w + ix) * cin;
                    T* gxp = gx + (std::size_t(iy) * w + ix) * cin;
                    for (int ci = 0; ci < cin; ++ci) {
                        const T v = in[ci];
                        const T* kr = k + tap + std::size_t(ci) * cout;
                        T* gkr = gk + tap + std::size_t(ci) * cout;
                        T s = T(0);
                        for (int co = 0; co < cout; ++co) {
                            gkr[co] += v * g[co];
                            s += kr[co] * g[co];
                        }
                        gxp[ci] += s;
                    }
                }
            }
        }
    }
}

/// y = W x + b with row-major W [n_out][n_in].
template <class T>
void dense_fwd(const T* x, const T* w, const T* bias, int n_out, int n_in, T* y) {
    for (int i = 0; i < n_out; ++i) {
        const T* wr = w + std::size_t(i) * n_in;
        T acc = bias[i];
        for (int j = 0; j < n_in; ++j) acc += wr[j] * x[j];
        y[i] = acc;
    }
}

/// gx is overwritten; gw and gb are accumulated into.
template <class T>
void dense_bwd(const T* gy, const T* x, const T* w, int n_out, int n_in,
               T* gx, T* gw, T* gb) {
    std::memset(gx, 0, sizeof(T) * std::size_t(n_in));
    for (int i = 0; i < n_out; ++i) {
        const T g = gy[i];
        gb[i] += g;
        const T* wr = w + std::size_t(i) * n_in;
        T* gwr = gw + std::size_t(i) * n_in;
        for (int j = 0; j < n_in; ++j) {
            gwr[j] += g * x[j];
            gx[j] += g * wr[j];
        }
    }
}

template <class T>
void relu_fwd(const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > T(0) ? x[i] : T(0);
}

template <class T>
void relu_bwd(const T* gy, const T* x, T* gx, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) gx[i] = x[i] > T(0) ? gy[i] : T(0);
}

/// One Adam update. inv_bc1/inv_bc2 are the bias-correction factors
/// 1/(1 - beta1^t) and 1/(1 - beta2^t) for the current step t.
template <class T>
void adam_step(T* p, T* m, T* v, const T* g, std::size_t n, T lr, T beta1,
               T beta2, T eps, T inv_bc1, T inv_bc2) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (T(1) - beta1) * g[i];
        v[i] = beta2 * v[i] + (T(1) - beta2) * g[i] * g[i];
        const T mhat = m[i] * inv_bc1;
        const T vhat = v[i] * inv_bc2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

inline double sumsq(const float* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += double(x[i]) * double(x[i]);
    return acc;
}

inline void scale_shift(const float* x, float* y, std::size_t n, float a, float b) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b;
}

} // namespace fdx::kern::ref
