// AVX2+FMA variants of the kernel table. This translation unit is compiled
// with -mavx2 -mfma and must only be entered after a runtime cpuid check
// (see dispatch.cpp). Contracts match the reference implementations in
// ref_ops.hpp exactly; equivalence is enforced by tests/test_kernels.cpp.

#include "fdx/kernels/kernels.hpp"

#ifdef FDX_HAVE_AVX2

#include <immintrin.h>

#include <cmath>
#include <cstring>

namespace fdx::kern {
namespace {

inline float hsum8(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    lo = _mm_add_ps(lo, _mm_movehl_ps(lo, lo));
    lo = _mm_add_ss(lo, _mm_shuffle_ps(lo, lo, 0x1));
    return _mm_cvtss_f32(lo);
}

void zgemm_avx2(bool accumulate, std::size_t m, std::size_t n, std::size_t k,
                const double* a, const double* b, double* c) {
    const std::size_t n2 = 2 * n;
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = c + i * n2;
        if (!accumulate) std::memset(crow, 0, sizeof(double) * n2);
        const double* arow = a + i * 2 * k;
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double are = arow[2 * kk];
            const double aim = arow[2 * kk + 1];
            if (are == 0.0 && aim == 0.0) continue;
            const double* brow = b + kk * n2;
            const __m256d vre = _mm256_set1_pd(are);
            const __m256d vim = _mm256_set1_pd(aim);
            std::size_t j = 0;
            // Two complex entries per 256-bit vector.
            for (; j + 4 <= n2; j += 4) {
                __m256d bv = _mm256_loadu_pd(brow + j);
                __m256d cv = _mm256_loadu_pd(crow + j);
                __m256d bs = _mm256_shuffle_pd(bv, bv, 0x5);
                cv = _mm256_fmadd_pd(vre, bv, cv);
                __m256d t = _mm256_mul_pd(vim, bs);
                cv = _mm256_addsub_pd(cv, t);
                _mm256_storeu_pd(crow + j, cv);
            }
            for (; j < n2; j += 2) {
                const double bre = brow[j];
                const double bim = brow[j + 1];
                crow[j] += are * bre - aim * bim;
                crow[j + 1] += are * bim + aim * bre;
            }
        }
    }
}

void uniform_quantize_avx2(const double* x, double* y, std::size_t n,
                           double step, int bits) {
    const double offset = double(1 << (bits - 1));
    const double max_level = double(1 << bits);
    const __m256d vstep = _mm256_set1_pd(step);
    const __m256d voff = _mm256_set1_pd(offset);
    const __m256d vone = _mm256_set1_pd(1.0);
    const __m256d vmax = _mm256_set1_pd(max_level);
    const __m256d vhalf = _mm256_set1_pd(offset + 0.5);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        __m256d t = _mm256_ceil_pd(_mm256_add_pd(_mm256_div_pd(v, vstep), voff));
        t = _mm256_max_pd(t, vone);
        t = _mm256_min_pd(t, vmax);
        _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_sub_pd(t, vhalf), vstep));
    }
    for (; i < n; ++i) {
        double t = std::ceil(x[i] / step + offset);
        if (t < 1.0) t = 1.0;
        if (t > max_level) t = max_level;
        y[i] = (t - offset - 0.5) * step;
    }
}

// Specialized 64-output-channel conv body: eight register accumulators.
inline void conv_fwd_pixel64(const float* x, int h, int w, int cin, const float* k,
                             const float* bias, float* out, int oy, int ox) {
    __m256 a0 = _mm256_loadu_ps(bias);
    __m256 a1 = _mm256_loadu_ps(bias + 8);
    __m256 a2 = _mm256_loadu_ps(bias + 16);
    __m256 a3 = _mm256_loadu_ps(bias + 24);
    __m256 a4 = _mm256_loadu_ps(bias + 32);
    __m256 a5 = _mm256_loadu_ps(bias + 40);
    __m256 a6 = _mm256_loadu_ps(bias + 48);
    __m256 a7 = _mm256_loadu_ps(bias + 56);
    for (int dy = -1; dy <= 1; ++dy) {
        const int iy = oy + dy;
        if (iy < 0 || iy >= h) continue;
        for (int dx = -1; dx <= 1; ++dx) {
            const int ix = ox + dx;
            if (ix < 0 || ix >= w) continue;
            const float* in = x + (std::size_t(iy) * w + ix) * cin;
            const float* kt = k + std::size_t((dy + 1) * 3 + (dx + 1)) * cin * 64;
            for (int ci = 0; ci < cin; ++ci) {
                const __m256 v = _mm256_set1_ps(in[ci]);
                const float* kr = kt + std::size_t(ci) * 64;
                a0 = _mm256_fmadd_ps(v, _mm256_loadu_ps(kr), a0);
                a1 = _mm256_fmadd_ps(v, _mm256_loadu_ps(kr + 8), a1);
                a2 = _mm256_fmadd_ps(v, _mm256_loadu_ps(kr + 16), a2);
                a3 = _mm256_fmadd_ps(v, _mm256_loadu_ps(kr + 24), a3);
                a4 = _mm256_fmadd_ps(v, _mm256_loadu_ps(kr + 32), a4);
                a5 = _mm256_fmadd_ps(v, _mm256_loadu_ps(kr + 40), a5);
                a6 = _mm256_fmadd_ps(v, _mm256_loadu_ps(kr + 48), a6);
                a7 = _mm256_fmadd_ps(v, _mm256_loadu_ps(kr + 56), a7);
            }
        }
    }
    _mm256_storeu_ps(out, a0);
    _mm256_storeu_ps(out + 8, a1);
    _mm256_storeu_ps(out + 16, a2);
    _mm256_storeu_ps(out + 24, a3);
    _mm256_storeu_ps(out + 32, a4);
    _mm256_storeu_ps(out + 40, a5);
    _mm256_storeu_ps(out + 48, a6);
    _mm256_storeu_ps(out + 56, a7);
}

void conv3x3_fwd_avx2(const float* x, int h, int w, int cin, const float* k,
                      const float* bias, int cout, float* y) {
    for (int oy = 0; oy < h; ++oy) {
        for (int ox = 0; ox < w; ++ox) {
            float* out = y + (std::size_t(oy) * w + ox) * cout;
            if (cout == 64) {
                conv_fwd_pixel64(x, h, w, cin, k, bias, out, oy, ox);
                continue;
            }
            int co0 = 0;
            for (; co0 + 8 <= cout; co0 += 8) {
                __m256 acc = _mm256_loadu_ps(bias + co0);
                for (int dy = -1; dy <= 1; ++dy) {
                    const int iy = oy + dy;
                    if (iy < 0 || iy >= h) continue;
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int ix = ox + dx;
                        if (ix < 0 || ix >= w) continue;
                        const float* in = x + (std::size_t(iy) * w + ix) * cin;
                        const float* kt =
                            k + std::size_t((dy + 1) * 3 + (dx + 1)) * cin * cout;
                        for (int ci = 0; ci < cin; ++ci) {
                            acc = _mm256_fmadd_ps(_mm256_set1_ps(in[ci]),
                                                  _mm256_loadu_ps(kt + std::size_t(ci) * cout + co0),
                                                  acc);
                        }
                    }
                }
                _mm256_storeu_ps(out + co0, acc);
            }
            for (; co0 < cout; ++co0) {
                float acc = bias[co0];
                for (int dy = -1; dy <= 1; ++dy) {
                    const int iy = oy + dy;
                    if (iy < 0 || iy >= h) continue;
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int ix = ox + dx;
                        if (ix < 0 || ix >= w) continue;
                        const float* in = x + (std::size_t(iy) * w + ix) * cin;
                        const float* kt =
                            k + std::size_t((dy + 1) * 3 + (dx + 1)) * cin * cout;
                        for (int ci = 0; ci < cin; ++ci)
                            acc += in[ci] * kt[std::size_t(ci) * cout + co0];
                    }
                }
                out[co0] = acc;
            }
        }
    }
}

void conv3x3_bwd_avx2(const float* gy, const float* x, const float* k, int h,
                      int w, int cin, int cout, float* gx, float* gk, float* gb) {
    std::memset(gx, 0, sizeof(float) * std::size_t(h) * w * cin);
    const int cblk = cout & ~7;
    for (int oy = 0; oy < h; ++oy) {
        for (int ox = 0; ox < w; ++ox) {
            const float* g = gy + (std::size_t(oy) * w + ox) * cout;
            for (int co = 0; co < cblk; co += 8) {
                __m256 gv = _mm256_loadu_ps(g + co);
                _mm256_storeu_ps(gb + co, _mm256_add_ps(_mm256_loadu_ps(gb + co), gv));
            }
            for (int co = cblk; co < cout; ++co) gb[co] += g[co];
            for (int dy = -1; dy <= 1; ++dy) {
                const int iy = oy + dy;
                if (iy < 0 || iy >= h) continue;
                for (int dx = -1; dx <= 1; ++dx) {
                    const int ix = ox + dx;
                    if (ix < 0 || ix >= w) continue;
                    const std::size_t tap =
                        std::size_t((dy + 1) * 3 + (dx + 1)) * cin * cout;
                    const float* in = x + (std::size_t(iy) * w + ix) * cin;
                    float* gxp = gx + (std::size_t(iy) * w + ix) * cin;
                    for (int ci = 0; ci < cin; ++ci) {
                        const __m256 v = _mm256_set1_ps(in[ci]);
                        const float* kr = k + tap + std::size_t(ci) * cout;
                        float* gkr = gk + tap + std::size_t(ci) * cout;
                        __m256 sv = _mm256_setzero_ps();
                        for (int co = 0; co < cblk; co += 8) {
                            const __m256 gvec = _mm256_loadu_ps(g + co);
                            _mm256_storeu_ps(gkr + co,
                                             _mm256_fmadd_ps(v, gvec, _mm256_loadu_ps(gkr + co)));
                            sv = _mm256_fmadd_ps(_mm256_loadu_ps(kr + co), gvec, sv);
                        }
                        float s = hsum8(sv);
                        for (int co = cblk; co < cout; ++co) {
                            gkr[co] += in[ci] * g[co];
                            s += kr[co] * g[co];
                        }
                        gxp[ci] += s;
                    }
                }
            }
        }
    }
}

void dense_fwd_avx2(const float* x, const float* w, const float* bias, int n_out,
                    int n_in, float* y) {
    const int blk = n_in & ~7;
    for (int i = 0; i < n_out; ++i) {
        const float* wr = w + std::size_t(i) * n_in;
        __m256 acc = _mm256_setzero_ps();
        for (int j = 0; j < blk; j += 8)
            acc = _mm256_fmadd_ps(_mm256_loadu_ps(wr + j), _mm256_loadu_ps(x + j), acc);
        float s = bias[i] + hsum8(acc);
        for (int j = blk; j < n_in; ++j) s += wr[j] * x[j];
        y[i] = s;
    }
}

void dense_bwd_avx2(const float* gy, const float* x, const float* w, int n_out,
                    int n_in, float* gx, float* gw, float* gb) {
    std::memset(gx, 0, sizeof(float) * std::size_t(n_in));
    const int blk = n_in & ~7;
    for (int i = 0; i < n_out; ++i) {
        const float g = gy[i];
        gb[i] += g;
        const __m256 gv = _mm256_set1_ps(g);
        const float* wr = w + std::size_t(i) * n_in;
        float* gwr = gw + std::size_t(i) * n_in;
        for (int j = 0; j < blk; j += 8) {
            _mm256_storeu_ps(gwr + j,
                             _mm256_fmadd_ps(gv, _mm256_loadu_ps(x + j), _mm256_loadu_ps(gwr + j)));
            _mm256_storeu_ps(gx + j,
                             _mm256_fmadd_ps(gv, _mm256_loadu_ps(wr + j), _mm256_loadu_ps(gx + j)));
        }
        for (int j = blk; j < n_in; ++j) {
            gwr[j] += g * x[j];
            gx[j] += g * wr[j];
        }
    }
}

void relu_fwd_avx2(const float* x, float* y, std::size_t n) {
    const __m256 z = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(y + i, _mm256_max_ps(_mm256_loadu_ps(x + i), z));
    for (; i < n; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void relu_bwd_avx2(const float* gy, const float* x, float* gx, std::size_t n) {
    const __m256 z = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 mask = _mm256_cmp_ps(_mm256_loadu_ps(x + i), z, _CMP_GT_OQ);
        _mm256_storeu_ps(gx + i, _mm256_and_ps(_mm256_loadu_ps(gy + i), mask));
    }
    for (; i < n; ++i) gx[i] = x[i] > 0.0f ? gy[i] : 0.0f;
}

void adam_step_avx2(float* p, float* m, float* v, const float* g, std::size_t n,
                    float lr, float beta1, float beta2, float eps, float inv_bc1,
                    float inv_bc2) {
    const __m256 vb1 = _mm256_set1_ps(beta1);
    const __m256 vb2 = _mm256_set1_ps(beta2);
    const __m256 v1mb1 = _mm256_set1_ps(1.0f - beta1);
    const __m256 v1mb2 = _mm256_set1_ps(1.0f - beta2);
    const __m256 vlr = _mm256_set1_ps(lr);
    const __m256 veps = _mm256_set1_ps(eps);
    const __m256 vc1 = _mm256_set1_ps(inv_bc1);
    const __m256 vc2 = _mm256_set1_ps(inv_bc2);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 gv = _mm256_loadu_ps(g + i);
        __m256 mv = _mm256_fmadd_ps(vb1, _mm256_loadu_ps(m + i), _mm256_mul_ps(v1mb1, gv));
        __m256 vv = _mm256_fmadd_ps(vb2, _mm256_loadu_ps(v + i),
                                    _mm256_mul_ps(v1mb2, _mm256_mul_ps(gv, gv)));
        _mm256_storeu_ps(m + i, mv);
        _mm256_storeu_ps(v + i, vv);
        const __m256 mhat = _mm256_mul_ps(mv, vc1);
        const __m256 vhat = _mm256_mul_ps(vv, vc2);
        const __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(vhat), veps);
        const __m256 upd = _mm256_div_ps(_mm256_mul_ps(vlr, mhat), denom);
        _mm256_storeu_ps(p + i, _mm256_sub_ps(_mm256_loadu_ps(p + i), upd));
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0f - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0f - beta2) * g[i] * g[i];
        const float mhat = m[i] * inv_bc1;
        const float vhat = v[i] * inv_bc2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

double sumsq_avx2(const float* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 v = _mm256_loadu_ps(x + i);
        const __m256d lo = _mm256_cvtps_pd(_mm256_castps256_ps128(v));
        const __m256d hi = _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1));
        acc0 = _mm256_fmadd_pd(lo, lo, acc0);
        acc1 = _mm256_fmadd_pd(hi, hi, acc1);
    }
    const __m256d s = _mm256_add_pd(acc0, acc1);
    alignas(32) double buf[4];
    _mm256_store_pd(buf, s);
    double total = buf[0] + buf[1] + buf[2] + buf[3];
    for (; i < n; ++i) total += double(x[i]) * double(x[i]);
    return total;
}

void scale_shift_avx2(const float* x, float* y, std::size_t n, float a, float b) {
    const __m256 va = _mm256_set1_ps(a);
    const __m256 vb = _mm256_set1_ps(b);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(y + i, _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), vb));
    for (; i < n; ++i) y[i] = a * x[i] + b;
}

} // namespace

const KernelTable* avx2_table_impl() {
    static const KernelTable table = {
        "avx2",
        &zgemm_avx2,
        &uniform_quantize_avx2,
        &conv3x3_fwd_avx2,
        &conv3x3_bwd_avx2,
        &dense_fwd_avx2,
        &dense_bwd_avx2,
        &relu_fwd_avx2,
        &relu_bwd_avx2,
        &adam_step_avx2,
        &sumsq_avx2,
        &scale_shift_avx2,
    };
    return &table;
}

} // namespace fdx::kern

#else

namespace fdx::kern {
const KernelTable* avx2_table_impl() { return nullptr; }
} // namespace fdx::kern

#endif // FDX_HAVE_AVX2
