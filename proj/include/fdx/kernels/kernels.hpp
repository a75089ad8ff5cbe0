#pragma once

#include <cstddef>

namespace fdx::kern {

/// Function table for the arithmetic inner loops. One scalar reference
/// table always exists; an AVX2 table is selected at runtime on capable
/// x86 hosts. Both tables implement identical contracts and are
/// equivalence-tested against each other.
struct KernelTable {
    const char* name;

    // Complex double, interleaved (re, im), packed row-major.
    void (*zgemm)(bool accumulate, std::size_t m, std::size_t n, std::size_t k,
                  const double* a, const double* b, double* c);

    void (*uniform_quantize)(const double* x, double* y, std::size_t n,
                             double step, int bits);

    // Single-precision NN kernels. Gradient buffers: gx is overwritten,
    // gk/gw/gb are accumulated into.
    void (*conv3x3_fwd)(const float* x, int h, int w, int cin, const float* k,
                        const float* bias, int cout, float* y);
    void (*conv3x3_bwd)(const float* gy, const float* x, const float* k, int h,
                        int w, int cin, int cout, float* gx, float* gk, float* gb);
    void (*dense_fwd)(const float* x, const float* w, const float* bias,
                      int n_out, int n_in, float* y);
    void (*dense_bwd)(const float* gy, const float* x, const float* w,
                      int n_out, int n_in, float* gx, float* gw, float* gb);
    void (*relu_fwd)(const float* x, float* y, std::size_t n);
    void (*relu_bwd)(const float* gy, const float* x, float* gx, std::size_t n);
    void (*adam_step)(float* p, float* m, float* v, const float* g, std::size_t n,
                      float lr, float beta1, float beta2, float eps,
                      float inv_bc1, float inv_bc2);
    double (*sumsq)(const float* x, std::size_t n);
    void (*scale_shift)(const float* x, float* y, std::size_t n, float a, float b);
};

const KernelTable& scalar_table();

/// AVX2+FMA table, or nullptr when the build or the host cannot run it.
const KernelTable* avx2_table();

/// Table picked once at startup. FDX_FORCE_SCALAR=1 forces the reference
/// table regardless of host capability.
const KernelTable& active();

} // namespace fdx::kern
