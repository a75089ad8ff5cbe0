#include "fdx/quantizer.hpp"

#include <cmath>

#include "fdx/errors.hpp"
#include "fdx/kernels/kernels.hpp"

namespace fdx::quant {

QuantizerSpec make_quantizer(int bits) {
    QuantizerSpec spec;
    spec.bits = bits;
    switch (bits) {
        case 1: spec.step = std::sqrt(8.0 / 3.141592653589793238462643); break;
        case 2: spec.step = 0.996; break;
        case 3: spec.step = 0.586; break;
        case 4: spec.step = 0.335; break;
        default:
            throw std::invalid_argument("make_quantizer: bits must be in {1,2,3,4}");
    }
    const int n_thresh = (1 << bits) - 1;
    const double offset = double(1 << (bits - 1));
    spec.thresholds.resize(std::size_t(n_thresh));
    for (int l = 1; l <= n_thresh; ++l)
        spec.thresholds[std::size_t(l - 1)] = (double(l) - offset) * spec.step;
    return spec;
}

double quantize_scalar(double r, const QuantizerSpec& spec) {
    double out;
    kern::active().uniform_quantize(&r, &out, 1, spec.step, spec.bits);
    return out;
}

ComplexMatrix quantize_matrix(const ComplexMatrix& y, const QuantizerSpec& spec) {
    ComplexMatrix out(y.rows(), y.cols());
    // Interleaved (re, im) layout lets one pass quantize both components.
    kern::active().uniform_quantize(reinterpret_cast<const double*>(y.data()),
                                    reinterpret_cast<double*>(out.data()),
                                    2 * y.size(), spec.step, spec.bits);
    return out;
}

ComplexMatrix sign_quantize(const ComplexMatrix& y) {
    ComplexMatrix out(y.rows(), y.cols());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const cplx v = y.data()[i];
        out.data()[i] = cplx(v.real() > 0.0 ? 1.0 : -1.0, v.imag() > 0.0 ? 1.0 : -1.0);
    }
    return out;
}

double estimate_distortion(const QuantizerSpec& spec, std::size_t n_samples,
                           RngStream& rng) {
    if (n_samples < 100000)
        throw std::invalid_argument("estimate_distortion: need >= 1e5 samples");
    double err = 0.0;
    double pow_in = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double r = rng.gaussian();
        const double q = quantize_scalar(r, spec);
        err += (q - r) * (q - r);
        pow_in += r * r;
    }
    return err / pow_in;
}

ComplexMatrix agc_quantize(const ComplexMatrix& y, const QuantizerSpec& spec,
                           double* gain_out) {
    const double ms = y.frobenius_norm_sq() / double(2 * y.size());
    if (!(ms > 0.0)) throw ZeroReference("agc_quantize: zero input");
    const double rms = std::sqrt(ms);
    ComplexMatrix scaled = y;
    scaled *= 1.0 / rms;
    ComplexMatrix q = quantize_matrix(scaled, spec);
    q *= rms;
    if (gain_out) *gain_out = 1.0 / rms;
    return q;
}

} // namespace fdx::quant
