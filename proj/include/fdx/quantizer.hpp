#pragma once

#include <vector>

#include "fdx/complex_matrix.hpp"
#include "fdx/rng.hpp"

namespace fdx::quant {

/// b-bit midrise uniform quantizer with the MSE-optimal step for a
/// unit-variance Gaussian input. Applied independently to real and
/// imaginary components.
struct QuantizerSpec {
    int bits = 1;
    double step = 0.0;
    std::vector<double> thresholds; ///< t_l = (-2^{b-1} + l) * step, l = 1..2^b-1
};

/// Builds the spec for b in {1, 2, 3, 4}; steps are sqrt(8/pi), 0.996,
/// 0.586 and 0.335 respectively.
QuantizerSpec make_quantizer(int bits);

/// Piecewise rule: r in (t_{l-1}, t_l] maps to t_l - step/2 (t_0 = -inf);
/// r above the top threshold saturates to (2^b - 1) * step / 2.
double quantize_scalar(double r, const QuantizerSpec& spec);

/// quantize_scalar applied to the real and imaginary part of every entry.
ComplexMatrix quantize_matrix(const ComplexMatrix& y, const QuantizerSpec& spec);

/// Element-wise signum of real and imaginary parts; entries in {+-1 +- j}.
ComplexMatrix sign_quantize(const ComplexMatrix& y);

/// Monte Carlo estimate of the distortion E||Q_b(r) - r||^2 / E||r||^2
/// over r ~ N(0, 1).
double estimate_distortion(const QuantizerSpec& spec, std::size_t n_samples,
                           RngStream& rng);

/// Automatic gain control wrapper used by the receive pipeline: divides Y
/// by the RMS of its real/imaginary components, quantizes, and scales
/// back. Returns the AGC gain through *gain_out when non-null.
ComplexMatrix agc_quantize(const ComplexMatrix& y, const QuantizerSpec& spec,
                           double* gain_out = nullptr);

} // namespace fdx::quant
