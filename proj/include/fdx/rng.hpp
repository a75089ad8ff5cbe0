#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace fdx {

/// Counter-based random stream. Every draw is a pure function of
/// (seed, stream_id, counter), so parallel workers that own distinct
/// stream ids reproduce bit-identically regardless of scheduling or
/// thread count.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id) {
        std::uint64_t k = mix64(seed_ ^ 0xd3833e804f4c574bULL);
        base_ = mix64(k + stream_ * 0x9e3779b97f4a7c15ULL);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint64_t next_u64() {
        return mix64(base_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_open() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::size_t uniform_index(std::size_t n) { return std::size_t(next_u64() % n); }

    /// Standard real Gaussian N(0, 1).
    double gaussian() {
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Circularly-symmetric complex Gaussian CN(0, 1): unit total variance,
    /// real and imaginary parts each with variance 1/2.
    std::complex<double> complex_normal() {
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        const double phi = 6.283185307179586476925287 * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

private:
    // SplitMix64 finalizer.
    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

} // namespace fdx
