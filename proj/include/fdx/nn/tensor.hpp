#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "fdx/errors.hpp"

namespace fdx::nn {

/// Row-major dense tensor. Training runs the float instantiation; the
/// gradient checks run double.
template <class T>
struct TensorT {
    std::vector<std::int64_t> shape;
    std::vector<T> data;

    TensorT() = default;
    explicit TensorT(std::vector<std::int64_t> s) : shape(std::move(s)) {
        data.assign(std::size_t(numel(shape)), T(0));
    }

    static std::int64_t numel(const std::vector<std::int64_t>& s) {
        std::int64_t n = 1;
        for (auto d : s) n *= d;
        return n;
    }

    std::int64_t numel() const { return std::int64_t(data.size()); }

    bool same_shape(const TensorT& o) const { return shape == o.shape; }
};

using Tensor = TensorT<float>;

template <class T>
void require_shape(const TensorT<T>& t, const std::vector<std::int64_t>& s,
                   const char* what) {
    if (t.shape != s) throw ShapeMismatch(std::string(what) + ": unexpected shape");
}

} // namespace fdx::nn
