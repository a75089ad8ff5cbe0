#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdx/kernels/kernels.hpp"
#include "fdx/rng.hpp"

using fdx::RngStream;
using fdx::kern::KernelTable;

namespace {

std::vector<float> random_f32(RngStream& rng, std::size_t n, double scale = 1.0) {
    std::vector<float> v(n);
    for (auto& x : v) x = float(scale * rng.gaussian());
    return v;
}

std::vector<double> random_f64(RngStream& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.gaussian();
    return v;
}

double max_rel_diff(const std::vector<float>& a, const std::vector<float>& b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max(1.0, std::abs(double(b[i])));
        worst = std::max(worst, std::abs(double(a[i]) - double(b[i])) / denom);
    }
    return worst;
}

} // namespace

// Every case below is a no-op unless the host actually dispatches AVX2;
// on such hosts the SIMD table must reproduce the scalar reference.
TEST_CASE("avx2 zgemm matches scalar reference") {
    const KernelTable* simd = fdx::kern::avx2_table();
    if (!simd) return;
    const KernelTable& ref = fdx::kern::scalar_table();
    RngStream rng(7, 1);
    for (auto [m, n, k] : {std::tuple<int, int, int>{1, 1, 1},
                           {3, 5, 4},
                           {8, 7, 9},
                           {16, 24, 16},
                           {13, 2, 31}}) {
        const auto a = random_f64(rng, std::size_t(2 * m * k));
        const auto b = random_f64(rng, std::size_t(2 * k * n));
        std::vector<double> c1(std::size_t(2 * m * n), 0.5);
        std::vector<double> c2 = c1;
        ref.zgemm(false, m, n, k, a.data(), b.data(), c1.data());
        simd->zgemm(false, m, n, k, a.data(), b.data(), c2.data());
        for (std::size_t i = 0; i < c1.size(); ++i)
            CHECK(c1[i] == doctest::Approx(c2[i]).epsilon(1e-12));
        // Accumulating form.
        ref.zgemm(true, m, n, k, a.data(), b.data(), c1.data());
        simd->zgemm(true, m, n, k, a.data(), b.data(), c2.data());
        for (std::size_t i = 0; i < c1.size(); ++i)
            CHECK(c1[i] == doctest::Approx(c2[i]).epsilon(1e-12));
    }
}

TEST_CASE("avx2 uniform quantizer is bit-identical to scalar") {
    const KernelTable* simd = fdx::kern::avx2_table();
    if (!simd) return;
    const KernelTable& ref = fdx::kern::scalar_table();
    RngStream rng(7, 2);
    for (int bits : {1, 2, 3, 4}) {
        const double step = 1.0 / double(bits);
        auto x = random_f64(rng, 1001);
        x.push_back(0.0);
        x.push_back(step);   // exactly on a threshold
        x.push_back(-step);
        std::vector<double> y1(x.size()), y2(x.size());
        ref.uniform_quantize(x.data(), y1.data(), x.size(), step, bits);
        simd->uniform_quantize(x.data(), y2.data(), x.size(), step, bits);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(y1[i] == y2[i]);
    }
}

TEST_CASE("avx2 conv3x3 forward/backward match scalar reference") {
    const KernelTable* simd = fdx::kern::avx2_table();
    if (!simd) return;
    const KernelTable& ref = fdx::kern::scalar_table();
    RngStream rng(7, 3);
    for (auto [h, w, cin, cout] : {std::tuple<int, int, int, int>{4, 5, 2, 3},
                                   {8, 8, 2, 64},
                                   {6, 4, 64, 64},
                                   {5, 5, 64, 2},
                                   {1, 1, 3, 9}}) {
        const std::size_t xs = std::size_t(h) * w * cin;
        const std::size_t ks = std::size_t(9) * cin * cout;
        const std::size_t ys = std::size_t(h) * w * cout;
        const auto x = random_f32(rng, xs);
        const auto k = random_f32(rng, ks, 0.2);
        const auto b = random_f32(rng, std::size_t(cout));
        std::vector<float> y1(ys), y2(ys);
        ref.conv3x3_fwd(x.data(), h, w, cin, k.data(), b.data(), cout, y1.data());
        simd->conv3x3_fwd(x.data(), h, w, cin, k.data(), b.data(), cout, y2.data());
        CHECK(max_rel_diff(y2, y1) < 2e-5);

        const auto gy = random_f32(rng, ys);
        std::vector<float> gx1(xs), gk1(ks, 0.25f), gb1(std::size_t(cout), 0.25f);
        std::vector<float> gx2(xs), gk2 = gk1, gb2 = gb1;
        ref.conv3x3_bwd(gy.data(), x.data(), k.data(), h, w, cin, cout, gx1.data(),
                        gk1.data(), gb1.data());
        simd->conv3x3_bwd(gy.data(), x.data(), k.data(), h, w, cin, cout, gx2.data(),
                          gk2.data(), gb2.data());
        CHECK(max_rel_diff(gx2, gx1) < 2e-5);
        CHECK(max_rel_diff(gk2, gk1) < 2e-5);
        CHECK(max_rel_diff(gb2, gb1) < 2e-5);
    }
}

TEST_CASE("avx2 dense forward/backward match scalar reference") {
    const KernelTable* simd = fdx::kern::avx2_table();
    if (!simd) return;
    const KernelTable& ref = fdx::kern::scalar_table();
    RngStream rng(7, 4);
    for (auto [n_out, n_in] : {std::pair<int, int>{1, 1}, {3, 17}, {128, 32}, {16, 256}}) {
        const auto x = random_f32(rng, std::size_t(n_in));
        const auto w = random_f32(rng, std::size_t(n_out) * n_in, 0.3);
        const auto b = random_f32(rng, std::size_t(n_out));
        std::vector<float> y1(std::size_t(n_out), 0.0f), y2(std::size_t(n_out), 0.0f);
        ref.dense_fwd(x.data(), w.data(), b.data(), n_out, n_in, y1.data());
        simd->dense_fwd(x.data(), w.data(), b.data(), n_out, n_in, y2.data());
        CHECK(max_rel_diff(y2, y1) < 2e-5);

        const auto gy = random_f32(rng, std::size_t(n_out));
        std::vector<float> gx1(std::size_t(n_in), 0.0f), gw1(w.size(), 0.5f),
            gb1(std::size_t(n_out), 0.5f);
        std::vector<float> gx2(std::size_t(n_in), 0.0f), gw2 = gw1, gb2 = gb1;
        ref.dense_bwd(gy.data(), x.data(), w.data(), n_out, n_in, gx1.data(),
                      gw1.data(), gb1.data());
        simd->dense_bwd(gy.data(), x.data(), w.data(), n_out, n_in, gx2.data(),
                        gw2.data(), gb2.data());
        CHECK(max_rel_diff(gx2, gx1) < 2e-5);
        CHECK(max_rel_diff(gw2, gw1) < 2e-5);
        CHECK(max_rel_diff(gb2, gb1) < 2e-5);
    }
}

TEST_CASE("avx2 elementwise kernels match scalar reference") {
    const KernelTable* simd = fdx::kern::avx2_table();
    if (!simd) return;
    const KernelTable& ref = fdx::kern::scalar_table();
    RngStream rng(7, 5);
    const std::size_t n = 1003;
    const auto x = random_f32(rng, n);
    const auto g = random_f32(rng, n);

    std::vector<float> a(n), b(n);
    ref.relu_fwd(x.data(), a.data(), n);
    simd->relu_fwd(x.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);

    ref.relu_bwd(g.data(), x.data(), a.data(), n);
    simd->relu_bwd(g.data(), x.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);

    ref.scale_shift(x.data(), a.data(), n, 1.5f, -0.25f);
    simd->scale_shift(x.data(), b.data(), n, 1.5f, -0.25f);
    CHECK(max_rel_diff(b, a) < 1e-6);

    CHECK(ref.sumsq(x.data(), n) ==
          doctest::Approx(simd->sumsq(x.data(), n)).epsilon(1e-9));

    std::vector<float> p1 = random_f32(rng, n), p2 = p1;
    std::vector<float> m1(n, 0.0f), m2(n, 0.0f), v1(n, 0.0f), v2(n, 0.0f);
    ref.adam_step(p1.data(), m1.data(), v1.data(), g.data(), n, 1e-3f, 0.9f, 0.999f,
                  1e-8f, 10.0f, 1000.0f);
    simd->adam_step(p2.data(), m2.data(), v2.data(), g.data(), n, 1e-3f, 0.9f, 0.999f,
                    1e-8f, 10.0f, 1000.0f);
    CHECK(max_rel_diff(p2, p1) < 1e-5);
    CHECK(max_rel_diff(m2, m1) < 1e-5);
    CHECK(max_rel_diff(v2, v1) < 1e-5);
}

TEST_CASE("active table dispatch honours FDX_FORCE_SCALAR") {
    // The active table is one of the two known tables.
    const KernelTable& act = fdx::kern::active();
    const bool is_scalar = &act == &fdx::kern::scalar_table();
    const bool is_avx2 = fdx::kern::avx2_table() && &act == fdx::kern::avx2_table();
    CHECK((is_scalar || is_avx2));
}
