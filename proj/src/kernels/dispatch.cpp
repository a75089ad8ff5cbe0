#include "fdx/kernels/kernels.hpp"

#include <cstdlib>

namespace fdx::kern {

// Defined in kernels_avx2.cpp (returns nullptr when compiled out).
const KernelTable* avx2_table_impl();

const KernelTable* avx2_table() {
#if defined(FDX_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    static const bool host_ok =
        __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return host_ok ? avx2_table_impl() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable* chosen = [] {
        if (const char* env = std::getenv("FDX_FORCE_SCALAR");
            env && env[0] == '1')
            return &scalar_table();
        if (const KernelTable* t = avx2_table()) return t;
        return &scalar_table();
    }();
    return *chosen;
}

} // namespace fdx::kern
