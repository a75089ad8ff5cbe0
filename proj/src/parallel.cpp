#include "fdx/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace fdx {

int default_threads() {
    if (const char* env = std::getenv("FDXLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

void parallel_chunks(std::size_t n, int n_chunks,
                     const std::function<void(std::size_t, std::size_t, int)>& fn) {
    if (n_chunks < 1) n_chunks = 1;
    if (n == 0) return;
    if (std::size_t(n_chunks) > n) n_chunks = int(n);

    const std::size_t base = n / std::size_t(n_chunks);
    const std::size_t rem = n % std::size_t(n_chunks);

    if (n_chunks == 1) {
        fn(0, n, 0);
        return;
    }

    std::vector<std::thread> workers;
    workers.reserve(std::size_t(n_chunks));
    std::size_t begin = 0;
    for (int c = 0; c < n_chunks; ++c) {
        const std::size_t len = base + (std::size_t(c) < rem ? 1 : 0);
        const std::size_t end = begin + len;
        workers.emplace_back([&fn, begin, end, c] { fn(begin, end, c); });
        begin = end;
    }
    for (auto& w : workers) w.join();
}

} // namespace fdx
