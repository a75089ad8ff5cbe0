#pragma once

#include <cstddef>
#include <functional>

namespace fdx {

/// Number of worker threads to use by default: FDXLAB_THREADS when set,
/// otherwise the hardware concurrency.
int default_threads();

/// Splits [0, n) into exactly n_chunks contiguous ranges and runs
/// fn(begin, end, chunk_index) for each, using up to n_chunks threads.
/// The chunk layout depends only on (n, n_chunks), never on the machine,
/// so callers that reduce per-chunk results in chunk order stay
/// deterministic for a fixed configuration.
void parallel_chunks(std::size_t n, int n_chunks,
                     const std::function<void(std::size_t, std::size_t, int)>& fn);

} // namespace fdx
