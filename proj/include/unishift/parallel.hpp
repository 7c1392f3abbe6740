#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace unishift {

// Run fn(index) for index in [0, count) on up to `threads` workers. Work is
// split by contiguous index ranges; results must be written to per-index
// slots so the outcome does not depend on the thread count.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (n_threads == 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    const std::size_t chunk = (count + static_cast<std::size_t>(n_threads) - 1) /
                              static_cast<std::size_t>(n_threads);
    for (int t = 0; t < n_threads; ++t) {
        const std::size_t lo = static_cast<std::size_t>(t) * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t k = lo; k < hi; ++k) fn(k);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace unishift
