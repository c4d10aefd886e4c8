#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ncstune {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads (jobs <= 0 means one
/// per hardware thread). Each index is claimed exactly once; callers write
/// results into per-index slots, so the outcome cannot depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    int workers = jobs > 0 ? jobs
                           : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (static_cast<std::size_t>(workers) > n) workers = static_cast<int>(n);

    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace ncstune
