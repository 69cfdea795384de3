#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace pseudoscore {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, count) across `threads` workers, chunked by a
/// shared atomic counter. fn must be safe to call concurrently for distinct
/// i; results keyed by i stay deterministic regardless of thread count.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn, std::size_t chunk = 16) {
    threads = resolve_threads(threads);
    if (threads <= 1 || count <= chunk) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= count) return;
            const std::size_t end = std::min(begin + chunk, count);
            for (std::size_t i = begin; i < end; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads) - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace pseudoscore
