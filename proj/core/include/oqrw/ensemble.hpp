#pragma once

#include <cstddef>
#include <thread>
#include <vector>
#include <atomic>
#include <functional>

namespace oqrw {

/// Runs fn(i) for i in [0, n) on up to n_threads workers. Work is handed out
/// in fixed-size index blocks so the assignment of items to blocks (and thus
/// any per-item output written by fn) is independent of the thread count;
/// reductions over per-item slots stay deterministic.
inline void parallel_for_indexed(std::size_t n, unsigned n_threads,
                                 const std::function<void(std::size_t)>& fn) {
    constexpr std::size_t kBlock = 64;
    if (n == 0) return;
    if (n_threads == 0) n_threads = 1;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw != 0 && n_threads > hw) n_threads = hw;
    std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    if (n_threads <= 1 || n_blocks == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            std::size_t lo = b * kBlock;
            std::size_t hi = std::min(lo + kBlock, n);
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace oqrw
