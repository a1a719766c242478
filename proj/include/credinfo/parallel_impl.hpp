#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace credinfo {

template <class Body>
void for_each_block(std::size_t n_items, unsigned workers, Body&& body) {
    const std::size_t n_blocks = (n_items + kPathsPerBlock - 1) / kPathsPerBlock;
    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n_blocks, 1)));

    auto run_block = [&](std::size_t block) {
        const std::size_t first = block * kPathsPerBlock;
        const std::size_t last = std::min(n_items, first + kPathsPerBlock);
        body(block, first, last);
    };

    if (n_threads <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t b = next++; b < n_blocks; b = next++) {
                try {
                    run_block(b);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = n_blocks;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace credinfo
