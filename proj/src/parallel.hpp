#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace signrel::detail {

inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(k) for k in [0, n) on up to `workers` threads. Work items are
/// claimed dynamically; the first exception is rethrown after all threads join.
template <typename Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
    workers = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) body(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n; k = next++) {
                    try {
                        body(k);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        next = n;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace signrel::detail
