#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace magcat {

/// Process-wide worker count used by grid evaluation and sweeps. 0 means
/// hardware concurrency.
void set_num_threads(int n);
int num_threads();

namespace detail {
/// Set inside pool workers so nested parallel_for calls run inline.
inline thread_local bool in_worker = false;
}  // namespace detail

/// Runs fn(i) for i in [0, n) on up to num_threads() workers. Each index is
/// visited exactly once; the first exception is rethrown after all workers
/// join. Callers write results into per-index slots so output order never
/// depends on scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(num_threads()), n);
    if (workers <= 1 || detail::in_worker) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            detail::in_worker = true;
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace magcat
