#pragma once

// Index-based worker pool for batch evaluations.
//
// Tasks are pure functions of their index; results land in a preallocated
// slot per index. Scheduling therefore never changes results, only wall
// clock: any RNG a task needs must be derived from its index up front.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace evolab::exp {

// Runs fn(0..count-1) on up to `workers` threads (>= 1). Rethrows the first
// task exception after all threads join.
inline void parallel_for_index(std::size_t count, int workers,
                               const std::function<void(std::size_t)>& fn) {
    if (workers < 1) throw std::invalid_argument("parallel_for_index: workers must be >= 1");
    if (count == 0) return;
    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    if (n_threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace evolab::exp
