#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sl2lab {

inline int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Static contiguous partition of [0, n). Each worker writes to disjoint,
// index-addressed output, so results do not depend on scheduling. The first
// exception raised by a worker is rethrown on the calling thread.
template <typename Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        fn(std::size_t{0}, n);
        return;
    }
    const std::size_t t = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(t);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t k = 0; k < t; ++k) {
        const std::size_t lo = n * k / t, hi = n * (k + 1) / t;
        pool.emplace_back([&fn, &error, &error_mutex, lo, hi] {
            try {
                fn(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace sl2lab
