#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dockslim {

// Applies `work` to every index on up to `jobs` threads; results keep input order.
template <typename T>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, const std::function<T(std::size_t)>& work) {
    std::vector<T> out(n);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, jobs), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = work(i);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        out[i] = work(i);
                    } catch (...) {
                        const std::lock_guard lock(failure_mu);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

}  // namespace dockslim
