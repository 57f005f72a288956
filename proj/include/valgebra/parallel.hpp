#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace valgebra {

/// Worker-pool width: VALGEBRA_THREADS if set, hardware concurrency otherwise.
inline int worker_count() {
    if (const char* env = std::getenv("VALGEBRA_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {
inline thread_local bool inside_parallel_region = false;
}

/// Runs f(i) for i in [0, n). Work items are independent; results must be
/// written to pre-sized slots so the outcome does not depend on scheduling.
/// Nested calls run sequentially instead of oversubscribing.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    int workers = worker_count();
    if (workers <= 1 || n <= 1 || detail::inside_parallel_region) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto body = [&] {
        detail::inside_parallel_region = true;
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    int spawn = std::min<std::size_t>(workers, n);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace valgebra
