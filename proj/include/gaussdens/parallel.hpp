#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace gaussdens {

/// Worker count for data-parallel loops; capped by the GAUSSDENS_THREADS
/// environment variable.
int worker_count();

/// Run fn(i) for i in [0, n). Work items must be independent; callers are
/// responsible for writing results to distinct slots so that reductions stay
/// deterministic.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                    if (failed.load()) return;
                    fn(i);
                }
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace gaussdens
