#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stein {

/// Worker count: explicit request if > 0, else STEIN_THREADS, else hardware concurrency.
int resolve_worker_count(int requested = 0);

/// Runs body(state, batch) for batch = 0..n_batches-1 on up to `workers` threads, each
/// thread owning one state from make_state(). Results must be written per batch by the
/// body; the assignment of batches to threads is unspecified, so merged output must
/// not depend on it. The first exception thrown by any body is rethrown.
template <class MakeState, class Body>
void parallel_for_batches(int n_batches, int workers, MakeState make_state, Body body) {
    workers = std::max(1, std::min(workers, n_batches));
    if (workers == 1) {
        auto state = make_state();
        for (int b = 0; b < n_batches; ++b) body(state, b);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                auto state = make_state();
                for (int b = next++; b < n_batches; b = next++) body(state, b);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n_batches;
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace stein
