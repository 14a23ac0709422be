#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace qfames {

/// Worker count: QFAMES_WORKERS env var, else hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("QFAMES_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Chunked parallel loop over [0, n). Output slots must be disjoint per index.
/// The first exception thrown by any worker is rethrown on the caller.
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& body) {
    const int workers = std::min<std::int64_t>(worker_count(), n > 0 ? n : 1);
    if (workers <= 1 || n <= 1) {
        if (n > 0) body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, w, lo, hi] {
            try {
                body(lo, hi);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace qfames
