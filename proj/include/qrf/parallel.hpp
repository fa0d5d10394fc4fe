#ifndef QRF_PARALLEL_HPP
#define QRF_PARALLEL_HPP

// Fan-out over independent parameter points.  Worker count defaults to the
// hardware concurrency, capped by the QRF_THREADS environment variable.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace qrf {

inline int worker_count(size_t tasks) {
    int n = int(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("QRF_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return int(std::min<size_t>(size_t(n), tasks));
}

// Runs fn(i) for i in [0, n); exceptions propagate from the first failing
// index.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    const int workers = worker_count(n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors;
    errors.resize(size_t(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[size_t(w)] = std::current_exception();
                next.store(n);
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace qrf

#endif
