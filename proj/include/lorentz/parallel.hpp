#ifndef LORENTZ_PARALLEL_HPP
#define LORENTZ_PARALLEL_HPP

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <thread>
#include <vector>

namespace lorentz {

/// Worker count: LORENTZ_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
inline unsigned thread_count()
{
    if (const char* env = std::getenv("LORENTZ_THREADS")) {
        unsigned   v   = 0;
        const auto res = std::from_chars(env, env + std::strlen(env), v);
        if (res.ec == std::errc{} && v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(i) for i in [0, count) on up to thread_count() threads.
/// Work is split into contiguous ranges; results must be written to
/// per-index slots so that the outcome does not depend on scheduling.
/// The first exception thrown by any worker is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body&& body)
{
    const std::size_t workers = std::min<std::size_t>(thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread>        pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t lo = count * w / workers, hi = count * (w + 1) / workers;
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace lorentz

#endif
