#ifndef NIL3_PARALLEL_HPP
#define NIL3_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace nil3 {

/// Worker cap: hardware concurrency clamped by the NIL3_THREADS environment
/// variable (values < 1 mean 1).
inline int thread_count() {
    static const int cached = [] {
        int n = int(std::thread::hardware_concurrency());
        if (n < 1)
            n = 1;
        if (const char* env = std::getenv("NIL3_THREADS")) {
            const int cap = std::atoi(env);
            if (cap >= 1 && cap < n)
                n = cap;
        }
        return n;
    }();
    return cached;
}

/// Applies fn(begin, end, chunk_index) over fixed-size chunks of [0, n) and
/// returns the per-chunk results indexed by chunk. The chunk decomposition
/// does not depend on the worker count, so reductions that combine the
/// results in chunk order are bit-reproducible under any thread setting.
template <typename T, typename Fn>
std::vector<T> map_chunks(std::size_t n, std::size_t chunk_size, Fn&& fn) {
    const std::size_t nchunks = chunk_size ? (n + chunk_size - 1) / chunk_size : 0;
    std::vector<T> results(nchunks);
    if (nchunks == 0)
        return results;
    const int workers = std::min<std::size_t>(thread_count(), nchunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            results[c] = fn(c * chunk_size, std::min(n, (c + 1) * chunk_size), c);
        return results;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= nchunks)
                return;
            results[c] = fn(c * chunk_size, std::min(n, (c + 1) * chunk_size), c);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();
    return results;
}

}  // namespace nil3

#endif  // NIL3_PARALLEL_HPP
