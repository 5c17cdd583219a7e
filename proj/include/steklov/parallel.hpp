// steklov/parallel.hpp — deterministic work partitioning. Chunk boundaries
// depend only on (item count, worker count); callers combine per-chunk
// results in chunk order, so output never depends on scheduling.

#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace steklov {

inline int resolve_workers(int requested) {
    if (requested < 1) return 1;
    if (requested > 256) return 256;
    return requested;
}

// Runs fn(chunk_index, begin, end) over a contiguous partition of [0, count).
// With one worker (or one item) everything runs inline on the calling thread.
template <class Fn>
void run_chunked(std::int64_t count, int workers, Fn&& fn) {
    if (count <= 0) return;
    workers = resolve_workers(workers);
    if (static_cast<std::int64_t>(workers) > count) workers = static_cast<int>(count);
    const std::int64_t base = count / workers;
    const std::int64_t extra = count % workers;
    auto chunk_begin = [&](int w) {
        return static_cast<std::int64_t>(w) * base + std::min<std::int64_t>(w, extra);
    };
    if (workers == 1) {
        fn(0, static_cast<std::int64_t>(0), count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] { fn(w, chunk_begin(w), chunk_begin(w + 1)); });
    for (auto& th : pool) th.join();
}

}  // namespace steklov
