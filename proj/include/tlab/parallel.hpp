#pragma once

/**
 * @file parallel.hpp
 * @brief Chunked parallel map with a thread-count-independent result.
 *
 * Work is split into a fixed number of chunks; each chunk's result is
 * computed independently (its RNG substream keyed by chunk index) and the
 * results are folded in chunk order. TOWERLAB_THREADS caps the worker pool;
 * the fold order never depends on it.
 */

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace tlab {

inline constexpr size_t kChunkCount = 256;

inline unsigned worker_count() {
    if (const char* env = std::getenv("TOWERLAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// evaluates fn(chunk_index) for chunk_index in [0, chunks) on a bounded pool;
// the returned vector is ordered by chunk index
template <typename T>
std::vector<T> map_chunks(size_t chunks, const std::function<T(size_t)>& fn) {
    std::vector<T> results(chunks);
    unsigned workers = std::min<size_t>(worker_count(), chunks);
    if (workers <= 1) {
        for (size_t i = 0; i < chunks; ++i) results[i] = fn(i);
        return results;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (size_t i = w; i < chunks; i += workers) results[i] = fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
    return results;
}

}  // namespace tlab
