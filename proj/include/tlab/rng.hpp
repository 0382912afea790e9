#pragma once

/**
 * @file rng.hpp
 * @brief Deterministic random streams with platform-independent draws.
 *
 * Substreams are derived from a master seed via splitmix64, so chunked
 * parallel work sees the same draws regardless of thread count. Bounded
 * integers use rejection sampling (never std::uniform_int_distribution,
 * whose output is implementation-defined).
 */

#include <cstdint>
#include <random>

namespace tlab {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// independent engine for (seed, stream_index); stream 0, 1, ... per chunk
inline std::mt19937_64 make_stream(uint64_t seed, uint64_t stream_index) {
    uint64_t s = seed ^ (0xa0761d6478bd642full * (stream_index + 1));
    std::seed_seq seq{uint32_t(s), uint32_t(s >> 32), uint32_t(stream_index),
                      uint32_t(stream_index >> 32)};
    return std::mt19937_64(seq);
}

// uniform draw in [0, bound) by Lemire's rejection method; bound >= 1
inline uint64_t uniform_below(std::mt19937_64& gen, uint64_t bound) {
    if (bound <= 1) return 0;
    while (true) {
        uint64_t x = gen();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        uint64_t lo = static_cast<uint64_t>(m);
        if (lo >= bound || lo >= (uint64_t(0) - bound) % bound) return static_cast<uint64_t>(m >> 64);
    }
}

}  // namespace tlab
