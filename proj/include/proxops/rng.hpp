#pragma once

#include <cstdint>
#include <random>

namespace proxops {

// Derives decorrelated substream seeds from a master seed. Adjacent master
// seeds or stream indices map to unrelated engine states, so per-sample and
// per-axis streams can be built by simple indexing.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    // splitmix64 finalizer applied to the combined word
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream) {
    return std::mt19937_64(mix_seed(master, stream));
}

// One-shot standard normal draw. A fresh distribution per call discards the
// Box-Muller cache, so the value depends only on the engine state and not on
// how calls are interleaved across code paths.
inline double draw_normal(std::mt19937_64& eng, double mean = 0.0, double sigma = 1.0) {
    std::normal_distribution<double> n(mean, sigma);
    return n(eng);
}

}  // namespace proxops
