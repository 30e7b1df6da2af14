#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace vralloc {

// All randomness in the simulator is drawn from mt19937_64 engines whose
// seeds are derived from (master seed, stream tag, indices...) with a
// splitmix64 finalizer. Two streams with different tags or indices are
// independent for simulation purposes, and every stream is reproducible
// from the master seed alone. This is what makes parallel replications
// bit-identical to serial ones.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stream tags. Values are part of the on-disk reproducibility contract:
// changing them changes every derived random stream.
enum class Stream : std::uint64_t {
    Topology = 1,
    Content = 2,
    Overlap = 3,
    Channel = 4,
    ActionSet = 5,
    Agent = 6,
    Misc = 7,
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream tag,
                                 std::initializer_list<std::uint64_t> indices = {}) {
    std::uint64_t s = splitmix64(master ^ (static_cast<std::uint64_t>(tag) << 56));
    for (std::uint64_t idx : indices) {
        s = splitmix64(s ^ splitmix64(idx + 0x632BE59BD9B4E019ULL));
    }
    return s;
}

inline std::mt19937_64 make_stream(std::uint64_t master, Stream tag,
                                   std::initializer_list<std::uint64_t> indices = {}) {
    return std::mt19937_64(derive_seed(master, tag, indices));
}

}  // namespace vralloc
