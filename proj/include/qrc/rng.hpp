#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qrc {

// SplitMix64 finalizer; used to derive independent substreams from a root
// seed and a path of integer identifiers.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(root);
    for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return s;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(root, path));
}

// Stream identifiers, so different consumers of one root never collide.
enum class Stream : std::uint64_t {
    geometry = 1,
    sample = 2,
    split = 3,
    noise = 4,
    memory = 5,
    test = 6,
};

inline std::uint64_t id(Stream s) { return static_cast<std::uint64_t>(s); }

}  // namespace qrc
