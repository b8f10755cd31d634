#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace v2psim::rng {

using Engine = std::mt19937_64;

// splitmix64, used to whiten seeds before they reach the engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_tag(std::string_view tag) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Every random draw in the simulator flows from one user seed through named
// sub-streams, so changes in one component never perturb another's draws.
inline Engine make_stream(std::uint64_t seed, std::string_view tag) {
    return Engine(splitmix64(seed ^ hash_tag(tag)));
}

// Hand-rolled draws: std::uniform_real_distribution is not bit-portable
// across standard libraries, and run outputs must be reproducible.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

inline double exponential(Engine& eng, double rate) {
    // inverse CDF; uniform01 < 1 so the log argument stays positive
    return -std::log(1.0 - uniform01(eng)) / rate;
}

}  // namespace v2psim::rng
