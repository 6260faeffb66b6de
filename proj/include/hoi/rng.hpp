#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hoi::rng {

/// SplitMix64 finalizer. Bijective, well-mixed, and cheap; the basis of all
/// counter-addressed randomness in this library.
inline uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Combines a running seed with one more word (per value, order-sensitive).
inline uint64_t combine(uint64_t seed, uint64_t word) {
    return mix(seed ^ (word + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2)));
}

/// A stateless random stream: value i is a pure function of (seed, i), so any
/// element can be regenerated independently and in any order.
class CounterStream {
public:
    explicit CounterStream(uint64_t seed) : seed_(seed) {}

    uint64_t bits(uint64_t counter) const { return mix(seed_ ^ mix(counter + 1)); }

    /// Uniform in (0,1), never exactly 0 or 1.
    double uniform(uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; values 2m and 2m+1 share one
    /// uniform pair, so a run of n normals costs n transcendental pairs / 2.
    double normal(uint64_t counter) const {
        const uint64_t pair = counter >> 1;
        const double u1 = uniform(2 * pair);
        const double u2 = uniform(2 * pair + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        return (counter & 1) ? r * std::sin(theta) : r * std::cos(theta);
    }

    uint64_t seed() const { return seed_; }

private:
    uint64_t seed_;
};

}  // namespace hoi::rng
