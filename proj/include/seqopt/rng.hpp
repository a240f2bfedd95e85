#pragma once

// Deterministic random numbers. All randomness in the library flows through
// Rng so that results are bit-identical across platforms and thread counts.
// std::mt19937_64 is fully specified by the standard; the distribution
// helpers below replace std::uniform_*_distribution, whose output is
// implementation-defined.

#include <cstdint>
#include <random>
#include <string_view>

namespace seqopt {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        // multiply-shift mapping; bias is < 2^-64 per draw and the mapping
        // is fixed, which is what reproducibility needs
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((u128(next_u64()) * u128(n)) >> 64);
    }

    /// Uniform double in [0, 1).
    double real() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool coin() { return (next_u64() & 1u) != 0; }

private:
    std::mt19937_64 engine_;
};

constexpr std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Derives a component seed from the root seed. Every randomized component
/// (bounds, NSGA-II runs, Morris plans, benchmark instances) draws its seed
/// through here, so sub-runs are independently reproducible.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view component,
                                    std::uint64_t index = 0) {
    return splitmix64(root ^ fnv1a64(component) ^ (0x9e3779b97f4a7c15ull * (index + 1)));
}

} // namespace seqopt
