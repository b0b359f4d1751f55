#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace dynas {

// splitmix64 finalizer; used both as a stream mixer and to combine seed material.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Order-sensitive combination of seed material into one 64-bit seed.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x5851f42d4c957f2dULL;
    for (const auto p : parts)
        h = splitmix64(h ^ p);
    return h;
}

// Seedable 64-bit generator (mt19937_64) with helpers for the sampling
// patterns used across the toolkit. Child streams are derived with split(),
// so parallel runs stay reproducible regardless of scheduling.
class Rng {
public:
    using engine_type = std::mt19937_64;

    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t raw() { return engine_(); }

    // Uniform in [0,1) with 53-bit resolution; never returns 1.0.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in {0, ..., n-1}.
    std::size_t below(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    bool coin() {
        if (bits_left_ == 0) {
            bit_cache_ = engine_();
            bits_left_ = 64;
        }
        const bool b = bit_cache_ & 1u;
        bit_cache_ >>= 1;
        --bits_left_;
        return b;
    }

    int binomial(int n, double p) {
        return std::binomial_distribution<int>(n, p)(engine_);
    }

    // k distinct values from {0, ..., n-1} (Floyd's algorithm); order unspecified.
    std::vector<std::size_t> distinct(std::size_t k, std::size_t n) {
        std::vector<std::size_t> picked;
        picked.reserve(k);
        for (std::size_t j = n - k; j < n; ++j) {
            const std::size_t t = below(j + 1);
            bool seen = false;
            for (const auto v : picked)
                if (v == t) {
                    seen = true;
                    break;
                }
            picked.push_back(seen ? j : t);
        }
        return picked;
    }

    // Independent child stream; deterministic in (parent seed, stream index).
    Rng split(std::uint64_t stream) const { return Rng(mix_seed({seed_, stream})); }

    engine_type &engine() { return engine_; }

private:
    std::uint64_t seed_;
    engine_type engine_;
    std::uint64_t bit_cache_ = 0;
    int bits_left_ = 0;
};

} // namespace dynas
