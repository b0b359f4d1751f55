#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "dynas/rng.hpp"

namespace dynas {

// Fixed-length bit vector; one byte per bit, values restricted to {0,1}.
using Genome = std::vector<std::uint8_t>;

inline int ones_count(const Genome &x) {
    int c = 0;
    for (const auto b : x)
        c += b;
    return c;
}

inline int hamming_distance(const Genome &a, const Genome &b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += a[i] != b[i];
    return d;
}

inline Genome random_genome(std::size_t n, Rng &rng) {
    Genome x(n);
    for (auto &b : x)
        b = rng.coin() ? 1 : 0;
    return x;
}

} // namespace dynas
