#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynas/fitness.hpp"
#include "dynas/genome.hpp"
#include "dynas/rng.hpp"

namespace dynas {

// Pseudo-Boolean benchmark suite: OneMax, LeadingOnes, a harmonic-weight
// linear function, four W-model OneMax extensions (dummy bits, neutrality,
// epistasis, ruggedness) and the concatenated trap. All functions are
// maximized and return finite real values.

inline constexpr std::array<int, 9> supported_functions = {1, 2, 3, 4, 5, 6, 7, 8, 24};

inline constexpr int epistasis_nu = 4;
inline constexpr int trap_k = 5;

// Bijection on {0,1}^nu: output bit i is the XOR of every input bit except
// the one at (i+1) mod nu, i.e. total parity XOR one rotated input. Flipping
// any single input toggles exactly nu-1 outputs. Requires even nu (odd nu
// would map both 0^nu and 1^nu onto the same image).
inline Genome epistasis_transform(const Genome &block, int nu) {
    if (static_cast<int>(block.size()) != nu)
        throw std::invalid_argument("epistasis_transform: block length does not equal nu");
    if (nu % 2 != 0)
        throw std::invalid_argument("epistasis_transform: nu must be even");
    int parity = 0;
    for (const auto b : block)
        parity ^= b;
    Genome out(block.size());
    for (int i = 0; i < nu; ++i)
        out[i] = static_cast<std::uint8_t>(parity ^ block[(i + 1) % nu]);
    return out;
}

// Ruggedness mapping on fitness values 0..d. The top value keeps its rank,
// everything below zigzags upward in half-steps: even arguments round down,
// odd arguments round up.
inline int ruggedness_r(int i, int d) {
    if (i < 0 || i > d)
        throw std::invalid_argument("ruggedness_r: argument out of [0, d]");
    if (i == d)
        return (d + 1) / 2 + 1;
    if (i % 2 == 0)
        return i / 2 + 1;
    return (i + 1) / 2 + 1;
}

struct ProblemInstance {
    int func_id = 0;
    int dimension = 0;
    std::uint64_t instance_seed = 0;
    double optimum = 0.0;

    // func-specific cached transform data
    std::vector<int> active_positions;     // F4/F5: positions that affect fitness
    std::vector<int> ruggedness_table;     // F8: r(i) for i in 0..n
    std::array<int, 16> epistasis_values{}; // F7: ones count of each transformed 4-block
};

namespace detail {

inline std::vector<int> pick_active_positions(int n, int dummies, std::uint64_t instance_seed, int func_id) {
    // dedicated stream so instances are bit-reproducible
    Rng rng(mix_seed({instance_seed, static_cast<std::uint64_t>(func_id), static_cast<std::uint64_t>(n), fnv1a64("dummy-positions")}));
    const auto dummy = rng.distinct(static_cast<std::size_t>(dummies), static_cast<std::size_t>(n));
    std::vector<std::uint8_t> is_dummy(static_cast<std::size_t>(n), 0);
    for (const auto p : dummy)
        is_dummy[p] = 1;
    std::vector<int> active;
    active.reserve(static_cast<std::size_t>(n - dummies));
    for (int i = 0; i < n; ++i)
        if (!is_dummy[static_cast<std::size_t>(i)])
            active.push_back(i);
    return active;
}

} // namespace detail

inline ProblemInstance make_problem(int func_id, int dimension, std::uint64_t instance_seed) {
    if (std::find(supported_functions.begin(), supported_functions.end(), func_id) == supported_functions.end())
        throw std::invalid_argument("unsupported function: F" + std::to_string(func_id));
    if (dimension < 4)
        throw std::invalid_argument("dimension too small: " + std::to_string(dimension) + " < 4");

    ProblemInstance p;
    p.func_id = func_id;
    p.dimension = dimension;
    p.instance_seed = instance_seed;

    const int n = dimension;
    switch (func_id) {
    case 1:
    case 2:
        p.optimum = n;
        break;
    case 3:
        p.optimum = static_cast<double>(n) * (n + 1) / 2.0;
        break;
    case 4:
        p.active_positions = detail::pick_active_positions(n, (n + 1) / 2, instance_seed, func_id);
        p.optimum = static_cast<double>(p.active_positions.size());
        break;
    case 5:
        p.active_positions = detail::pick_active_positions(n, (n + 9) / 10, instance_seed, func_id);
        p.optimum = static_cast<double>(p.active_positions.size());
        break;
    case 6:
        p.optimum = n / 3;
        break;
    case 7: {
        for (int idx = 0; idx < 16; ++idx) {
            Genome block(epistasis_nu);
            for (int b = 0; b < epistasis_nu; ++b)
                block[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>((idx >> (epistasis_nu - 1 - b)) & 1);
            p.epistasis_values[static_cast<std::size_t>(idx)] = ones_count(epistasis_transform(block, epistasis_nu));
        }
        p.optimum = n;
        break;
    }
    case 8: {
        p.ruggedness_table.resize(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i)
            p.ruggedness_table[static_cast<std::size_t>(i)] = ruggedness_r(i, n);
        p.optimum = ruggedness_r(n, n);
        break;
    }
    case 24:
        if (n % trap_k != 0)
            throw std::invalid_argument("dimension not divisible by trap segment length " + std::to_string(trap_k));
        p.optimum = n / trap_k;
        break;
    default:
        break;
    }
    return p;
}

// Smallest attainable fitness value; lower anchor for target grids.
inline double min_fitness(const ProblemInstance &p) {
    return p.func_id == 8 ? 1.0 : 0.0;
}

namespace detail {

inline double eval_onemax(const Genome &x) { return ones_count(x); }

inline double eval_leading_ones(const Genome &x) {
    int c = 0;
    for (const auto b : x) {
        if (!b)
            break;
        ++c;
    }
    return c;
}

inline double eval_harmonic(const Genome &x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i])
            s += static_cast<double>(i + 1);
    return s;
}

inline double eval_active_ones(const Genome &x, const std::vector<int> &active) {
    int c = 0;
    for (const auto i : active)
        c += x[static_cast<std::size_t>(i)];
    return c;
}

inline double eval_neutrality(const Genome &x) {
    const int blocks = static_cast<int>(x.size()) / 3;
    int c = 0;
    for (int b = 0; b < blocks; ++b) {
        const std::size_t o = static_cast<std::size_t>(3 * b);
        c += (x[o] + x[o + 1] + x[o + 2]) >= 2;
    }
    return c;
}

inline double eval_epistasis(const Genome &x, const std::array<int, 16> &values) {
    const std::size_t n = x.size();
    const std::size_t full = n / epistasis_nu * epistasis_nu;
    int c = 0;
    for (std::size_t o = 0; o < full; o += epistasis_nu) {
        const int idx = (x[o] << 3) | (x[o + 1] << 2) | (x[o + 2] << 1) | x[o + 3];
        c += values[static_cast<std::size_t>(idx)];
    }
    for (std::size_t i = full; i < n; ++i) // trailing partial block is untouched
        c += x[i];
    return c;
}

inline double eval_trap(const Genome &x) {
    double s = 0.0;
    for (std::size_t o = 0; o < x.size(); o += trap_k) {
        int u = 0;
        for (std::size_t i = o; i < o + trap_k; ++i)
            u += x[i];
        s += u == trap_k ? 1.0 : static_cast<double>(trap_k - 1 - u) / trap_k;
    }
    return s;
}

} // namespace detail

inline double evaluate(const ProblemInstance &p, const Genome &x) {
    if (static_cast<int>(x.size()) != p.dimension)
        throw std::invalid_argument("dimension mismatch: genome length " + std::to_string(x.size()) +
                                    " vs problem dimension " + std::to_string(p.dimension));
    switch (p.func_id) {
    case 1:
        return detail::eval_onemax(x);
    case 2:
        return detail::eval_leading_ones(x);
    case 3:
        return detail::eval_harmonic(x);
    case 4:
    case 5:
        return detail::eval_active_ones(x, p.active_positions);
    case 6:
        return detail::eval_neutrality(x);
    case 7:
        return detail::eval_epistasis(x, p.epistasis_values);
    case 8:
        return p.ruggedness_table[static_cast<std::size_t>(ones_count(x))];
    case 24:
        return detail::eval_trap(x);
    default:
        throw std::logic_error("evaluate: uninitialized problem instance");
    }
}

// Uniform sample from the LeadingOnes level set {x : LO(x) = s}: s leading
// ones, a forced zero, and a random tail. s = n degenerates to the all-ones
// point.
inline Genome sample_leading_ones_level(int n, int s, Rng &rng) {
    if (s < 0 || s > n)
        throw std::invalid_argument("sample_leading_ones_level: level out of [0, n]");
    Genome x(static_cast<std::size_t>(n), 1);
    if (s == n)
        return x;
    x[static_cast<std::size_t>(s)] = 0;
    for (int i = s + 1; i < n; ++i)
        x[static_cast<std::size_t>(i)] = rng.coin() ? 1 : 0;
    return x;
}

} // namespace dynas
