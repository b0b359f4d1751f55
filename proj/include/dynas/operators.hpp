#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dynas/algorithm_config.hpp"
#include "dynas/genome.hpp"
#include "dynas/rng.hpp"

namespace dynas {

struct Individual {
    Genome genome;
    double fitness = 0.0;

    bool operator==(const Individual &) const = default;
};

// Ordered multiset of individuals; size equals the active config's mu.
using Population = std::vector<Individual>;

// Flip count of standard bit mutation: Binomial(n, p) conditioned on >= 1.
// Rejection realizes the conditional distribution exactly.
inline int sample_conditional_binomial(int n, double p, Rng &rng) {
    if (p <= 0.0 || p > 1.0)
        throw std::invalid_argument("mutation rate out of (0,1]");
    int l = 0;
    do {
        l = rng.binomial(n, p);
    } while (l == 0);
    return l;
}

// Flip count of fast mutation: P(l = i) proportional to i^-beta on
// {1, ..., n/2}. The cumulative weights are cached so a sampler can be
// reused across a whole run.
class PowerLawFlips {
public:
    PowerLawFlips(int n, double beta) {
        if (n < 2)
            throw std::invalid_argument("fast mutation requires n >= 2");
        if (beta <= 1.0)
            throw std::invalid_argument("beta must exceed 1");
        cumulative_.resize(static_cast<std::size_t>(n / 2));
        double acc = 0.0;
        for (std::size_t i = 0; i < cumulative_.size(); ++i) {
            acc += std::pow(static_cast<double>(i + 1), -beta);
            cumulative_[i] = acc;
        }
    }

    int sample(Rng &rng) const {
        const double u = rng.uniform01() * cumulative_.back(); // u < back(), so the bound exists
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return static_cast<int>(it - cumulative_.begin()) + 1;
    }

private:
    std::vector<double> cumulative_;
};

// Copy of x with flips distinct uniformly chosen positions inverted.
inline Genome flip_distinct(const Genome &x, int flips, Rng &rng) {
    Genome out = x;
    for (const auto pos : rng.distinct(static_cast<std::size_t>(flips), x.size()))
        out[pos] ^= 1u;
    return out;
}

inline std::pair<Genome, int> standard_bit_mutation(const Genome &x, double p, Rng &rng) {
    const int l = sample_conditional_binomial(static_cast<int>(x.size()), p, rng);
    return {flip_distinct(x, l, rng), l};
}

inline std::pair<Genome, int> fast_mutation(const Genome &x, double beta, Rng &rng) {
    const int l = PowerLawFlips(static_cast<int>(x.size()), beta).sample(rng);
    return {flip_distinct(x, l, rng), l};
}

// One child from two parents. one_point: cut c in {1..n-1}, prefix from x.
// two_point: distinct cuts c1 < c2, y supplies the middle. uniform: each bit
// from either parent with probability 1/2.
inline Genome crossover(CrossoverKind kind, const Genome &x, const Genome &y, Rng &rng) {
    if (x.size() != y.size())
        throw std::invalid_argument("crossover: parent length mismatch");
    const std::size_t n = x.size();
    switch (kind) {
    case CrossoverKind::one_point: {
        const std::size_t c = 1 + rng.below(n - 1);
        Genome child = x;
        std::copy(y.begin() + static_cast<std::ptrdiff_t>(c), y.end(),
                  child.begin() + static_cast<std::ptrdiff_t>(c));
        return child;
    }
    case CrossoverKind::two_point: {
        if (n < 3)
            throw std::invalid_argument("two-point crossover needs n >= 3");
        std::size_t c1 = 1 + rng.below(n - 1);
        std::size_t c2 = 1 + rng.below(n - 2);
        if (c2 >= c1)
            ++c2; // second cut distinct from the first
        if (c1 > c2)
            std::swap(c1, c2);
        Genome child = x;
        std::copy(y.begin() + static_cast<std::ptrdiff_t>(c1), y.begin() + static_cast<std::ptrdiff_t>(c2),
                  child.begin() + static_cast<std::ptrdiff_t>(c1));
        return child;
    }
    case CrossoverKind::uniform: {
        Genome child(n);
        for (std::size_t i = 0; i < n; ++i)
            child[i] = rng.coin() ? x[i] : y[i];
        return child;
    }
    default:
        throw std::invalid_argument("crossover: kind must not be none");
    }
}

// Plus selection: the mu individuals of largest fitness, ties broken
// uniformly at random via a one-shot random key per pool member.
inline Population select_mu_best(const Population &pool, int mu, Rng &rng) {
    if (static_cast<int>(pool.size()) < mu)
        throw std::invalid_argument("select_mu_best: pool smaller than mu");
    std::vector<std::pair<std::uint64_t, std::size_t>> order(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i)
        order[i] = {rng.raw(), i};
    std::sort(order.begin(), order.end(), [&](const auto &a, const auto &b) {
        const double fa = pool[a.second].fitness, fb = pool[b.second].fitness;
        if (fa != fb)
            return fa > fb;
        return a.first < b.first;
    });
    Population next;
    next.reserve(static_cast<std::size_t>(mu));
    for (int i = 0; i < mu; ++i)
        next.push_back(pool[order[static_cast<std::size_t>(i)].second]);
    return next;
}

} // namespace dynas
