#pragma once

#include <array>
#include <vector>

#include "dynas/algorithm_config.hpp"

namespace dynas {

// The 80-config GA grid: population schemes (1+lambda) for lambda in
// {1,10,50,100} plus (lambda+1), (lambda+lambda/2), (lambda+lambda) for
// lambda in {10,50,100}; standard-bit and fast mutation throughout;
// one-point / two-point / uniform crossover with p_c = 0.5 on the nine
// multi-parent schemes. 26 mutation-only + 54 crossover configs.
inline std::vector<AlgorithmConfig> full_portfolio() {
    struct Scheme {
        int mu, lambda;
    };
    constexpr std::array<Scheme, 13> schemes = {{{1, 1},
                                                 {1, 10},
                                                 {1, 50},
                                                 {1, 100},
                                                 {10, 1},
                                                 {50, 1},
                                                 {100, 1},
                                                 {10, 5},
                                                 {50, 25},
                                                 {100, 50},
                                                 {10, 10},
                                                 {50, 50},
                                                 {100, 100}}};
    constexpr std::array<MutationKind, 2> mutations = {MutationKind::standard_bit, MutationKind::fast};
    constexpr std::array<CrossoverKind, 3> crossovers = {CrossoverKind::one_point, CrossoverKind::two_point,
                                                         CrossoverKind::uniform};

    std::vector<AlgorithmConfig> configs;
    configs.reserve(80);
    for (const auto &s : schemes)
        for (const auto m : mutations) {
            AlgorithmConfig c;
            c.mu = s.mu;
            c.lambda = s.lambda;
            c.mutation = m;
            configs.push_back(c);
            if (s.mu == 1)
                continue; // single-parent schemes stay mutation-only
            for (const auto x : crossovers) {
                AlgorithmConfig v = c;
                v.crossover = x;
                v.p_c = 0.5;
                configs.push_back(v);
            }
        }
    return configs;
}

} // namespace dynas
