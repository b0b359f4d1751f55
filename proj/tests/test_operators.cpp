#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <map>
#include <set>

#include "dynas/operators.hpp"

using namespace dynas;

TEST_CASE("standard bit mutation always flips at least one bit") {
    Rng rng(101);
    const Genome x(40, 0);
    for (int i = 0; i < 2000; ++i) {
        const auto [y, flips] = standard_bit_mutation(x, 1.0 / 40, rng);
        CHECK(flips >= 1);
        CHECK(hamming_distance(x, y) == flips);
    }
}

TEST_CASE("standard bit mutation on a single bit") {
    Rng rng(5);
    const Genome x = {1};
    const auto [y, flips] = standard_bit_mutation(x, 1.0, rng);
    CHECK(flips == 1);
    CHECK(y == Genome{0});
}

TEST_CASE("conditional binomial mean") {
    Rng rng(77);
    const int n = 100;
    const double p = 0.01;
    const int draws = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const auto l = sample_conditional_binomial(n, p, rng);
        sum += l;
        sum_sq += static_cast<double>(l) * l;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt((sum_sq - draws * mean * mean) / (draws - 1));
    const double expected = n * p / (1.0 - std::pow(1.0 - p, n));
    CHECK(std::abs(mean - expected) <= 3.0 * sd / std::sqrt(draws));
}

TEST_CASE("fast mutation support and ratio") {
    Rng rng(303);
    const Genome two(2, 0);
    for (int i = 0; i < 50; ++i)
        CHECK(fast_mutation(two, 1.5, rng).second == 1);

    const PowerLawFlips dist(100, 1.5);
    std::map<int, int> counts;
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i) {
        const int l = dist.sample(rng);
        CHECK(l >= 1);
        CHECK(l <= 50);
        ++counts[l];
    }
    const double ratio = static_cast<double>(counts[1]) / counts[2];
    CHECK(std::abs(ratio - std::pow(2.0, 1.5)) / std::pow(2.0, 1.5) < 0.05);
}

TEST_CASE("crossover of identical parents is the parent") {
    Rng rng(9);
    const Genome x = random_genome(50, rng);
    for (const auto kind : {CrossoverKind::one_point, CrossoverKind::two_point, CrossoverKind::uniform})
        CHECK(crossover(kind, x, x, rng) == x);
}

TEST_CASE("crossover children pick every bit from a parent") {
    Rng rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const Genome x = random_genome(31, rng);
        const Genome y = random_genome(31, rng);
        for (const auto kind : {CrossoverKind::one_point, CrossoverKind::two_point, CrossoverKind::uniform}) {
            const Genome child = crossover(kind, x, y, rng);
            for (std::size_t i = 0; i < child.size(); ++i)
                CHECK((child[i] == x[i] || child[i] == y[i]));
        }
    }
    CHECK_THROWS(crossover(CrossoverKind::uniform, Genome(3, 0), Genome(4, 0), rng));
}

TEST_CASE("one-point keeps a prefix of x and a suffix of y") {
    Rng rng(21);
    const Genome x(20, 0);
    const Genome y(20, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const Genome child = crossover(CrossoverKind::one_point, x, y, rng);
        const int cut = static_cast<int>(std::find(child.begin(), child.end(), 1) - child.begin());
        CHECK(cut >= 1);
        CHECK(cut <= 19);
        for (std::size_t i = 0; i < child.size(); ++i)
            CHECK(child[i] == (static_cast<int>(i) >= cut ? 1 : 0));
    }
}

TEST_CASE("two-point takes a middle window from y") {
    Rng rng(22);
    const Genome x(20, 0);
    const Genome y(20, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const Genome child = crossover(CrossoverKind::two_point, x, y, rng);
        const auto first = std::find(child.begin(), child.end(), 1);
        const auto last = std::find(child.rbegin(), child.rend(), 1);
        REQUIRE(first != child.end());
        const int c1 = static_cast<int>(first - child.begin());
        const int c2 = static_cast<int>(child.rend() - last);
        CHECK(c1 >= 1);
        CHECK(c2 <= 19);
        CHECK(c1 < c2);
        for (int i = 0; i < 20; ++i)
            CHECK(child[static_cast<std::size_t>(i)] == (i >= c1 && i < c2 ? 1 : 0));
    }
}

TEST_CASE("uniform crossover picks each parent with probability 1/2") {
    Rng rng(31);
    const Genome x(25, 0);
    const Genome y(25, 1);
    const int children = 10000;
    double ones = 0.0;
    for (int i = 0; i < children; ++i)
        ones += ones_count(crossover(CrossoverKind::uniform, x, y, rng));
    const double freq = ones / (children * 25.0);
    const double se = 0.5 / std::sqrt(children * 25.0);
    CHECK(std::abs(freq - 0.5) <= 3.0 * se);
}

TEST_CASE("plus selection keeps the best and breaks ties uniformly") {
    Rng rng(41);
    Population pool;
    for (const double f : {1.0, 2.0, 3.0})
        pool.push_back({Genome{static_cast<std::uint8_t>(f)}, f});
    auto picked = select_mu_best(pool, 2, rng);
    CHECK(picked[0].fitness == 3.0);
    CHECK(picked[1].fitness == 2.0);

    // min selected >= max unselected on random pools
    for (int trial = 0; trial < 200; ++trial) {
        Population big;
        for (int i = 0; i < 12; ++i)
            big.push_back({{}, static_cast<double>(rng.below(5))});
        const auto sel = select_mu_best(big, 5, rng);
        double min_sel = sel.front().fitness;
        for (const auto &ind : sel)
            min_sel = std::min(min_sel, ind.fitness);
        std::multiset<double> remaining;
        for (const auto &ind : big)
            remaining.insert(ind.fitness);
        for (const auto &ind : sel)
            remaining.erase(remaining.find(ind.fitness));
        if (!remaining.empty())
            CHECK(min_sel >= *remaining.rbegin());
    }

    // equal fitness: each of four individuals wins one of two slots half the time
    std::array<int, 4> counts{};
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        Population equal;
        for (std::uint8_t i = 0; i < 4; ++i)
            equal.push_back({Genome{i}, 1.0});
        for (const auto &ind : select_mu_best(equal, 2, rng))
            ++counts[ind.genome[0]];
    }
    const double se = std::sqrt(0.5 * 0.5 / trials);
    for (const auto c : counts)
        CHECK(std::abs(static_cast<double>(c) / trials - 0.5) <= 3.0 * se);

    CHECK_THROWS(select_mu_best(pool, 4, rng));
    const auto all = select_mu_best(pool, 3, rng);
    CHECK(all.size() == 3);
}
