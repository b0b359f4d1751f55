#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "dynas/algorithm_config.hpp"
#include "dynas/operators.hpp"
#include "dynas/problems.hpp"
#include "dynas/run_log.hpp"
#include "dynas/rng.hpp"

namespace dynas {

struct RunStats {
    std::uint64_t evaluations = 0;
    std::uint64_t crossover_children = 0;
    std::uint64_t mutation_children = 0;
    std::uint64_t inherited = 0; // offspring equal to a parent, fitness copied
};

// Generational (mu+lambda) engine. Each offspring is produced by crossover
// with probability p_c (two parents uniform with replacement) and otherwise
// by mutation of one uniform parent. Offspring identical to a parent inherit
// its fitness without spending an evaluation. Survivors are the best mu of
// parents plus offspring, ties uniform. The run stops as soon as the final
// target is reached or the budget is spent, mid-generation included.
//
// The engine is also the substrate for switching runs: the active config can
// be replaced between generations and the population is accessible for
// handoff.
class GaEngine {
public:
    using Seeder = std::function<Genome(int, Rng &)>;

    GaEngine(const AlgorithmConfig &config, const ProblemInstance &problem, std::uint64_t budget,
             double final_target, Rng &rng)
        : problem_(&problem), rng_(&rng), final_target_(final_target) {
        if (budget < static_cast<std::uint64_t>(config.mu))
            throw std::invalid_argument("run budget smaller than mu");
        log_.budget = budget;
        log_.func_id = problem.func_id;
        log_.dimension = problem.dimension;
        log_.seed = rng.seed();
        set_config(config);
    }

    void set_config(const AlgorithmConfig &config) {
        validate_config(config);
        config_ = config;
        rate_ = config.mutation_rate(problem_->dimension);
        if (config.mutation == MutationKind::fast) {
            flips_.emplace(problem_->dimension, config.beta);
            binomial_.reset();
        } else {
            flips_.reset();
            binomial_.emplace(problem_->dimension, rate_);
        }
    }

    const AlgorithmConfig &config() const { return config_; }

    double evaluate_counted(const Genome &g) {
        const double f = evaluate(*problem_, g);
        ++stats_.evaluations;
        if (f > best_) {
            best_ = f;
            record_improvement(log_, stats_.evaluations, f);
            if (fitness_reaches(f, final_target_))
                hit_ = true;
        }
        return f;
    }

    bool stopped() const { return hit_ || stats_.evaluations >= log_.budget; }
    bool finished() const { return stopped() || stalled_; }
    bool hit() const { return hit_; }
    double best() const { return best_; }
    std::uint64_t evaluations() const { return stats_.evaluations; }
    const RunStats &stats() const { return stats_; }

    Population &population() { return population_; }
    const Population &population() const { return population_; }

    void initialize() {
        initialize_with([](int, Rng &) { return Genome(); });
    }

    // Initial parents come from `seed(i, rng)`; an empty genome means
    // "sample uniformly". Every initial individual is evaluated and counted.
    void initialize_with(const Seeder &seed) {
        population_.clear();
        population_.reserve(static_cast<std::size_t>(config_.mu));
        for (int i = 0; i < config_.mu && !stopped(); ++i) {
            Individual ind;
            ind.genome = seed(i, *rng_);
            if (ind.genome.empty())
                ind.genome = random_genome(static_cast<std::size_t>(problem_->dimension), *rng_);
            ind.fitness = evaluate_counted(ind.genome);
            population_.push_back(std::move(ind));
        }
    }

    void step_generation() {
        const std::size_t mu = population_.size();
        if (mu == 0)
            throw std::logic_error("step_generation before initialize");
        if (config_.p_c >= 1.0 && converged()) {
            stalled_ = true; // crossover of identical parents can never leave the point
            return;
        }
        const auto lambda = static_cast<std::size_t>(config_.lambda);
        if (offspring_.size() != lambda)
            offspring_.resize(lambda); // slots persist, so no per-child allocation
        for (std::size_t i = 0; i < lambda; ++i) {
            if (stopped())
                return; // budget can run out mid-batch
            Individual &child = offspring_[i];
            if (rng_->uniform01() < config_.p_c) {
                ++stats_.crossover_children;
                const Individual &x = population_[rng_->below(mu)];
                const Individual &y = population_[rng_->below(mu)];
                crossover_into(x.genome, y.genome, child.genome);
                if (child.genome == x.genome) {
                    child.fitness = x.fitness;
                    ++stats_.inherited;
                } else if (child.genome == y.genome) {
                    child.fitness = y.fitness;
                    ++stats_.inherited;
                } else {
                    child.fitness = evaluate_counted(child.genome);
                }
            } else {
                ++stats_.mutation_children;
                const Individual &x = population_[rng_->below(mu)];
                mutate_into(x.genome, child.genome);
                if (child.genome == x.genome) { // unreachable while flip counts are >= 1
                    child.fitness = x.fitness;
                    ++stats_.inherited;
                } else {
                    child.fitness = evaluate_counted(child.genome);
                }
            }
        }
        // plus selection over parents and offspring; fresh random keys break ties
        order_.clear();
        for (const auto &ind : population_)
            order_.emplace_back(rng_->raw(), &ind);
        for (const auto &ind : offspring_)
            order_.emplace_back(rng_->raw(), &ind);
        std::sort(order_.begin(), order_.end(), [](const auto &a, const auto &b) {
            if (a.second->fitness != b.second->fitness)
                return a.second->fitness > b.second->fitness;
            return a.first < b.first;
        });
        next_population_.resize(mu);
        for (std::size_t k = 0; k < mu; ++k)
            next_population_[k] = *order_[k].second;
        std::swap(population_, next_population_);
    }

    // Finalizes and surrenders the log; metadata the engine cannot know
    // (config_name, run_index) is left for the caller.
    RunLog take_log() {
        log_.total_evaluations = stats_.evaluations;
        log_.hit_final_target = hit_;
        return std::move(log_);
    }

private:
    bool converged() const {
        for (const auto &ind : population_)
            if (ind.genome != population_.front().genome)
                return false;
        return true;
    }

    void crossover_into(const Genome &x, const Genome &y, Genome &child) {
        const std::size_t n = x.size();
        switch (config_.crossover) {
        case CrossoverKind::one_point: {
            const std::size_t c = 1 + rng_->below(n - 1);
            child = x;
            std::copy(y.begin() + static_cast<std::ptrdiff_t>(c), y.end(),
                      child.begin() + static_cast<std::ptrdiff_t>(c));
            return;
        }
        case CrossoverKind::two_point: {
            std::size_t c1 = 1 + rng_->below(n - 1);
            std::size_t c2 = 1 + rng_->below(n - 2);
            if (c2 >= c1)
                ++c2;
            if (c1 > c2)
                std::swap(c1, c2);
            child = x;
            std::copy(y.begin() + static_cast<std::ptrdiff_t>(c1), y.begin() + static_cast<std::ptrdiff_t>(c2),
                      child.begin() + static_cast<std::ptrdiff_t>(c1));
            return;
        }
        case CrossoverKind::uniform:
            child.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                child[i] = rng_->coin() ? x[i] : y[i];
            return;
        default:
            throw std::logic_error("crossover branch taken with p_c = 0");
        }
    }

    void mutate_into(const Genome &x, Genome &child) {
        int l = 0;
        if (binomial_) {
            do {
                l = (*binomial_)(rng_->engine());
            } while (l == 0);
        } else {
            l = flips_->sample(*rng_);
        }
        child = x;
        flip_positions_.clear();
        const std::size_t n = x.size();
        for (std::size_t j = n - static_cast<std::size_t>(l); j < n; ++j) {
            const std::size_t t = rng_->below(j + 1);
            bool seen = false;
            for (const auto v : flip_positions_)
                if (v == t) {
                    seen = true;
                    break;
                }
            flip_positions_.push_back(seen ? j : t);
        }
        for (const auto pos : flip_positions_)
            child[pos] ^= 1u;
    }

    const ProblemInstance *problem_;
    Rng *rng_;
    double final_target_;
    AlgorithmConfig config_;
    double rate_ = 0.0;
    std::optional<PowerLawFlips> flips_;
    std::optional<std::binomial_distribution<int>> binomial_;
    Population population_;
    Population next_population_;
    Population offspring_;
    std::vector<std::pair<std::uint64_t, const Individual *>> order_;
    std::vector<std::size_t> flip_positions_;
    RunStats stats_;
    RunLog log_;
    double best_ = -std::numeric_limits<double>::infinity();
    bool hit_ = false;
    bool stalled_ = false;
};

// One full run of a static config from uniform initialization.
inline RunLog run_ga(const AlgorithmConfig &config, const ProblemInstance &problem, std::uint64_t budget,
                     double final_target, Rng &rng, RunStats *stats_out = nullptr,
                     const GaEngine::Seeder &seeder = nullptr) {
    GaEngine engine(config, problem, budget, final_target, rng);
    if (seeder)
        engine.initialize_with(seeder);
    else
        engine.initialize_with([](int, Rng &) { return Genome(); });
    while (!engine.finished())
        engine.step_generation();
    if (stats_out)
        *stats_out = engine.stats();
    RunLog log = engine.take_log();
    log.config_name = canonical_name(config);
    return log;
}

} // namespace dynas
