#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dynas/ga.hpp"
#include "dynas/policy.hpp"

namespace dynas {

struct HandoffReport {
    int from_mu = 0;
    int to_mu = 0;
    int carried = 0;     // individuals taken over from the old population
    int best_copies = 0; // duplicates of the best carried individual
    int fresh = 0;       // newly sampled individuals, each one evaluated

    bool operator==(const HandoffReport &) const = default;
};

// Population transfer when the parent population size changes from mu1 to
// mu2. Shrinking keeps the best mu2 (ties uniform). Growing carries all mu1,
// adds floor(mu2/2) - mu1 copies of the best carried individual (clamped at
// zero) and fills the remainder with fresh uniform samples, each evaluated
// through the sink. The sink may stop the run (budget or target) mid-fill,
// in which case the report counts what actually happened.
template <typename EvalSink>
std::pair<Population, HandoffReport> handoff_population(const Population &pop, int mu2, EvalSink &sink,
                                                        Rng &rng) {
    if (pop.empty())
        throw std::invalid_argument("handoff: empty population");
    if (mu2 < 1)
        throw std::invalid_argument("handoff: target mu must be positive");

    const int mu1 = static_cast<int>(pop.size());
    HandoffReport report;
    report.from_mu = mu1;
    report.to_mu = mu2;

    if (mu1 == mu2) {
        report.carried = mu1;
        return {pop, report};
    }
    if (mu1 > mu2) {
        report.carried = mu2;
        return {select_mu_best(pop, mu2, rng), report};
    }

    Population next = pop;
    next.reserve(static_cast<std::size_t>(mu2));
    report.carried = mu1;
    report.best_copies = std::max(mu2 / 2 - mu1, 0);
    const Individual best = select_mu_best(pop, 1, rng).front();
    for (int i = 0; i < report.best_copies; ++i)
        next.push_back(best);
    const int fresh_target = mu2 - mu1 - report.best_copies;
    for (int i = 0; i < fresh_target && !sink.stopped(); ++i) {
        Individual ind;
        ind.genome = random_genome(pop.front().genome.size(), rng);
        ind.fitness = sink.evaluate_counted(ind.genome);
        next.push_back(std::move(ind));
        ++report.fresh;
    }
    return {std::move(next), report};
}

struct SwitchEvent {
    std::size_t entry_index = 0;       // schedule entry activated
    std::uint64_t at_evaluations = 0;  // evaluation count when the switch fired
    HandoffReport handoff;
};

// Executes a switching schedule. Thresholds are checked after
// initialization and after each full generation; entries passed within a
// single generation are fast-forwarded in order, applying each handoff once.
inline RunLog run_dyn_ga(const SwitchPolicy &policy, const ProblemInstance &problem, std::uint64_t budget,
                         double final_target, Rng &rng, RunStats *stats_out = nullptr,
                         std::vector<SwitchEvent> *events_out = nullptr) {
    validate_policy(policy);
    GaEngine engine(policy.schedule.front().config, problem, budget, final_target, rng);

    std::size_t active = 0;
    const auto advance = [&] {
        while (active + 1 < policy.schedule.size() && !engine.stopped() &&
               fitness_reaches(engine.best(), policy.schedule[active + 1].threshold)) {
            ++active;
            const AlgorithmConfig &next = policy.schedule[active].config;
            auto [pop, report] = handoff_population(engine.population(), next.mu, engine, rng);
            engine.population() = std::move(pop);
            engine.set_config(next);
            if (events_out)
                events_out->push_back({active, engine.evaluations(), report});
        }
    };

    engine.initialize();
    advance();
    while (!engine.finished()) {
        engine.step_generation();
        advance();
    }
    if (stats_out)
        *stats_out = engine.stats();
    RunLog log = engine.take_log();
    log.config_name = policy_label(policy);
    return log;
}

} // namespace dynas
