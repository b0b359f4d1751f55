#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynas/problems.hpp"
#include "dynas/rng.hpp"

namespace dynas {

struct ProblemSpec {
    int func_id = 1;
    int dimension = 100;
    double final_target = 0.0;
};

struct ExperimentConfig {
    std::vector<ProblemSpec> problems;
    int runs = 100;
    std::uint64_t budget = 5'000'000;
    std::uint64_t master_seed = 1;
    std::filesystem::path output_dir = "out";
    double ps_min = 0.8;
    int top_k = 100;
    std::optional<int> per_alg_cap;
    int jobs = 0; // 0 = all hardware threads

    void validate() const {
        if (runs < 1)
            throw std::invalid_argument("experiment: runs must be positive");
        if (problems.empty())
            throw std::invalid_argument("experiment: no problems given");
    }
};

// Problem instances are canonical per (func, dimension) so that data
// produced by different commands and seeds refers to the same transforms.
inline std::uint64_t instance_seed(int func_id, int dimension) {
    return mix_seed({fnv1a64("instance"), static_cast<std::uint64_t>(func_id),
                     static_cast<std::uint64_t>(dimension)});
}

inline ProblemInstance make_problem_instance(int func_id, int dimension) {
    return make_problem(func_id, dimension, instance_seed(func_id, dimension));
}

// Built-in final targets in dimension 100 (the concatenated trap uses a
// below-optimum target); every other case defaults to the optimum.
inline double default_final_target(int func_id, int dimension) {
    if (func_id == 24 && dimension == 100)
        return 17.2;
    return make_problem_instance(func_id, dimension).optimum;
}

// Run seeds depend only on identity, not on portfolio order or scheduling.
inline std::uint64_t run_seed(std::uint64_t master_seed, const std::string &config_name, int func_id,
                              int dimension, int run_index) {
    return mix_seed({master_seed, fnv1a64(config_name), static_cast<std::uint64_t>(func_id),
                     static_cast<std::uint64_t>(dimension), static_cast<std::uint64_t>(run_index)});
}

inline ExperimentConfig load_experiment(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open experiment config " + path.string());
    nlohmann::json j;
    in >> j;

    ExperimentConfig e;
    for (const auto &p : j.at("problems")) {
        ProblemSpec spec;
        spec.func_id = p.at("func").get<int>();
        spec.dimension = p.value("dim", 100);
        spec.final_target = p.value("target", default_final_target(spec.func_id, spec.dimension));
        e.problems.push_back(spec);
    }
    e.runs = j.value("runs", e.runs);
    e.budget = j.value("budget", e.budget);
    e.master_seed = j.value("master_seed", e.master_seed);
    e.output_dir = j.value("output_dir", e.output_dir.string());
    e.ps_min = j.value("ps_min", e.ps_min);
    e.top_k = j.value("top_k", e.top_k);
    if (j.contains("per_alg_cap") && !j.at("per_alg_cap").is_null())
        e.per_alg_cap = j.at("per_alg_cap").get<int>();
    e.jobs = j.value("jobs", e.jobs);
    e.validate();
    return e;
}

} // namespace dynas
