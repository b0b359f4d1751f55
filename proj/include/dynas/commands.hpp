#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dynas/dynas.hpp"
#include "dynas/ert.hpp"
#include "dynas/executor.hpp"
#include "dynas/experiment.hpp"
#include "dynas/ga.hpp"
#include "dynas/parallel.hpp"
#include "dynas/policy.hpp"
#include "dynas/portfolio.hpp"
#include "dynas/run_log.hpp"
#include "dynas/svg.hpp"

namespace dynas {

// Errors that should surface as "bad data" (exit code 2) rather than usage.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string sanitize_name(const std::string &name) {
    std::string out;
    for (const char c : name) {
        const bool keep = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                          c == '+' || c == '-' || c == '.' || c == '=';
        if (keep)
            out += c;
        else if (!out.empty() && out.back() != '_')
            out += '_';
    }
    while (!out.empty() && out.back() == '_')
        out.pop_back();
    return out;
}

// All runs of one config on one problem, parallel over run indices, seeds
// derived from identity so results do not depend on scheduling.
inline std::vector<RunLog> run_batch(const AlgorithmConfig &config, const ProblemInstance &problem, int runs,
                                     std::uint64_t budget, double final_target, std::uint64_t master_seed,
                                     int jobs) {
    const std::string name = canonical_name(config);
    std::vector<RunLog> logs(static_cast<std::size_t>(runs));
    parallel_for(static_cast<std::size_t>(runs), jobs, [&](std::size_t i) {
        Rng rng(run_seed(master_seed, name, problem.func_id, problem.dimension, static_cast<int>(i)));
        RunLog log = run_ga(config, problem, budget, final_target, rng);
        log.run_index = static_cast<int>(i);
        logs[i] = std::move(log);
    });
    return logs;
}

struct BenchmarkResult {
    std::filesystem::path manifest_path;
    std::vector<Batch> batches;
};

// Full data production: every (config, problem) pair becomes one batch of
// `runs` independent GA runs, written in the batch format plus a manifest.
inline BenchmarkResult cmd_benchmark(const ExperimentConfig &experiment,
                                     const std::vector<AlgorithmConfig> &portfolio) {
    experiment.validate();
    if (portfolio.empty())
        throw std::invalid_argument("benchmark: empty portfolio");

    struct Task {
        ProblemSpec spec;
        AlgorithmConfig config;
        std::string dir;
        std::string base;
    };
    std::vector<Task> tasks;
    for (const auto &spec : experiment.problems) {
        make_problem_instance(spec.func_id, spec.dimension); // validates func/dim up front
        for (const auto &config : portfolio) {
            Task t;
            t.spec = spec;
            t.config = config;
            t.dir = "data_f" + std::to_string(spec.func_id) + "_d" + std::to_string(spec.dimension);
            t.base = sanitize_name(canonical_name(config));
            tasks.push_back(std::move(t));
        }
    }

    // flat (batch, run) task list keeps all cores busy even for few batches
    std::vector<std::vector<RunLog>> logs(tasks.size());
    std::vector<ProblemInstance> instances(tasks.size());
    for (std::size_t b = 0; b < tasks.size(); ++b) {
        logs[b].resize(static_cast<std::size_t>(experiment.runs));
        instances[b] = make_problem_instance(tasks[b].spec.func_id, tasks[b].spec.dimension);
    }
    const std::size_t total = tasks.size() * static_cast<std::size_t>(experiment.runs);
    parallel_for(total, experiment.jobs, [&](std::size_t flat) {
        const std::size_t b = flat / static_cast<std::size_t>(experiment.runs);
        const int r = static_cast<int>(flat % static_cast<std::size_t>(experiment.runs));
        const Task &t = tasks[b];
        const std::string name = canonical_name(t.config);
        Rng rng(run_seed(experiment.master_seed, name, t.spec.func_id, t.spec.dimension, r));
        RunLog log = run_ga(t.config, instances[b], experiment.budget, t.spec.final_target, rng);
        log.run_index = r;
        logs[b][static_cast<std::size_t>(r)] = std::move(log);
    });

    BenchmarkResult result;
    nlohmann::json manifest;
    manifest["suite"] = "pbo";
    manifest["master_seed"] = experiment.master_seed;
    manifest["batches"] = nlohmann::json::array();
    for (std::size_t b = 0; b < tasks.size(); ++b) {
        const Task &t = tasks[b];
        Batch batch;
        batch.header.func_id = t.spec.func_id;
        batch.header.dimension = t.spec.dimension;
        batch.header.config_name = canonical_name(t.config);
        batch.header.budget = experiment.budget;
        batch.header.runs = experiment.runs;
        batch.header.final_target = t.spec.final_target;
        for (const auto &log : logs[b])
            batch.header.seeds.push_back(log.seed);
        batch.logs = std::move(logs[b]);
        save_batch(experiment.output_dir / t.dir, t.base, batch);
        manifest["batches"].push_back({{"funcId", t.spec.func_id},
                                       {"dim", t.spec.dimension},
                                       {"algId", batch.header.config_name},
                                       {"info", t.dir + "/" + t.base + ".info"},
                                       {"runs", experiment.runs},
                                       {"budget", experiment.budget},
                                       {"finalTarget", t.spec.final_target}});
        result.batches.push_back(std::move(batch));
    }
    result.manifest_path = experiment.output_dir / "manifest.json";
    std::ofstream out(result.manifest_path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + result.manifest_path.string());
    out << manifest.dump(2) << "\n";
    return result;
}

// ---------------------------------------------------------------------------
// Segment study: cost of climbing one LeadingOnes segment [s, s+segment)
// under (10+10) GAs that differ only in the uniform-crossover probability,
// initialized entirely on the level set LO(x) = s.

struct SegmentStudyOptions {
    int dimension = 100;
    int segment = 5;
    std::vector<double> pc_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int runs = 200;
    std::uint64_t budget = 1'000'000;
    std::uint64_t master_seed = 1;
    std::filesystem::path output_dir = "out";
    int jobs = 0;
};

struct SegmentCell {
    int s = 0;
    double p_c = 0.0;
    double mean_evaluations = 0.0;
    double std_error = 0.0;
    int runs = 0;
};

struct SegmentStudyResult {
    std::vector<SegmentCell> cells;
    SwitchPolicy schedule; // per-segment argmin p_c
    std::filesystem::path csv_path;
    std::filesystem::path policy_path;
};

inline AlgorithmConfig segment_study_config(double p_c) {
    AlgorithmConfig c;
    c.mu = 10;
    c.lambda = 10;
    if (p_c > 0.0) {
        c.crossover = CrossoverKind::uniform;
        c.p_c = p_c;
    }
    return c;
}

inline SegmentStudyResult cmd_segment_study(const SegmentStudyOptions &opt) {
    if (opt.dimension % opt.segment != 0)
        throw std::invalid_argument("segment study: segment must divide the dimension");
    for (const auto pc : opt.pc_grid)
        if (pc < 0.0 || pc > 1.0)
            throw std::invalid_argument("segment study: p_c values must lie in [0,1]");
    if (opt.runs < 1)
        throw std::invalid_argument("segment study: runs must be positive");

    const ProblemInstance problem = make_problem_instance(2, opt.dimension);
    std::vector<int> stages;
    for (int s = 0; s + opt.segment <= opt.dimension; s += opt.segment)
        stages.push_back(s);

    struct Cell {
        int s;
        double pc;
    };
    std::vector<Cell> grid;
    for (const auto s : stages)
        for (const auto pc : opt.pc_grid)
            grid.push_back({s, pc});

    std::vector<SegmentCell> cells(grid.size());
    parallel_for(grid.size(), opt.jobs, [&](std::size_t g) {
        const auto [s, pc] = grid[g];
        const AlgorithmConfig config = segment_study_config(pc);
        const std::string name = canonical_name(config) + "@stage=" + std::to_string(s);
        double sum = 0.0, sum_sq = 0.0;
        for (int r = 0; r < opt.runs; ++r) {
            Rng rng(run_seed(opt.master_seed, name, problem.func_id, problem.dimension, r));
            const RunLog log =
                run_ga(config, problem, opt.budget, s + opt.segment, rng, nullptr,
                       [&](int, Rng &rr) { return sample_leading_ones_level(opt.dimension, s, rr); });
            if (!log.hit_final_target)
                throw DataError("segment study: run exhausted its budget at stage " + std::to_string(s));
            const auto e = static_cast<double>(log.total_evaluations);
            sum += e;
            sum_sq += e * e;
        }
        const double mean = sum / opt.runs;
        const double var = opt.runs > 1 ? std::max(sum_sq - opt.runs * mean * mean, 0.0) / (opt.runs - 1) : 0.0;
        cells[g] = {s, pc, mean, std::sqrt(var / opt.runs), opt.runs};
    });

    SegmentStudyResult result;
    result.cells = std::move(cells);

    // per-stage winner; ties go to the smaller p_c (grid order)
    for (const auto s : stages) {
        const SegmentCell *best = nullptr;
        for (const auto &c : result.cells)
            if (c.s == s && (best == nullptr || c.mean_evaluations < best->mean_evaluations))
                best = &c;
        ScheduleEntry e;
        e.threshold = s == 0 ? -std::numeric_limits<double>::infinity() : static_cast<double>(s);
        e.config = segment_study_config(best->p_c);
        result.schedule.schedule.push_back(std::move(e));
    }

    std::filesystem::create_directories(opt.output_dir);
    result.csv_path = opt.output_dir / "segment_study.csv";
    {
        std::ofstream out(result.csv_path, std::ios::binary);
        out << "s,p_c,mean_evaluations,std_error,runs\n";
        for (const auto &c : result.cells)
            out << c.s << "," << format_double(c.p_c) << "," << format_double(c.mean_evaluations) << ","
                << format_double(c.std_error) << "," << c.runs << "\n";
    }
    result.policy_path = opt.output_dir / "segment_policy.txt";
    {
        std::ofstream out(result.policy_path, std::ios::binary);
        write_policy(result.schedule, out);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Prediction: ERT table -> best static algorithm, best switching policy and
// the ranked top-k per problem.

struct PredictResult {
    std::vector<ProblemReport> rows;
    std::map<std::pair<int, int>, std::vector<PolicyPrediction>> ranked;
    ErtTable table;
    std::filesystem::path csv_path;
    std::filesystem::path policies_path;
};

inline TargetPlan experiment_target_plan(const ExperimentConfig &experiment) {
    TargetPlan plan;
    for (const auto &spec : experiment.problems) {
        const auto instance = make_problem_instance(spec.func_id, spec.dimension);
        plan[{spec.func_id, spec.dimension}] =
            generate_targets(min_fitness(instance), spec.final_target).values;
    }
    return plan;
}

inline PredictResult cmd_predict(const std::filesystem::path &data_root, const ExperimentConfig &experiment,
                                 const std::filesystem::path &report_dir) {
    experiment.validate();
    std::vector<Batch> batches;
    try {
        batches = load_all_batches(data_root);
    } catch (const ParseError &e) {
        throw DataError(e.what());
    }

    PredictResult result;
    result.table = build_ert_table(batches, experiment_target_plan(experiment));

    nlohmann::json policies_json;
    policies_json["master_seed"] = experiment.master_seed;
    policies_json["problems"] = nlohmann::json::array();

    for (const auto &spec : experiment.problems) {
        ProblemReport row;
        row.func_id = spec.func_id;
        row.dimension = spec.dimension;
        row.f_target = spec.final_target;
        nlohmann::json pj = {{"funcId", spec.func_id}, {"dim", spec.dimension}, {"fTarget", spec.final_target}};
        try {
            const auto instance = make_problem_instance(spec.func_id, spec.dimension);
            const auto targets = generate_targets(min_fitness(instance), spec.final_target);
            if (result.table.configs(spec.func_id, spec.dimension).empty())
                throw DataError("insufficient data: no batches for F" + std::to_string(spec.func_id) + " n=" +
                                std::to_string(spec.dimension));
            const auto [bsa, s_ert] = best_static(result.table, spec.func_id, spec.dimension, spec.final_target);
            auto ranked = rank_policies(result.table, targets, spec.func_id, spec.dimension, spec.final_target,
                                        experiment.ps_min, experiment.top_k, experiment.per_alg_cap);
            row.ok = true;
            row.bsa = bsa;
            row.s_ert = s_ert;
            row.best = ranked.front();
            row.ratio = (s_ert - row.best.predicted_ert) / s_ert;
            pj["bsa"] = bsa;
            pj["sERT"] = s_ert;
            pj["phiMin"] = targets.phi_min;
            pj["policies"] = nlohmann::json::array();
            for (const auto &p : ranked)
                pj["policies"].push_back({{"a1", p.a1},
                                          {"a2", p.a2},
                                          {"phiS", p.phi_s},
                                          {"predictedErt", p.predicted_ert}});
            result.ranked[{spec.func_id, spec.dimension}] = std::move(ranked);
        } catch (const std::exception &e) {
            row.ok = false;
            row.error = e.what();
            pj["error"] = row.error;
        }
        result.rows.push_back(row);
        policies_json["problems"].push_back(std::move(pj));
    }

    std::filesystem::create_directories(report_dir);
    result.csv_path = report_dir / "predictions.csv";
    {
        std::ofstream out(result.csv_path, std::ios::binary);
        write_prediction_csv(result.rows, out);
    }
    result.policies_path = report_dir / "policies.json";
    {
        std::ofstream out(result.policies_path, std::ios::binary);
        out << policies_json.dump(2) << "\n";
    }
    return result;
}

// ---------------------------------------------------------------------------
// Validation: execute predicted policies as real switching runs and compare
// measured ERT against the static baseline.

struct ValidationRow {
    int func_id = 0;
    int dimension = 0;
    std::string a1;
    std::string a2;
    double phi_s = 0.0;
    double predicted_ert = ert_infinite;
    double measured_ert = ert_infinite;
    double measured_ps = 0.0;
    double s_ert = ert_infinite;
    double rel_deviation = 0.0; // (measured - sERT) / sERT
};

struct ValidateResult {
    std::vector<ValidationRow> rows;
    std::filesystem::path csv_path;
};

inline ValidateResult cmd_validate(const std::filesystem::path &policies_path,
                                   const std::filesystem::path &data_root, const ExperimentConfig &experiment,
                                   const std::filesystem::path &report_dir, int max_policies = 0) {
    std::ifstream in(policies_path);
    if (!in)
        throw DataError("cannot open policies file " + policies_path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception &e) {
        throw DataError("policies file: " + std::string(e.what()));
    }

    std::vector<Batch> batches;
    if (!data_root.empty())
        batches = load_all_batches(data_root);

    ValidateResult result;
    std::filesystem::create_directories(report_dir);

    for (const auto &pj : doc.at("problems")) {
        if (pj.contains("error"))
            continue;
        const int func = pj.at("funcId").get<int>();
        const int dim = pj.at("dim").get<int>();
        const double f_target = pj.at("fTarget").get<double>();
        const double s_ert = pj.at("sERT").get<double>();
        const std::string bsa = pj.value("bsa", "");
        const ProblemInstance problem = make_problem_instance(func, dim);

        std::vector<SwitchPolicy> policies;
        std::vector<std::pair<std::string, std::string>> names;
        std::vector<double> phis, predicted;
        for (const auto &p : pj.at("policies")) {
            if (max_policies > 0 && static_cast<int>(policies.size()) >= max_policies)
                break;
            const auto a1 = p.at("a1").get<std::string>();
            const auto a2 = p.at("a2").get<std::string>();
            const double phi_s = p.at("phiS").get<double>();
            policies.push_back(make_switch_once(parse_config_name(a1), parse_config_name(a2), phi_s));
            names.emplace_back(a1, a2);
            phis.push_back(phi_s);
            predicted.push_back(p.value("predictedErt", ert_infinite));
        }

        std::vector<std::vector<RunLog>> policy_logs(policies.size());
        for (auto &slot : policy_logs)
            slot.resize(static_cast<std::size_t>(experiment.runs));
        const std::size_t total = policies.size() * static_cast<std::size_t>(experiment.runs);
        parallel_for(total, experiment.jobs, [&](std::size_t flat) {
            const std::size_t pi = flat / static_cast<std::size_t>(experiment.runs);
            const int r = static_cast<int>(flat % static_cast<std::size_t>(experiment.runs));
            const std::string label = policy_label(policies[pi]);
            Rng rng(run_seed(experiment.master_seed, label, func, dim, r));
            RunLog log = run_dyn_ga(policies[pi], problem, experiment.budget, f_target, rng);
            log.run_index = r;
            policy_logs[pi][static_cast<std::size_t>(r)] = std::move(log);
        });

        std::vector<double> measured_erts(policies.size(), ert_infinite);
        std::size_t best_index = policies.size();
        for (std::size_t pi = 0; pi < policies.size(); ++pi) {
            const auto [measured, ps] = ert(policy_logs[pi], f_target);
            measured_erts[pi] = measured;
            if (!std::isinf(measured) && (best_index == policies.size() || measured < measured_erts[best_index]))
                best_index = pi;
            ValidationRow row;
            row.func_id = func;
            row.dimension = dim;
            row.a1 = names[pi].first;
            row.a2 = names[pi].second;
            row.phi_s = phis[pi];
            row.predicted_ert = predicted[pi];
            row.measured_ert = measured;
            row.measured_ps = ps;
            row.s_ert = s_ert;
            row.rel_deviation = (measured - s_ert) / s_ert;
            result.rows.push_back(row);
        }

        // fixed-target overlay of the static baseline and the best dynGA
        if (!bsa.empty() && best_index < policies.size()) {
            const auto instance_targets = generate_targets(min_fitness(problem), f_target);
            std::vector<SvgCurve> curves;
            for (const auto &batch : batches)
                if (batch.header.func_id == func && batch.header.dimension == dim &&
                    batch.header.config_name == bsa) {
                    curves.push_back({"BSA " + bsa, fixed_target_curve(batch.logs, instance_targets.values)});
                    break;
                }
            curves.push_back({"dynGA " + names[best_index].first + " -> " + names[best_index].second + " @ " +
                                  format_double(phis[best_index]),
                              fixed_target_curve(policy_logs[best_index], instance_targets.values)});
            std::ofstream svg(report_dir / ("fixed_target_f" + std::to_string(func) + "_d" +
                                            std::to_string(dim) + ".svg"),
                              std::ios::binary);
            write_fixed_target_svg(curves, "F" + std::to_string(func) + " n=" + std::to_string(dim), svg);
        }
    }

    result.csv_path = report_dir / "validation.csv";
    std::ofstream out(result.csv_path, std::ios::binary);
    out << "funcId,dim,A1,A2,sTarget,predictedERT,measuredERT,measuredPs,sERT,relDeviation\n";
    for (const auto &r : result.rows)
        out << r.func_id << "," << r.dimension << "," << r.a1 << "," << r.a2 << "," << format_double(r.phi_s)
            << "," << format_ert(r.predicted_ert) << "," << format_ert(r.measured_ert) << ","
            << format_double(r.measured_ps) << "," << format_ert(r.s_ert) << ","
            << format_double(r.rel_deviation) << "\n";
    return result;
}

// Measures one explicit schedule (e.g. the segment-study policy file).
struct PolicyMeasurement {
    double ert = ert_infinite;
    double success_rate = 0.0;
    std::vector<RunLog> logs;
};

inline PolicyMeasurement measure_policy(const SwitchPolicy &policy, int func, int dim, double final_target,
                                        int runs, std::uint64_t budget, std::uint64_t master_seed, int jobs) {
    const ProblemInstance problem = make_problem_instance(func, dim);
    const std::string label = policy_label(policy);
    PolicyMeasurement m;
    m.logs.resize(static_cast<std::size_t>(runs));
    parallel_for(static_cast<std::size_t>(runs), jobs, [&](std::size_t i) {
        Rng rng(run_seed(master_seed, label, func, dim, static_cast<int>(i)));
        RunLog log = run_dyn_ga(policy, problem, budget, final_target, rng);
        log.run_index = static_cast<int>(i);
        m.logs[i] = std::move(log);
    });
    const auto [e, ps] = ert(m.logs, final_target);
    m.ert = e;
    m.success_rate = ps;
    return m;
}

// ---------------------------------------------------------------------------
// Plain reporting: the full ERT table as CSV plus one fixed-target plot per
// problem found in the data.

inline void cmd_report(const std::filesystem::path &data_root, const std::filesystem::path &report_dir) {
    std::vector<Batch> batches;
    try {
        batches = load_all_batches(data_root);
    } catch (const ParseError &e) {
        throw DataError(e.what());
    }
    if (batches.empty())
        throw DataError("no batches found under " + data_root.string());

    // per problem: final target = largest recorded batch target
    std::map<std::pair<int, int>, double> finals;
    for (const auto &b : batches) {
        auto &t = finals[{b.header.func_id, b.header.dimension}];
        t = std::max(t, b.header.final_target);
    }
    TargetPlan plan;
    std::map<std::pair<int, int>, TargetSet> target_sets;
    for (const auto &[key, f_target] : finals) {
        const auto instance = make_problem_instance(key.first, key.second);
        target_sets[key] = generate_targets(min_fitness(instance), f_target);
        plan[key] = target_sets[key].values;
    }

    const ErtTable table = build_ert_table(batches, plan);
    std::filesystem::create_directories(report_dir);
    {
        std::ofstream out(report_dir / "ert_table.csv", std::ios::binary);
        write_ert_csv(table, out);
    }

    for (const auto &[key, targets] : target_sets) {
        const auto [func, dim] = key;
        // up to ten curves, best ERT at the final target first
        std::vector<std::pair<double, const Batch *>> order;
        for (const auto &b : batches)
            if (b.header.func_id == func && b.header.dimension == dim) {
                const auto *e = table.find(b.header.config_name, func, dim, finals[key]);
                order.emplace_back(e != nullptr ? e->ert : ert_infinite, &b);
            }
        std::sort(order.begin(), order.end(),
                  [](const auto &a, const auto &b) { return a.first < b.first; });
        std::vector<SvgCurve> curves;
        for (const auto &[e, batch] : order) {
            (void)e;
            if (curves.size() == 10)
                break;
            curves.push_back({batch->header.config_name, fixed_target_curve(batch->logs, targets.values)});
        }
        std::ofstream svg(report_dir / ("fixed_target_f" + std::to_string(func) + "_d" + std::to_string(dim) +
                                        ".svg"),
                          std::ios::binary);
        write_fixed_target_svg(curves, "F" + std::to_string(func) + " n=" + std::to_string(dim), svg);
    }
}

} // namespace dynas
