#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynas/commands.hpp"

namespace {

struct CommonOpts {
    std::vector<int> funcs;
    int dim = 100;
    std::optional<double> target;
    int runs = 100;
    std::uint64_t budget = 5'000'000;
    std::uint64_t seed = 1;
    std::string out = "out";
    double ps_min = 0.8;
    int top_k = 100;
    std::optional<int> cap;
    int jobs = 0;
    std::string config_path;
    std::vector<std::string> algos;
};

void add_experiment_flags(CLI::App *cmd, CommonOpts &o) {
    cmd->add_option("--func", o.funcs, "benchmark function id(s): 1-8, 24");
    cmd->add_option("--dim", o.dim, "problem dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--target", o.target, "final target (single --func only; default per function)");
    cmd->add_option("--runs", o.runs, "independent runs per batch")->check(CLI::PositiveNumber);
    cmd->add_option("--budget", o.budget, "evaluation budget per run");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--ps-min", o.ps_min, "success-rate filter for policy anchors");
    cmd->add_option("--top-k", o.top_k, "ranked policies kept per problem");
    cmd->add_option("--cap", o.cap, "per-algorithm cap in the ranked list");
    cmd->add_option("--jobs", o.jobs, "worker threads (0 = all cores)");
    cmd->add_option("--config", o.config_path, "experiment config JSON (flags override)");
}

dynas::ExperimentConfig build_experiment(const CLI::App *cmd, const CommonOpts &o) {
    dynas::ExperimentConfig e;
    if (!o.config_path.empty())
        e = dynas::load_experiment(o.config_path);
    if (!o.funcs.empty()) {
        if (o.target && o.funcs.size() != 1)
            throw std::invalid_argument("--target requires exactly one --func");
        e.problems.clear();
        for (const auto f : o.funcs) {
            dynas::ProblemSpec spec;
            spec.func_id = f;
            spec.dimension = o.dim;
            spec.final_target = o.target ? *o.target : dynas::default_final_target(f, o.dim);
            e.problems.push_back(spec);
        }
    }
    const auto seen = [&](const std::string &flag) { return cmd->count(flag) > 0; };
    if (seen("--runs"))
        e.runs = o.runs;
    if (seen("--budget"))
        e.budget = o.budget;
    if (seen("--seed"))
        e.master_seed = o.seed;
    if (seen("--out") || o.config_path.empty())
        e.output_dir = o.out;
    if (seen("--ps-min"))
        e.ps_min = o.ps_min;
    if (seen("--top-k"))
        e.top_k = o.top_k;
    if (seen("--cap"))
        e.per_alg_cap = o.cap;
    if (seen("--jobs"))
        e.jobs = o.jobs;
    e.validate();
    return e;
}

std::vector<dynas::AlgorithmConfig> build_portfolio(const std::vector<std::string> &algos) {
    if (algos.empty())
        return dynas::full_portfolio();
    std::vector<dynas::AlgorithmConfig> configs;
    configs.reserve(algos.size());
    for (const auto &name : algos)
        configs.push_back(dynas::parse_config_name(name));
    return configs;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Benchmarking and one-shot dynamic algorithm selection for (mu+lambda) GAs "
                 "on pseudo-Boolean problems"};
    app.require_subcommand(1);

    CommonOpts bench_opts;
    auto *bench = app.add_subcommand("benchmark", "run a portfolio on problems and write fixed-target data");
    add_experiment_flags(bench, bench_opts);
    bench->add_option("--algo", bench_opts.algos, "restrict the portfolio to these canonical names");

    struct {
        int dim = 100;
        int segment = 5;
        std::vector<double> pc_grid;
        int runs = 200;
        std::uint64_t budget = 1'000'000;
        std::uint64_t seed = 1;
        std::string out = "out";
        int jobs = 0;
    } seg_opts;
    auto *seg = app.add_subcommand("segment-study",
                                   "per-stage crossover-probability study on LeadingOnes level sets");
    seg->add_option("--dim", seg_opts.dim, "problem dimension")->check(CLI::PositiveNumber);
    seg->add_option("--segment", seg_opts.segment, "stage length")->check(CLI::PositiveNumber);
    seg->add_option("--pc-grid", seg_opts.pc_grid, "crossover probabilities (default 0, 0.1, ..., 0.9)");
    seg->add_option("--runs", seg_opts.runs, "runs per (stage, p_c) cell")->check(CLI::PositiveNumber);
    seg->add_option("--budget", seg_opts.budget, "evaluation budget per run");
    seg->add_option("--seed", seg_opts.seed, "master seed");
    seg->add_option("--out", seg_opts.out, "output directory");
    seg->add_option("--jobs", seg_opts.jobs, "worker threads (0 = all cores)");

    CommonOpts pred_opts;
    std::string pred_data;
    auto *pred = app.add_subcommand("predict", "build the ERT table and rank switching policies");
    add_experiment_flags(pred, pred_opts);
    pred->add_option("--data", pred_data, "benchmark data directory")->required();

    CommonOpts val_opts;
    std::string val_data, val_policies, val_policy_file;
    int val_max_policies = 0;
    auto *val = app.add_subcommand("validate", "execute predicted policies and compare with the baseline");
    add_experiment_flags(val, val_opts);
    val->add_option("--data", val_data, "benchmark data directory (for baseline curves)");
    val->add_option("--policies", val_policies, "policies.json produced by predict");
    val->add_option("--policy-file", val_policy_file, "explicit switching schedule to measure");
    val->add_option("--max-policies", val_max_policies, "validate at most this many policies per problem");

    std::string rep_data, rep_out = "report";
    auto *rep = app.add_subcommand("report", "emit the ERT table CSV and fixed-target plots");
    rep->add_option("--data", rep_data, "benchmark data directory")->required();
    rep->add_option("--out", rep_out, "report directory");

    try {
        app.parse(argc, argv);

        if (bench->parsed()) {
            const auto experiment = build_experiment(bench, bench_opts);
            const auto result = dynas::cmd_benchmark(experiment, build_portfolio(bench_opts.algos));
            std::cout << "wrote " << result.batches.size() << " batches; manifest "
                      << result.manifest_path.string() << "\n";
        } else if (seg->parsed()) {
            dynas::SegmentStudyOptions opt;
            opt.dimension = seg_opts.dim;
            opt.segment = seg_opts.segment;
            if (!seg_opts.pc_grid.empty())
                opt.pc_grid = seg_opts.pc_grid;
            opt.runs = seg_opts.runs;
            opt.budget = seg_opts.budget;
            opt.master_seed = seg_opts.seed;
            opt.output_dir = seg_opts.out;
            opt.jobs = seg_opts.jobs;
            const auto result = dynas::cmd_segment_study(opt);
            std::cout << "wrote " << result.csv_path.string() << " and " << result.policy_path.string() << "\n";
        } else if (pred->parsed()) {
            const auto experiment = build_experiment(pred, pred_opts);
            const auto result = dynas::cmd_predict(pred_data, experiment, experiment.output_dir);
            for (const auto &row : result.rows) {
                if (row.ok)
                    std::cout << "F" << row.func_id << ": BSA " << row.bsa << " sERT "
                              << dynas::format_ert(row.s_ert) << "; best policy " << row.best.a1 << " -> "
                              << row.best.a2 << " @ " << dynas::format_double(row.best.phi_s) << " dERT "
                              << dynas::format_ert(row.best.predicted_ert) << "\n";
                else
                    std::cout << "F" << row.func_id << ": " << row.error << "\n";
            }
            std::cout << "wrote " << result.csv_path.string() << " and " << result.policies_path.string()
                      << "\n";
        } else if (val->parsed()) {
            const auto experiment = build_experiment(val, val_opts);
            if (!val_policy_file.empty()) {
                if (experiment.problems.size() != 1)
                    throw std::invalid_argument("--policy-file needs exactly one --func");
                std::ifstream in(val_policy_file);
                if (!in)
                    throw dynas::DataError("cannot open policy file " + val_policy_file);
                const auto policy = dynas::parse_policy(in);
                const auto &spec = experiment.problems.front();
                const auto m =
                    dynas::measure_policy(policy, spec.func_id, spec.dimension, spec.final_target,
                                          experiment.runs, experiment.budget, experiment.master_seed,
                                          experiment.jobs);
                std::cout << "measured ERT " << dynas::format_ert(m.ert) << " (ps "
                          << dynas::format_double(m.success_rate) << ") over " << experiment.runs << " runs\n";
            } else {
                if (val_policies.empty())
                    throw std::invalid_argument("validate needs --policies or --policy-file");
                const auto result = dynas::cmd_validate(val_policies, val_data, experiment,
                                                        experiment.output_dir, val_max_policies);
                int improved = 0;
                for (const auto &row : result.rows)
                    improved += row.rel_deviation < 0.0;
                std::cout << "validated " << result.rows.size() << " policies; " << improved
                          << " beat the static baseline; wrote " << result.csv_path.string() << "\n";
            }
        } else if (rep->parsed()) {
            dynas::cmd_report(rep_data, rep_out);
            std::cout << "wrote report under " << rep_out << "\n";
        }
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const dynas::DataError &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const dynas::ParseError &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
