#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "dynas/algorithm_config.hpp"
#include "dynas/run_log.hpp"

namespace dynas {

inline constexpr double ert_infinite = std::numeric_limits<double>::infinity();

// Expected running time over a batch of runs at one target: total
// evaluations spent (hitting runs charge their hitting time, failed runs
// their consumed budget) divided by the number of hitting runs. Returns
// (+inf, 0) when nothing hits.
inline std::pair<double, double> ert(const std::vector<RunLog> &logs, double target) {
    if (logs.empty())
        throw std::invalid_argument("ert: empty run collection");
    for (const auto &log : logs)
        if (log.config_name != logs.front().config_name || log.func_id != logs.front().func_id ||
            log.dimension != logs.front().dimension)
            throw std::invalid_argument("ert: mixed problems or configs in one collection");

    double spent = 0.0;
    int hits = 0;
    for (const auto &log : logs) {
        if (const auto t = first_hitting_time(log, target)) {
            spent += static_cast<double>(*t);
            ++hits;
        } else {
            spent += static_cast<double>(std::min(log.total_evaluations, log.budget));
        }
    }
    const double ps = static_cast<double>(hits) / static_cast<double>(logs.size());
    return {hits > 0 ? spent / hits : ert_infinite, ps};
}

struct ErtKey {
    std::string config_name;
    int func_id = 0;
    int dimension = 0;
    double target = 0.0;

    auto tie() const { return std::tie(config_name, func_id, dimension, target); }
    bool operator<(const ErtKey &o) const { return tie() < o.tie(); }
    bool operator==(const ErtKey &o) const { return tie() == o.tie(); }
};

struct ErtEntry {
    double ert = ert_infinite;
    double success_rate = 0.0;
    int runs = 0;
    std::uint64_t budget = 0;
};

struct ErtTable {
    std::map<ErtKey, ErtEntry> entries;

    const ErtEntry *find(const std::string &config, int func, int dim, double target) const {
        const auto it = entries.find({config, func, dim, target});
        return it == entries.end() ? nullptr : &it->second;
    }

    const ErtEntry &at(const std::string &config, int func, int dim, double target) const {
        if (const auto *e = find(config, func, dim, target))
            return *e;
        throw std::out_of_range("insufficient data: no ERT entry for (" + config + ", F" + std::to_string(func) +
                                ", n=" + std::to_string(dim) + ", target " + format_double(target) + ")");
    }

    std::vector<std::string> configs(int func, int dim) const {
        std::vector<std::string> out;
        for (const auto &[key, value] : entries) {
            (void)value;
            if (key.func_id == func && key.dimension == dim && (out.empty() || out.back() != key.config_name))
                out.push_back(key.config_name);
        }
        return out; // sorted and unique by map order
    }

    std::vector<double> targets(int func, int dim) const {
        std::vector<double> out;
        for (const auto &[key, value] : entries) {
            (void)value;
            if (key.func_id == func && key.dimension == dim)
                out.push_back(key.target);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

// (func_id, dimension) -> targets to tabulate for that problem.
using TargetPlan = std::map<std::pair<int, int>, std::vector<double>>;

inline ErtTable build_ert_table(const std::vector<Batch> &batches, const TargetPlan &plan) {
    ErtTable table;
    for (const auto &batch : batches) {
        const auto it = plan.find({batch.header.func_id, batch.header.dimension});
        if (it == plan.end() || batch.logs.empty())
            continue;
        for (const auto target : it->second) {
            const auto [e, ps] = ert(batch.logs, target);
            table.entries[{batch.header.config_name, batch.header.func_id, batch.header.dimension, target}] = {
                e, ps, static_cast<int>(batch.logs.size()), batch.header.budget};
        }
    }
    return table;
}

inline ErtTable build_ert_table(const std::filesystem::path &data_root, const TargetPlan &plan) {
    return build_ert_table(load_all_batches(data_root), plan);
}

struct CurvePoint {
    double target = 0.0;
    double ert = ert_infinite;
    double success_rate = 0.0;
};

// Per-target ERT/ps pairs over an ascending target list.
inline std::vector<CurvePoint> fixed_target_curve(const std::vector<RunLog> &logs,
                                                  const std::vector<double> &targets) {
    for (std::size_t i = 1; i < targets.size(); ++i)
        if (!(targets[i] > targets[i - 1]))
            throw std::invalid_argument("fixed_target_curve: targets must ascend");
    std::vector<CurvePoint> curve;
    curve.reserve(targets.size());
    for (const auto t : targets) {
        const auto [e, ps] = ert(logs, t);
        curve.push_back({t, e, ps});
    }
    return curve;
}

inline std::string format_ert(double v) { return std::isinf(v) ? "inf" : format_double(v); }

inline void write_ert_csv(const ErtTable &table, std::ostream &out) {
    out << "config_name,func_id,dim,target,ert,ps,runs,budget\n";
    for (const auto &[key, e] : table.entries)
        out << key.config_name << "," << key.func_id << "," << key.dimension << "," << format_double(key.target)
            << "," << format_ert(e.ert) << "," << format_double(e.success_rate) << "," << e.runs << ","
            << e.budget << "\n";
}

} // namespace dynas
