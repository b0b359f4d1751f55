#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynas/ert.hpp"
#include "dynas/policy.hpp"

namespace dynas {

// Candidate switch targets between the lowest fitness phi_min and the final
// target phi_final: the interior points of a 20-way linear partition, the
// interior points of a 20-way log-scale partition (bounds shifted above zero
// first when needed), plus both endpoints. Duplicates collapse.
struct TargetSet {
    std::vector<double> values;
    double phi_min = 0.0;
    double phi_final = 0.0;
};

inline TargetSet generate_targets(double phi_min, double phi_final, int points_per_scale = 19) {
    if (!(phi_min < phi_final))
        throw std::invalid_argument("generate_targets: phi_min must be below phi_final");
    if (points_per_scale < 1)
        throw std::invalid_argument("generate_targets: need at least one point per scale");

    const int parts = points_per_scale + 1;
    std::vector<double> v = {phi_min, phi_final};
    for (int k = 1; k <= points_per_scale; ++k)
        v.push_back(phi_min + (phi_final - phi_min) * k / parts);
    const double shift = phi_min <= 0.0 ? 1.0 - phi_min : 0.0;
    const double la = std::log(phi_min + shift);
    const double lb = std::log(phi_final + shift);
    for (int k = 1; k <= points_per_scale; ++k) {
        const double t = std::exp(la + (lb - la) * k / parts) - shift;
        v.push_back(std::clamp(t, phi_min, phi_final));
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return {std::move(v), phi_min, phi_final};
}

// Predicted switch-once performance and its three ERT components:
// ERT(A1, phi_s), ERT(A2, phi_f), ERT(A2, phi_s).
struct PolicyPrediction {
    std::string a1;
    std::string a2;
    double phi_s = 0.0;
    double phi_f = 0.0;
    double predicted_ert = ert_infinite;
    std::array<double, 3> components = {ert_infinite, ert_infinite, ert_infinite};
    bool feasible = false;

    SwitchPolicy policy() const { return make_switch_once(parse_config_name(a1), parse_config_name(a2), phi_s); }
};

inline constexpr double default_ps_min = 0.8;

// T = ERT(A1,phi_s) + ERT(A2,phi_f) - ERT(A2,phi_s), evaluated as
// c2 + (c1 - c3) so that A1 = A2 yields exactly ERT(A2,phi_f). Any infinite
// component makes the prediction infeasible. The success-rate filter applies
// to A1 at the switch target and A2 at the final target.
inline PolicyPrediction predicted_ert(const ErtTable &table, const std::string &a1, const std::string &a2,
                                      double phi_s, double phi_f, int func, int dim,
                                      double ps_min = default_ps_min) {
    const ErtEntry &e1 = table.at(a1, func, dim, phi_s);
    const ErtEntry &e2 = table.at(a2, func, dim, phi_f);
    const ErtEntry &e3 = table.at(a2, func, dim, phi_s);

    PolicyPrediction p;
    p.a1 = a1;
    p.a2 = a2;
    p.phi_s = phi_s;
    p.phi_f = phi_f;
    p.components = {e1.ert, e2.ert, e3.ert};
    if (std::isinf(e1.ert) || std::isinf(e2.ert) || std::isinf(e3.ert)) {
        p.predicted_ert = ert_infinite;
        p.feasible = false;
        return p;
    }
    p.predicted_ert = e2.ert + (e1.ert - e3.ert);
    p.feasible = e1.success_rate >= ps_min && e2.success_rate >= ps_min;
    return p;
}

// Argmin of ERT at the final target; ties break on the canonical name.
inline std::pair<std::string, double> best_static(const ErtTable &table, int func, int dim, double phi_f) {
    std::optional<std::pair<std::string, double>> best;
    for (const auto &config : table.configs(func, dim)) {
        const auto *e = table.find(config, func, dim, phi_f);
        if (e == nullptr || std::isinf(e->ert))
            continue;
        if (!best || e->ert < best->second)
            best = {config, e->ert};
    }
    if (!best)
        throw std::runtime_error("no successful algorithm at the final target");
    return *best;
}

namespace detail {

// Ordering for policy argmin and ranking: predicted ERT, then
// (a1, a2, phi_s) lexicographically for determinism.
inline bool prediction_less(const PolicyPrediction &a, const PolicyPrediction &b) {
    if (a.predicted_ert != b.predicted_ert)
        return a.predicted_ert < b.predicted_ert;
    if (a.a1 != b.a1)
        return a.a1 < b.a1;
    if (a.a2 != b.a2)
        return a.a2 < b.a2;
    return a.phi_s < b.phi_s;
}

template <typename Fn>
inline void for_each_prediction(const ErtTable &table, const TargetSet &targets, int func, int dim,
                                double phi_f, double ps_min, Fn &&fn) {
    const auto configs = table.configs(func, dim);
    for (const auto &a1 : configs)
        for (const auto &a2 : configs)
            for (const auto phi_s : targets.values)
                fn(predicted_ert(table, a1, a2, phi_s, phi_f, func, dim, ps_min));
}

} // namespace detail

// Exhaustive argmin of the predicted ERT over A1 x A2 x Phi, restricted to
// feasible predictions.
inline PolicyPrediction best_dynamic(const ErtTable &table, const TargetSet &targets, int func, int dim,
                                     double phi_f, double ps_min = default_ps_min) {
    std::optional<PolicyPrediction> best;
    detail::for_each_prediction(table, targets, func, dim, phi_f, ps_min, [&](const PolicyPrediction &p) {
        if (!p.feasible)
            return;
        if (!best || detail::prediction_less(p, *best))
            best = p;
    });
    if (!best)
        throw std::runtime_error("no feasible switching policy");
    return *best;
}

// All feasible predictions sorted ascending by predicted ERT, truncated to
// top_k. With a per-algorithm cap, a greedy pass over the sorted order skips
// any policy whose A1 (or A2) already appears cap times in the kept list.
inline std::vector<PolicyPrediction> rank_policies(const ErtTable &table, const TargetSet &targets, int func,
                                                   int dim, double phi_f, double ps_min, int top_k,
                                                   std::optional<int> per_alg_cap = std::nullopt) {
    if (top_k < 1)
        throw std::invalid_argument("rank_policies: top_k must be positive");
    std::vector<PolicyPrediction> all;
    detail::for_each_prediction(table, targets, func, dim, phi_f, ps_min, [&](const PolicyPrediction &p) {
        if (p.feasible)
            all.push_back(p);
    });
    if (all.empty())
        throw std::runtime_error("no feasible switching policy");
    std::sort(all.begin(), all.end(), detail::prediction_less);
    all.erase(std::unique(all.begin(), all.end(),
                          [](const PolicyPrediction &a, const PolicyPrediction &b) {
                              return a.a1 == b.a1 && a.a2 == b.a2 && a.phi_s == b.phi_s;
                          }),
              all.end());

    std::vector<PolicyPrediction> kept;
    std::map<std::string, int> used_a1, used_a2;
    for (const auto &p : all) {
        if (static_cast<int>(kept.size()) == top_k)
            break;
        if (per_alg_cap) {
            if (used_a1[p.a1] >= *per_alg_cap || used_a2[p.a2] >= *per_alg_cap)
                continue;
            ++used_a1[p.a1];
            ++used_a2[p.a2];
        }
        kept.push_back(p);
    }
    return kept;
}

// One row of the prediction report.
struct ProblemReport {
    int func_id = 0;
    int dimension = 0;
    double f_target = 0.0;
    bool ok = false;
    std::string error;
    std::string bsa;
    double s_ert = ert_infinite;
    PolicyPrediction best;
    double ratio = 0.0; // (sERT - dERT) / sERT
};

inline void write_prediction_csv(const std::vector<ProblemReport> &rows, std::ostream &out) {
    out << "funcId,fTarget,BSA,sERT,A1,A2,sTarget,dERT,ratio\n";
    for (const auto &r : rows) {
        out << r.func_id << "," << format_double(r.f_target) << ",";
        if (!r.ok) {
            out << "insufficient data,,,,,,\n";
            continue;
        }
        out << r.bsa << "," << format_ert(r.s_ert) << "," << r.best.a1 << "," << r.best.a2 << ","
            << format_double(r.best.phi_s) << "," << format_ert(r.best.predicted_ert) << ","
            << format_double(r.ratio) << "\n";
    }
}

} // namespace dynas
