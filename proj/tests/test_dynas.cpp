#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "dynas/dynas.hpp"
#include "dynas/rng.hpp"

using namespace dynas;

namespace {

void put(ErtTable &table, const std::string &config, double target, double ert_value, double ps,
         int func = 1, int dim = 100) {
    table.entries[{config, func, dim, target}] = {ert_value, ps, 100, 100000};
}

// integer-valued random table: per config, ERT ascends over targets and may
// become infinite from a random point on; ps is non-increasing and hits zero
// exactly where ERT is infinite
ErtTable random_table(Rng &rng, const std::vector<std::string> &configs, const std::vector<double> &targets) {
    ErtTable table;
    for (const auto &config : configs) {
        double ert_value = static_cast<double>(1 + rng.below(20));
        double ps = 1.0;
        std::size_t inf_from = rng.below(targets.size() + 3); // often never
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (t >= inf_from) {
                put(table, config, targets[t], ert_infinite, 0.0);
                continue;
            }
            ert_value += static_cast<double>(rng.below(30));
            if (rng.below(4) == 0)
                ps = std::max(0.05, ps - 0.25);
            put(table, config, targets[t], ert_value, ps);
        }
    }
    return table;
}

struct OraclePolicy {
    double t = ert_infinite;
    std::string a1, a2;
    double phi_s = 0.0;
};

// test-local re-enumeration, written without rank_policies/best_dynamic
std::vector<OraclePolicy> oracle_enumerate(const ErtTable &table, const std::vector<std::string> &configs,
                                           const std::vector<double> &targets, double phi_f, double ps_min) {
    std::vector<OraclePolicy> out;
    for (const auto &a1 : configs)
        for (const auto &a2 : configs)
            for (const auto phi_s : targets) {
                const auto &e1 = table.at(a1, 1, 100, phi_s);
                const auto &e2 = table.at(a2, 1, 100, phi_f);
                const auto &e3 = table.at(a2, 1, 100, phi_s);
                if (std::isinf(e1.ert) || std::isinf(e2.ert) || std::isinf(e3.ert))
                    continue;
                if (e1.success_rate < ps_min || e2.success_rate < ps_min)
                    continue;
                out.push_back({e1.ert + e2.ert - e3.ert, a1, a2, phi_s});
            }
    std::sort(out.begin(), out.end(), [](const OraclePolicy &x, const OraclePolicy &y) {
        if (x.t != y.t)
            return x.t < y.t;
        if (x.a1 != y.a1)
            return x.a1 < y.a1;
        if (x.a2 != y.a2)
            return x.a2 < y.a2;
        return x.phi_s < y.phi_s;
    });
    return out;
}

std::vector<OraclePolicy> oracle_cap(const std::vector<OraclePolicy> &sorted, int top_k, int cap) {
    std::vector<OraclePolicy> kept;
    std::map<std::string, int> a1_used, a2_used;
    for (const auto &p : sorted) {
        if (static_cast<int>(kept.size()) == top_k)
            break;
        if (a1_used[p.a1] >= cap || a2_used[p.a2] >= cap)
            continue;
        ++a1_used[p.a1];
        ++a2_used[p.a2];
        kept.push_back(p);
    }
    return kept;
}

} // namespace

TEST_CASE("target generation") {
    const auto t = generate_targets(0.0, 100.0);
    CHECK(t.phi_min == 0.0);
    CHECK(t.phi_final == 100.0);
    for (int k = 1; k <= 19; ++k)
        CHECK(std::count(t.values.begin(), t.values.end(), 5.0 * k) == 1);
    CHECK(t.values.front() == 0.0);
    CHECK(t.values.back() == 100.0);
    CHECK(t.values.size() <= 40);
    CHECK(t.values.size() >= 21);
    for (std::size_t i = 1; i < t.values.size(); ++i)
        CHECK(t.values[i] > t.values[i - 1]);

    const auto shifted = generate_targets(-3.0, 5.0); // log scale needs the shift
    for (const auto v : shifted.values) {
        CHECK(v >= -3.0);
        CHECK(v <= 5.0);
    }

    CHECK_THROWS(generate_targets(5.0, 5.0));
    CHECK_THROWS(generate_targets(5.0, 1.0));
    CHECK_THROWS(generate_targets(0.0, 1.0, 0));
    CHECK_NOTHROW(generate_targets(0.0, 1e-12));
}

TEST_CASE("predicted switching performance") {
    ErtTable table;
    put(table, "A", 50.0, 5.0, 1.0);
    put(table, "A", 100.0, 40.0, 1.0);
    put(table, "B", 50.0, 8.0, 1.0);
    put(table, "B", 100.0, 20.0, 0.9);

    const auto p = predicted_ert(table, "A", "B", 50.0, 100.0, 1, 100);
    CHECK(p.predicted_ert == 17.0);
    CHECK(p.components == std::array<double, 3>{5.0, 20.0, 8.0});
    CHECK(p.feasible);

    // A1 = A2 collapses to the plain ERT, exactly
    const auto same = predicted_ert(table, "B", "B", 50.0, 100.0, 1, 100);
    CHECK(same.predicted_ert == 20.0);

    CHECK_THROWS_WITH(predicted_ert(table, "C", "B", 50.0, 100.0, 1, 100),
                      Catch::Matchers::ContainsSubstring("insufficient data") &&
                          Catch::Matchers::ContainsSubstring("C"));

    put(table, "D", 50.0, ert_infinite, 0.0);
    put(table, "D", 100.0, 30.0, 1.0);
    const auto inf_comp = predicted_ert(table, "D", "B", 50.0, 100.0, 1, 100);
    CHECK(std::isinf(inf_comp.predicted_ert));
    CHECK_FALSE(inf_comp.feasible);

    // ps filter applies to A1 at phi_s and A2 at phi_f
    put(table, "E", 50.0, 6.0, 0.7);
    put(table, "E", 100.0, 25.0, 1.0);
    CHECK_FALSE(predicted_ert(table, "E", "B", 50.0, 100.0, 1, 100).feasible);
    CHECK(predicted_ert(table, "E", "B", 50.0, 100.0, 1, 100, 0.5).feasible);
    CHECK_FALSE(predicted_ert(table, "A", "B", 50.0, 100.0, 1, 100, 0.95).feasible); // ps(B,100) = 0.9
}

TEST_CASE("best static algorithm") {
    ErtTable table;
    put(table, "B", 100.0, 10.0, 1.0);
    put(table, "A", 100.0, 12.0, 1.0);
    auto [name, value] = best_static(table, 1, 100, 100.0);
    CHECK(name == "B");
    CHECK(value == 10.0);

    put(table, "AA", 100.0, 10.0, 1.0); // tie -> lexicographically first name
    CHECK(best_static(table, 1, 100, 100.0).first == "AA");

    ErtTable empty;
    put(empty, "A", 100.0, ert_infinite, 0.0);
    CHECK_THROWS_WITH(best_static(empty, 1, 100, 100.0),
                      Catch::Matchers::ContainsSubstring("no successful algorithm"));

    ErtTable single;
    put(single, "only", 100.0, 42.0, 1.0);
    CHECK(best_static(single, 1, 100, 100.0).first == "only");
}

TEST_CASE("best dynamic on a toy table matches hand enumeration") {
    ErtTable table;
    // A is fast early, B fast late
    put(table, "A", 50.0, 5.0, 1.0);
    put(table, "A", 100.0, 40.0, 1.0);
    put(table, "B", 50.0, 30.0, 1.0);
    put(table, "B", 100.0, 45.0, 1.0);
    TargetSet targets{{50.0, 100.0}, 50.0, 100.0};

    // hand candidates: (A,B,50): 5+45-30=20; (A,A,50)=40; (B,B,*)=45; (B,A,50)=30+40-5=65
    // (A,B,100): 40+45-45=40; (B,A,100): 45+40-40=45
    const auto best = best_dynamic(table, targets, 1, 100, 100.0, 0.8);
    CHECK(best.a1 == "A");
    CHECK(best.a2 == "B");
    CHECK(best.phi_s == 50.0);
    CHECK(best.predicted_ert == 20.0);

    const auto ranked = rank_policies(table, targets, 1, 100, 100.0, 0.8, 3);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].predicted_ert == 20.0);
    CHECK(ranked[1].predicted_ert == 40.0);
    CHECK(ranked[0].a1 == best.a1);

    ErtTable infeasible;
    put(infeasible, "A", 50.0, 5.0, 0.5);
    put(infeasible, "A", 100.0, 40.0, 0.5);
    CHECK_THROWS_WITH(best_dynamic(infeasible, targets, 1, 100, 100.0, 0.8),
                      Catch::Matchers::ContainsSubstring("no feasible"));
}

TEST_CASE("per-algorithm cap keeps the list diverse") {
    ErtTable table;
    // "fast" dominates: any policy with it is best
    put(table, "fast", 50.0, 1.0, 1.0);
    put(table, "fast", 100.0, 2.0, 1.0);
    put(table, "slow", 50.0, 10.0, 1.0);
    put(table, "slow", 100.0, 20.0, 1.0);
    TargetSet targets{{50.0, 100.0}, 50.0, 100.0};

    const auto capped = rank_policies(table, targets, 1, 100, 100.0, 0.8, 10, 1);
    std::map<std::string, int> a1_counts, a2_counts;
    for (const auto &p : capped) {
        ++a1_counts[p.a1];
        ++a2_counts[p.a2];
    }
    for (const auto &[name, count] : a1_counts)
        CHECK(count <= 1);
    for (const auto &[name, count] : a2_counts)
        CHECK(count <= 1);
    CHECK(capped.size() == 2); // two distinct configs, cap one each side
}

TEST_CASE("best_dynamic and rank_policies match the oracle on random tables") {
    Rng rng(20240815);
    for (int trial = 0; trial < 200; ++trial) {
        const int n_configs = static_cast<int>(2 + rng.below(9));
        const int n_targets = static_cast<int>(2 + rng.below(9));
        std::vector<std::string> configs;
        for (int c = 0; c < n_configs; ++c)
            configs.push_back("cfg" + std::to_string(c));
        std::vector<double> target_values;
        for (int t = 0; t < n_targets; ++t)
            target_values.push_back(10.0 * (t + 1));
        const auto table = random_table(rng, configs, target_values);
        const TargetSet targets{target_values, target_values.front(), target_values.back()};
        const double phi_f = target_values.back();
        const double ps_min = rng.coin() ? 0.8 : 0.0;

        const auto oracle = oracle_enumerate(table, configs, target_values, phi_f, ps_min);
        if (oracle.empty()) {
            CHECK_THROWS(best_dynamic(table, targets, 1, 100, phi_f, ps_min));
            continue;
        }

        const auto best = best_dynamic(table, targets, 1, 100, phi_f, ps_min);
        CHECK(best.a1 == oracle.front().a1);
        CHECK(best.a2 == oracle.front().a2);
        CHECK(best.phi_s == oracle.front().phi_s);
        CHECK(best.predicted_ert == oracle.front().t);

        const int top_k = static_cast<int>(1 + rng.below(12));
        const auto ranked = rank_policies(table, targets, 1, 100, phi_f, ps_min, top_k);
        REQUIRE(ranked.size() == std::min<std::size_t>(oracle.size(), static_cast<std::size_t>(top_k)));
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            CHECK(ranked[i].a1 == oracle[i].a1);
            CHECK(ranked[i].a2 == oracle[i].a2);
            CHECK(ranked[i].phi_s == oracle[i].phi_s);
            CHECK(ranked[i].predicted_ert == oracle[i].t);
        }

        const int cap = static_cast<int>(1 + rng.below(3));
        const auto capped = rank_policies(table, targets, 1, 100, phi_f, ps_min, top_k, cap);
        const auto oracle_capped = oracle_cap(oracle, top_k, cap);
        REQUIRE(capped.size() == oracle_capped.size());
        for (std::size_t i = 0; i < capped.size(); ++i) {
            CHECK(capped[i].a1 == oracle_capped[i].a1);
            CHECK(capped[i].a2 == oracle_capped[i].a2);
            CHECK(capped[i].phi_s == oracle_capped[i].phi_s);
        }

        // with every filter off, switching never loses to staying static
        const auto bsa = best_static(table, 1, 100, phi_f);
        const auto free = best_dynamic(table, targets, 1, 100, phi_f, 0.0);
        CHECK(free.predicted_ert <= bsa.second);
    }
}
