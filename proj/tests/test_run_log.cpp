#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "dynas/ga.hpp"
#include "dynas/run_log.hpp"

using namespace dynas;

namespace {

RunLog random_log(Rng &rng) {
    RunLog log;
    log.config_name = rng.coin() ? "(1+1) EA_{>0}" : "(10+10)-uniform-GA";
    log.func_id = static_cast<int>(1 + rng.below(8));
    log.dimension = static_cast<int>(10 + rng.below(100));
    log.run_index = static_cast<int>(rng.below(50));
    log.seed = rng.raw();
    std::uint64_t evals = 0;
    double best = -5.0;
    const int n = static_cast<int>(1 + rng.below(12));
    for (int i = 0; i < n; ++i) {
        evals += 1 + rng.below(50);
        best += 0.125 + static_cast<double>(rng.below(1000)) / 256.0;
        record_improvement(log, evals, best);
    }
    log.budget = evals + rng.below(1000);
    log.total_evaluations = evals + rng.below(log.budget - evals + 1);
    log.hit_final_target = rng.coin();
    return log;
}

BatchHeader header_for(const RunLog &log) {
    BatchHeader h;
    h.func_id = log.func_id;
    h.dimension = log.dimension;
    h.config_name = log.config_name;
    h.budget = log.budget;
    h.runs = 1;
    h.final_target = log.final_best;
    h.seeds = {log.seed};
    h.datafile = "x.dat";
    return h;
}

} // namespace

TEST_CASE("record_improvement enforces monotone improvements") {
    RunLog log;
    record_improvement(log, 1, 54.0);
    CHECK(log.records.size() == 1);
    record_improvement(log, 5, 60.0);
    CHECK(log.records.size() == 2);
    CHECK_THROWS(record_improvement(log, 7, 53.0));
    CHECK_THROWS(record_improvement(log, 5, 61.0));
    CHECK(log.final_best == 60.0);
}

TEST_CASE("first hitting time") {
    RunLog log;
    record_improvement(log, 1, 54.0);
    record_improvement(log, 7, 60.0);
    record_improvement(log, 30, 100.0);
    CHECK(first_hitting_time(log, 60.0).value() == 7);
    CHECK_FALSE(first_hitting_time(log, 100.5).has_value());
    CHECK(first_hitting_time(log, -std::numeric_limits<double>::infinity()).value() == 1);

    // monotone non-decreasing in the target
    std::optional<std::uint64_t> prev;
    for (double t = 0.0; t <= 101.0; t += 0.5) {
        const auto cur = first_hitting_time(log, t);
        if (prev && cur)
            CHECK(*cur >= *prev);
        if (!cur)
            CHECK(t > 100.0);
        prev = cur;
    }
}

TEST_CASE("round-trip identity on randomized logs") {
    Rng rng(909);
    for (int trial = 0; trial < 300; ++trial) {
        const RunLog log = random_log(rng);
        const BatchHeader h = header_for(log);

        std::ostringstream first;
        write_run(log, first);
        std::istringstream in(first.str());
        const RunLog parsed = parse_run(in, h);
        CHECK(parsed == log);

        std::ostringstream second;
        write_run(parsed, second);
        CHECK(second.str() == first.str());
    }
}

TEST_CASE("parse errors carry line numbers") {
    BatchHeader h;
    h.func_id = 1;
    h.dimension = 10;
    h.config_name = "(1+1) EA_{>0}";
    h.datafile = "x.dat";

    std::istringstream decreasing("% run 0 seed 1 budget 100 evals 50 hit 0\n3 5\n2 6\n");
    CHECK_THROWS_WITH(parse_run(decreasing, h), Catch::Matchers::ContainsSubstring("line 3"));

    std::istringstream no_rows("% run 0 seed 1 budget 100 evals 50 hit 0\n");
    CHECK_THROWS_WITH(parse_run(no_rows, h), Catch::Matchers::ContainsSubstring("without improvement rows"));

    std::istringstream no_header("3 5\n4 6\n");
    CHECK_THROWS(parse_run(no_header, h));

    std::istringstream bad_row("% run 0 seed 1 budget 100 evals 50 hit 0\n3 5 7\n");
    CHECK_THROWS_WITH(parse_run(bad_row, h), Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("comments are ignored, run headers are not") {
    BatchHeader h;
    h.func_id = 1;
    h.dimension = 10;
    h.config_name = "(1+1) EA_{>0}";
    h.datafile = "x.dat";
    std::istringstream in("% produced by a test\n% run 0 seed 9 budget 100 evals 42 hit 1\n% another note\n1 3\n5 4\n");
    const RunLog log = parse_run(in, h);
    CHECK(log.records.size() == 2);
    CHECK(log.seed == 9);
    CHECK(log.total_evaluations == 42);
    CHECK(log.hit_final_target);
}

TEST_CASE("batch header round-trip") {
    BatchHeader h;
    h.suite = "pbo";
    h.func_id = 7;
    h.dimension = 100;
    h.config_name = "(50+50) EA_{>0}";
    h.budget = 123456;
    h.runs = 3;
    h.final_target = 100.0;
    h.seeds = {11, 22, 33};
    h.datafile = "f7/batch.dat";

    std::ostringstream out;
    write_batch_header(h, out);
    std::istringstream in(out.str());
    CHECK(parse_batch_header(in) == h);

    std::istringstream missing("suite: pbo\nfuncId: 1\n");
    CHECK_THROWS(parse_batch_header(missing));
}

TEST_CASE("batch data files hold many runs") {
    Rng rng(4242);
    std::vector<RunLog> logs;
    for (int i = 0; i < 5; ++i) {
        RunLog log = random_log(rng);
        log.config_name = "(1+1) EA_{>0}";
        log.func_id = 1;
        log.dimension = 32;
        log.run_index = i;
        logs.push_back(std::move(log));
    }
    BatchHeader h = header_for(logs.front());
    h.runs = 5;

    std::ostringstream out;
    for (const auto &log : logs)
        write_run(log, out);
    std::istringstream in(out.str());
    const auto parsed = parse_batch_data(in, h);
    REQUIRE(parsed.size() == logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i)
        CHECK(parsed[i] == logs[i]);
}

TEST_CASE("every target up to final_best has a hitting time on real runs") {
    const auto problem = make_problem(1, 40, 1);
    Rng rng(5150);
    const RunLog log = run_ga(parse_config_name("(1+1) EA_{>0}"), problem, 20000, 40.0, rng);
    for (double f = 0.0; f <= log.final_best; f += 0.5)
        CHECK(first_hitting_time(log, f).has_value());
}
