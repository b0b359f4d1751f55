#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "dynas/fitness.hpp"

namespace dynas {

// Fixed-target trace of one run: only improvements are recorded, so both
// columns are strictly increasing.
struct ImprovementRecord {
    std::uint64_t evaluations = 0;
    double best_f = 0.0;

    bool operator==(const ImprovementRecord &) const = default;
};

struct RunLog {
    std::vector<ImprovementRecord> records;
    std::uint64_t total_evaluations = 0;
    double final_best = 0.0;
    std::uint64_t seed = 0;
    std::string config_name;
    int func_id = 0;
    int dimension = 0;
    int run_index = 0;
    std::uint64_t budget = 0;
    bool hit_final_target = false;

    bool operator==(const RunLog &) const = default;
};

inline void record_improvement(RunLog &log, std::uint64_t evaluations, double best_f) {
    if (!log.records.empty()) {
        const auto &last = log.records.back();
        if (evaluations <= last.evaluations || best_f <= last.best_f)
            throw std::logic_error("record_improvement: non-monotone record (" + std::to_string(evaluations) +
                                   ", " + std::to_string(best_f) + ")");
    }
    log.records.push_back({evaluations, best_f});
    log.final_best = best_f;
}

// Smallest evaluation count at which best-so-far reached the target.
inline std::optional<std::uint64_t> first_hitting_time(const RunLog &log, double target) {
    for (const auto &r : log.records)
        if (fitness_reaches(r.best_f, target))
            return r.evaluations;
    return std::nullopt;
}

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Batch = all runs of one (config, problem) pair. The metadata header lives
// in a key-value ".info" file next to a ".dat" data file holding one block
// per run.
struct BatchHeader {
    std::string suite = "pbo";
    int func_id = 0;
    int dimension = 0;
    std::string config_name;
    std::uint64_t budget = 0;
    int runs = 0;
    double final_target = 0.0;
    std::vector<std::uint64_t> seeds;
    std::string datafile;

    bool operator==(const BatchHeader &) const = default;
};

namespace detail {

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <typename T>
inline T parse_number(std::string_view s, int line_no, const char *what) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError("line " + std::to_string(line_no) + ": malformed " + std::string(what) + " '" +
                         std::string(s) + "'");
    return v;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t')
            ++j;
        if (j > i)
            out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

} // namespace detail

// One block:
//   % run <index> seed <seed> budget <B> evals <total> hit <0|1>
//   <evaluations> <best_f>      (one row per improvement, %.17g)
inline void write_run(const RunLog &log, std::ostream &out) {
    if (log.records.empty())
        throw std::logic_error("write_run: log has no records");
    if (log.records.back().best_f != log.final_best)
        throw std::logic_error("write_run: final_best does not match last record");
    out << "% run " << log.run_index << " seed " << log.seed << " budget " << log.budget << " evals "
        << log.total_evaluations << " hit " << (log.hit_final_target ? 1 : 0) << "\n";
    for (const auto &r : log.records)
        out << r.evaluations << " " << detail::format_g17(r.best_f) << "\n";
}

// Parses one run block. `line` must hold the block's "% run" line already
// read from `in`; on return it holds the next block's header line (or is
// empty at end of stream). line_no tracks the absolute line number.
inline RunLog parse_run_block(std::istream &in, std::string &line, int &line_no, const BatchHeader &header) {
    const auto tok = detail::split_ws(line);
    if (tok.size() != 11 || tok[0] != "%" || tok[1] != "run" || tok[3] != "seed" || tok[5] != "budget" ||
        tok[7] != "evals" || tok[9] != "hit")
        throw ParseError("line " + std::to_string(line_no) + ": malformed run header '" + line + "'");

    RunLog log;
    log.config_name = header.config_name;
    log.func_id = header.func_id;
    log.dimension = header.dimension;
    log.run_index = detail::parse_number<int>(tok[2], line_no, "run index");
    log.seed = detail::parse_number<std::uint64_t>(tok[4], line_no, "seed");
    log.budget = detail::parse_number<std::uint64_t>(tok[6], line_no, "budget");
    log.total_evaluations = detail::parse_number<std::uint64_t>(tok[8], line_no, "evals");
    const int hit = detail::parse_number<int>(tok[10], line_no, "hit flag");
    if (hit != 0 && hit != 1)
        throw ParseError("line " + std::to_string(line_no) + ": hit flag must be 0 or 1");
    log.hit_final_target = hit == 1;

    line.clear();
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        if (line[0] == '%') {
            if (line.rfind("% run ", 0) == 0)
                break; // next block
            line.clear();
            continue; // plain comment
        }
        const auto row = detail::split_ws(line);
        if (row.size() != 2)
            throw ParseError("line " + std::to_string(line_no) + ": expected '<evaluations> <best_f>'");
        const auto evals = detail::parse_number<std::uint64_t>(row[0], line_no, "evaluation count");
        const auto best = detail::parse_number<double>(row[1], line_no, "best_f");
        if (!log.records.empty() &&
            (evals <= log.records.back().evaluations || best <= log.records.back().best_f))
            throw ParseError("line " + std::to_string(line_no) + ": non-monotone record");
        log.records.push_back({evals, best});
        line.clear();
    }
    if (log.records.empty())
        throw ParseError("line " + std::to_string(line_no) + ": run block without improvement rows");
    log.final_best = log.records.back().best_f;
    return log;
}

// Convenience wrapper for a source holding exactly one block.
inline RunLog parse_run(std::istream &in, const BatchHeader &header) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        if (line.rfind("% run ", 0) == 0)
            return parse_run_block(in, line, line_no, header);
        if (line[0] == '%')
            continue;
        throw ParseError("line " + std::to_string(line_no) + ": expected '% run' block header");
    }
    throw ParseError("missing '% run' block header");
}

inline std::vector<RunLog> parse_batch_data(std::istream &in, const BatchHeader &header) {
    std::vector<RunLog> logs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        if (line.rfind("% run ", 0) == 0)
            break;
        if (line[0] == '%')
            continue;
        throw ParseError("line " + std::to_string(line_no) + ": data before first '% run' header");
    }
    while (!line.empty())
        logs.push_back(parse_run_block(in, line, line_no, header));
    return logs;
}

inline void write_batch_header(const BatchHeader &h, std::ostream &out) {
    out << "suite: " << h.suite << "\n";
    out << "funcId: " << h.func_id << "\n";
    out << "DIM: " << h.dimension << "\n";
    out << "algId: " << h.config_name << "\n";
    out << "budget: " << h.budget << "\n";
    out << "runs: " << h.runs << "\n";
    out << "finalTarget: " << detail::format_g17(h.final_target) << "\n";
    out << "seeds:";
    for (const auto s : h.seeds)
        out << " " << s;
    out << "\n";
    out << "datafile: " << h.datafile << "\n";
}

inline BatchHeader parse_batch_header(std::istream &in) {
    BatchHeader h;
    bool saw_func = false, saw_dim = false, saw_alg = false, saw_data = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%')
            continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'key: value'");
        const std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        if (!value.empty() && value.front() == ' ')
            value.erase(0, 1);
        if (key == "suite") {
            h.suite = value;
        } else if (key == "funcId") {
            h.func_id = detail::parse_number<int>(value, line_no, "funcId");
            saw_func = true;
        } else if (key == "DIM") {
            h.dimension = detail::parse_number<int>(value, line_no, "DIM");
            saw_dim = true;
        } else if (key == "algId") {
            h.config_name = value;
            saw_alg = true;
        } else if (key == "budget") {
            h.budget = detail::parse_number<std::uint64_t>(value, line_no, "budget");
        } else if (key == "runs") {
            h.runs = detail::parse_number<int>(value, line_no, "runs");
        } else if (key == "finalTarget") {
            h.final_target = detail::parse_number<double>(value, line_no, "finalTarget");
        } else if (key == "seeds") {
            for (const auto t : detail::split_ws(value))
                h.seeds.push_back(detail::parse_number<std::uint64_t>(t, line_no, "seed"));
        } else if (key == "datafile") {
            h.datafile = value;
            saw_data = true;
        }
        // unknown keys are ignored
    }
    if (!saw_func || !saw_dim || !saw_alg || !saw_data)
        throw ParseError("batch header missing one of funcId/DIM/algId/datafile");
    return h;
}

struct Batch {
    BatchHeader header;
    std::vector<RunLog> logs;
};

inline Batch load_batch(const std::filesystem::path &info_path) {
    std::ifstream info(info_path);
    if (!info)
        throw ParseError("cannot open " + info_path.string());
    Batch batch;
    try {
        batch.header = parse_batch_header(info);
    } catch (const ParseError &e) {
        throw ParseError(info_path.string() + ": " + e.what());
    }
    const auto data_path = info_path.parent_path() / batch.header.datafile;
    std::ifstream data(data_path);
    if (!data)
        throw ParseError("cannot open " + data_path.string());
    try {
        batch.logs = parse_batch_data(data, batch.header);
    } catch (const ParseError &e) {
        throw ParseError(data_path.string() + ": " + e.what());
    }
    return batch;
}

// Every *.info file under root, in sorted path order.
inline std::vector<Batch> load_all_batches(const std::filesystem::path &root) {
    std::vector<std::filesystem::path> infos;
    if (std::filesystem::exists(root))
        for (const auto &entry : std::filesystem::recursive_directory_iterator(root))
            if (entry.is_regular_file() && entry.path().extension() == ".info")
                infos.push_back(entry.path());
    std::sort(infos.begin(), infos.end());
    std::vector<Batch> batches;
    batches.reserve(infos.size());
    for (const auto &p : infos)
        batches.push_back(load_batch(p));
    return batches;
}

inline void save_batch(const std::filesystem::path &dir, const std::string &base_name, const Batch &batch) {
    std::filesystem::create_directories(dir);
    BatchHeader header = batch.header;
    header.datafile = base_name + ".dat";
    {
        std::ofstream out(dir / (base_name + ".info"), std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + (dir / (base_name + ".info")).string());
        write_batch_header(header, out);
    }
    {
        std::ofstream out(dir / (base_name + ".dat"), std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + (dir / (base_name + ".dat")).string());
        for (const auto &log : batch.logs)
            write_run(log, out);
    }
}

} // namespace dynas
