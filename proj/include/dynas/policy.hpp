#pragma once

#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynas/algorithm_config.hpp"
#include "dynas/run_log.hpp"

namespace dynas {

// Ordered switching schedule: entry i becomes active when best-so-far first
// reaches its threshold. The first threshold is -infinity (active from the
// start); a switch-once policy (A1, A2, phi_s) is the two-entry case.
struct ScheduleEntry {
    double threshold = 0.0;
    AlgorithmConfig config;

    bool operator==(const ScheduleEntry &) const = default;
};

struct SwitchPolicy {
    std::vector<ScheduleEntry> schedule;

    bool operator==(const SwitchPolicy &) const = default;
};

inline SwitchPolicy make_switch_once(const AlgorithmConfig &a1, const AlgorithmConfig &a2, double phi_s) {
    return {{{-std::numeric_limits<double>::infinity(), a1}, {phi_s, a2}}};
}

inline void validate_policy(const SwitchPolicy &p) {
    if (p.schedule.empty())
        throw std::invalid_argument("policy: empty schedule");
    if (p.schedule.front().threshold != -std::numeric_limits<double>::infinity())
        throw std::invalid_argument("policy: first threshold must be -inf");
    for (std::size_t i = 1; i < p.schedule.size(); ++i)
        if (!(p.schedule[i].threshold > p.schedule[i - 1].threshold))
            throw std::invalid_argument("policy: thresholds must be strictly ascending");
    for (const auto &e : p.schedule)
        validate_config(e.config);
}

inline std::string policy_label(const SwitchPolicy &p) {
    std::string s = "dyn[" + canonical_name(p.schedule.front().config);
    for (std::size_t i = 1; i < p.schedule.size(); ++i)
        s += "; " + format_double(p.schedule[i].threshold) + " -> " + canonical_name(p.schedule[i].config);
    return s + "]";
}

// Text form: one entry per line, "<threshold> <canonical config name>",
// first line threshold -inf.
inline void write_policy(const SwitchPolicy &p, std::ostream &out) {
    validate_policy(p);
    for (const auto &e : p.schedule)
        out << format_double(e.threshold) << " " << canonical_name(e.config) << "\n";
}

inline SwitchPolicy parse_policy(std::istream &in) {
    SwitchPolicy p;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%')
            continue;
        const auto sep = line.find(' ');
        if (sep == std::string::npos)
            throw ParseError("policy line " + std::to_string(line_no) + ": expected '<threshold> <config name>'");
        const std::string thr = line.substr(0, sep);
        const std::string name = line.substr(sep + 1);
        ScheduleEntry e;
        if (thr == "-inf") {
            e.threshold = -std::numeric_limits<double>::infinity();
        } else {
            try {
                std::size_t used = 0;
                e.threshold = std::stod(thr, &used);
                if (used != thr.size())
                    throw std::invalid_argument(thr);
            } catch (const std::exception &) {
                throw ParseError("policy line " + std::to_string(line_no) + ": malformed threshold '" + thr + "'");
            }
        }
        try {
            e.config = parse_config_name(name);
        } catch (const std::exception &ex) {
            throw ParseError("policy line " + std::to_string(line_no) + ": " + ex.what());
        }
        p.schedule.push_back(std::move(e));
    }
    try {
        validate_policy(p);
    } catch (const std::exception &ex) {
        throw ParseError(std::string("policy file: ") + ex.what());
    }
    return p;
}

} // namespace dynas
