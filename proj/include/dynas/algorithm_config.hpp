#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace dynas {

enum class CrossoverKind { none, one_point, two_point, uniform };
enum class MutationKind { standard_bit, fast };

inline std::string_view crossover_label(CrossoverKind k) {
    switch (k) {
    case CrossoverKind::one_point:
        return "one-point";
    case CrossoverKind::two_point:
        return "two-point";
    case CrossoverKind::uniform:
        return "uniform";
    default:
        return "none";
    }
}

// Shortest decimal form that round-trips through a double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// One member of the (mu+lambda) GA family. Offspring are produced by
// crossover with probability p_c, otherwise by mutation. p_c = 0 and
// crossover none imply each other. The standard-bit rate p defaults to 1/n
// when unset.
struct AlgorithmConfig {
    int mu = 1;
    int lambda = 1;
    CrossoverKind crossover = CrossoverKind::none;
    double p_c = 0.0;
    MutationKind mutation = MutationKind::standard_bit;
    std::optional<double> p;
    double beta = 1.5;

    double mutation_rate(int dimension) const { return p ? *p : 1.0 / dimension; }

    bool operator==(const AlgorithmConfig &) const = default;
};

inline void validate_config(const AlgorithmConfig &c) {
    if (c.mu < 1 || c.lambda < 1)
        throw std::invalid_argument("config: mu and lambda must be positive");
    if (c.p_c < 0.0 || c.p_c > 1.0)
        throw std::invalid_argument("config: p_c out of [0,1]");
    if ((c.crossover == CrossoverKind::none) != (c.p_c == 0.0))
        throw std::invalid_argument("config: crossover none and p_c = 0 must coincide");
    if (c.crossover != CrossoverKind::none && c.mu < 2)
        throw std::invalid_argument("config: crossover requires mu >= 2");
    if (c.p && (*c.p <= 0.0 || *c.p > 1.0))
        throw std::invalid_argument("config: mutation rate out of (0,1]");
    if (c.beta <= 1.0)
        throw std::invalid_argument("config: beta must exceed 1");
}

// Canonical display name. Mutation-only configs are written
//   "(mu+lambda) EA_{>0}"   (standard bit mutation)
//   "(mu+lambda) fast GA"   (power-law mutation)
// and crossover configs "(mu+lambda)-<operator>-GA" (or -fGA with fast
// mutation). Non-default p_c / p / beta values are appended as
// "@pc=", "@p=", "@beta=" suffixes so every config round-trips through
// parse_config_name.
inline std::string canonical_name(const AlgorithmConfig &c) {
    std::string s = "(" + std::to_string(c.mu) + "+" + std::to_string(c.lambda) + ")";
    if (c.crossover == CrossoverKind::none) {
        s += c.mutation == MutationKind::standard_bit ? " EA_{>0}" : " fast GA";
    } else {
        s += "-";
        s += crossover_label(c.crossover);
        s += c.mutation == MutationKind::standard_bit ? "-GA" : "-fGA";
        if (c.p_c != 0.5)
            s += "@pc=" + format_double(c.p_c);
    }
    if (c.p)
        s += "@p=" + format_double(*c.p);
    if (c.mutation == MutationKind::fast && c.beta != 1.5)
        s += "@beta=" + format_double(c.beta);
    return s;
}

namespace detail {

struct NameCursor {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string &what) const {
        throw std::invalid_argument("config name parse error at position " + std::to_string(pos) + ": " + what +
                                    " in \"" + std::string(text) + "\"");
    }

    bool eat(std::string_view lit) {
        if (text.substr(pos, lit.size()) != lit)
            return false;
        pos += lit.size();
        return true;
    }

    void expect(std::string_view lit, const std::string &what) {
        if (!eat(lit))
            fail("expected " + what);
    }

    int integer() {
        int v = 0;
        const auto res = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr == text.data() + pos)
            fail("expected integer");
        pos = static_cast<std::size_t>(res.ptr - text.data());
        return v;
    }

    double real() {
        double v = 0.0;
        const auto res = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr == text.data() + pos)
            fail("expected real number");
        pos = static_cast<std::size_t>(res.ptr - text.data());
        return v;
    }

    bool done() const { return pos == text.size(); }
};

} // namespace detail

inline AlgorithmConfig parse_config_name(std::string_view name) {
    detail::NameCursor cur{name};
    AlgorithmConfig c;

    cur.expect("(", "'('");
    c.mu = cur.integer();
    cur.expect("+", "'+'");
    c.lambda = cur.integer();
    cur.expect(")", "')'");

    if (cur.eat(" EA_{>0}")) {
        c.mutation = MutationKind::standard_bit;
    } else if (cur.eat(" fast GA")) {
        c.mutation = MutationKind::fast;
    } else if (cur.eat("-")) {
        if (cur.eat("one-point"))
            c.crossover = CrossoverKind::one_point;
        else if (cur.eat("two-point"))
            c.crossover = CrossoverKind::two_point;
        else if (cur.eat("uniform"))
            c.crossover = CrossoverKind::uniform;
        else
            cur.fail("expected crossover operator (one-point, two-point, uniform)");
        cur.expect("-", "'-'");
        if (cur.eat("fGA"))
            c.mutation = MutationKind::fast;
        else if (cur.eat("GA"))
            c.mutation = MutationKind::standard_bit;
        else
            cur.fail("expected GA or fGA");
        c.p_c = 0.5;
        if (cur.eat("@pc="))
            c.p_c = cur.real();
    } else {
        cur.fail("expected ' EA_{>0}', ' fast GA' or '-<crossover>-'");
    }

    if (cur.eat("@p="))
        c.p = cur.real();
    if (cur.eat("@beta="))
        c.beta = cur.real();
    if (!cur.done())
        cur.fail("trailing characters");

    validate_config(c);
    return c;
}

} // namespace dynas
