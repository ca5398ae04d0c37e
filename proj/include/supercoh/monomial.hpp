#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace supercoh {

/// Coordinates of a (2n|m) supermanifold: even p_1..p_n, q_1..q_n and odd
/// U_1..U_m, each with a positive integer grade.
///
/// Weights are stored in the order p_1..p_n, q_1..q_n, U_1..U_m. The bracket
/// lowers total weighted degree by `shift()`, so for it to be homogeneous
/// every pair (p_i, q_i) and every doubled odd variable must have the same
/// total weight. The standard grading puts 1 everywhere and shift 2.
struct VariableSpec {
    int n = 0;
    int m = 0;
    std::vector<int> weights;

    static VariableSpec standard(int n, int m)
    {
        VariableSpec v{n, m, std::vector<int>(static_cast<std::size_t>(2 * n + m), 1)};
        v.validate();
        return v;
    }

    int even_count() const { return 2 * n; }
    int variable_count() const { return 2 * n + m; }

    int p_weight(int i) const { return weights[static_cast<std::size_t>(i)]; }
    int q_weight(int i) const { return weights[static_cast<std::size_t>(n + i)]; }
    int u_weight(int k) const { return weights[static_cast<std::size_t>(2 * n + k)]; }

    int shift() const
    {
        if (n > 0) {
            return p_weight(0) + q_weight(0);
        }
        return 2 * u_weight(0);
    }

    bool is_standard() const
    {
        for (int w : weights) {
            if (w != 1) {
                return false;
            }
        }
        return true;
    }

    void validate() const
    {
        if (n < 0 || m < 0 || n + m < 1) {
            throw PreconditionError("variable spec needs n >= 0, m >= 0, n + m >= 1");
        }
        if (m > 64) {
            throw PreconditionError("at most 64 odd variables are supported");
        }
        if (weights.size() != static_cast<std::size_t>(variable_count())) {
            throw PreconditionError("variable spec has the wrong number of weights");
        }
        for (int w : weights) {
            if (w <= 0) {
                throw PreconditionError("variable weights must be positive");
            }
        }
        const int s = shift();
        for (int i = 0; i < n; ++i) {
            if (p_weight(i) + q_weight(i) != s) {
                throw PreconditionError("inhomogeneous bracket: p_i and q_i weights must sum to the shift");
            }
        }
        for (int k = 0; k < m; ++k) {
            if (2 * u_weight(k) != s) {
                throw PreconditionError("inhomogeneous bracket: odd variable weights must be half the shift");
            }
        }
    }

    friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

/// Even exponent vector (p_1..p_n, q_1..q_n) plus a bitmask of odd
/// variables (bit k set means U_{k+1} occurs). Odd variables are always
/// understood to be written in ascending index order.
///
/// The default ordering (exponents lexicographic, then mask) is the
/// deterministic basis order within a weight.
struct Monomial {
    std::vector<std::uint32_t> exponents;
    std::uint64_t odd_mask = 0;

    static Monomial one(const VariableSpec& vars)
    {
        return Monomial{std::vector<std::uint32_t>(static_cast<std::size_t>(vars.even_count()), 0), 0};
    }

    int degree() const
    {
        int d = std::popcount(odd_mask);
        for (auto e : exponents) {
            d += static_cast<int>(e);
        }
        return d;
    }

    int weighted_degree(const VariableSpec& vars) const
    {
        int d = 0;
        for (std::size_t i = 0; i < exponents.size(); ++i) {
            d += static_cast<int>(exponents[i]) * vars.weights[i];
        }
        for (int k = 0; k < vars.m; ++k) {
            if ((odd_mask >> k) & 1U) {
                d += vars.u_weight(k);
            }
        }
        return d;
    }

    // Grade of the generating function: weighted degree minus the bracket
    // shift, which makes the bracket additive (U_i has weight -1).
    int weight(const VariableSpec& vars) const { return weighted_degree(vars) - vars.shift(); }

    bool odd() const { return (std::popcount(odd_mask) & 1) != 0; }
    bool is_constant() const { return degree() == 0; }

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& mono) const noexcept
    {
        std::size_t h = std::hash<std::uint64_t>{}(mono.odd_mask);
        for (auto e : mono.exponents) {
            h ^= e + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

/// Product of two monomials. Returns sign 0 when the odd parts overlap;
/// otherwise the Koszul sign (-1)^{#pairs (j in a, i in b) with j > i}.
inline std::pair<int, Monomial> monomial_mul(const Monomial& a, const Monomial& b)
{
    if ((a.odd_mask & b.odd_mask) != 0) {
        return {0, Monomial{}};
    }
    int inversions = 0;
    for (std::uint64_t rest = a.odd_mask; rest != 0; rest &= rest - 1) {
        const int j = std::countr_zero(rest);
        const std::uint64_t below = (j == 0) ? 0 : (b.odd_mask & ((std::uint64_t{1} << j) - 1));
        inversions += std::popcount(below);
    }
    Monomial out;
    out.exponents.resize(a.exponents.size());
    for (std::size_t i = 0; i < a.exponents.size(); ++i) {
        out.exponents[i] = a.exponents[i] + b.exponents[i];
    }
    out.odd_mask = a.odd_mask | b.odd_mask;
    return {(inversions & 1) ? -1 : 1, out};
}

namespace detail {

inline std::string even_name(const VariableSpec& vars, int index)
{
    const bool is_p = index < vars.n;
    const int i = is_p ? index : index - vars.n;
    std::string name(1, is_p ? 'p' : 'q');
    if (vars.n > 1) {
        name += "_" + std::to_string(i + 1);
    }
    return name;
}

} // namespace detail

/// Space-separated factors in variable order, e.g. "p^2 q U_1 U_3"; "1"
/// for the constant.
inline std::string to_string(const Monomial& mono, const VariableSpec& vars)
{
    std::string out;
    auto append = [&](const std::string& factor) {
        if (!out.empty()) {
            out += ' ';
        }
        out += factor;
    };
    for (int i = 0; i < vars.even_count(); ++i) {
        const auto e = mono.exponents[static_cast<std::size_t>(i)];
        if (e == 0) {
            continue;
        }
        std::string f = detail::even_name(vars, i);
        if (e > 1) {
            f += "^" + std::to_string(e);
        }
        append(f);
    }
    for (int k = 0; k < vars.m; ++k) {
        if ((mono.odd_mask >> k) & 1U) {
            append("U_" + std::to_string(k + 1));
        }
    }
    return out.empty() ? "1" : out;
}

/// Inverse of `to_string`. Factors may come in any order; odd factors are
/// accepted only in ascending order so the text carries no hidden sign.
inline Monomial parse_monomial(std::string_view text, const VariableSpec& vars)
{
    Monomial mono = Monomial::one(vars);
    std::istringstream in{std::string(text)};
    std::string token;
    int last_odd = -1;
    bool any = false;
    auto fail = [&](const std::string& why) {
        throw ParseError("cannot parse monomial '" + std::string(text) + "': " + why);
    };
    while (in >> token) {
        any = true;
        if (token == "1") {
            continue;
        }
        std::uint32_t exponent = 1;
        if (auto caret = token.find('^'); caret != std::string::npos) {
            const std::string e = token.substr(caret + 1);
            if (e.empty() || e.find_first_not_of("0123456789") != std::string::npos) {
                fail("bad exponent");
            }
            exponent = static_cast<std::uint32_t>(std::stoul(e));
            token = token.substr(0, caret);
        }
        auto index_after = [&](std::size_t pos) -> int {
            const std::string digits = token.substr(pos);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
                fail("bad variable index in '" + token + "'");
            }
            return std::stoi(digits);
        };
        if (token[0] == 'U') {
            if (token.size() < 3 || token[1] != '_') {
                fail("bad odd variable '" + token + "'");
            }
            const int k = index_after(2) - 1;
            if (k < 0 || k >= vars.m) {
                fail("odd variable out of range");
            }
            if (exponent != 1) {
                fail("odd variables square to zero");
            }
            if (k <= last_odd) {
                fail("odd variables must be listed in ascending order");
            }
            last_odd = k;
            mono.odd_mask |= std::uint64_t{1} << k;
        } else if (token[0] == 'p' || token[0] == 'q') {
            int i = 0;
            if (token.size() > 1) {
                if (token[1] != '_') {
                    fail("bad even variable '" + token + "'");
                }
                i = index_after(2) - 1;
            } else if (vars.n != 1) {
                fail("even variables need an index when n != 1");
            }
            if (i < 0 || i >= vars.n) {
                fail("even variable out of range");
            }
            const int slot = token[0] == 'p' ? i : vars.n + i;
            mono.exponents[static_cast<std::size_t>(slot)] += exponent;
        } else {
            fail("unknown variable '" + token + "'");
        }
    }
    if (!any) {
        fail("empty");
    }
    return mono;
}

} // namespace supercoh
