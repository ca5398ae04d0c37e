#pragma once

#include <map>
#include <string>
#include <utility>

#include "monomial.hpp"
#include "rational.hpp"

namespace supercoh {

struct Variable {
    enum class Kind { p, q, u };
    Kind kind;
    int index; // zero-based

    static Variable p(int i) { return {Kind::p, i}; }
    static Variable q(int i) { return {Kind::q, i}; }
    static Variable u(int k) { return {Kind::u, k}; }

    bool odd() const { return kind == Kind::u; }
};

/// Sparse rational combination of monomials (a generating function).
/// Zero coefficients are never stored.
class SuperPolynomial {
public:
    using Terms = std::map<Monomial, Rational>;

    SuperPolynomial() = default;
    explicit SuperPolynomial(VariableSpec vars) : vars_(std::move(vars)) {}

    static SuperPolynomial monomial(const VariableSpec& vars, Monomial mono, Rational coeff = 1)
    {
        SuperPolynomial f(vars);
        f.add(std::move(mono), coeff);
        return f;
    }

    static SuperPolynomial variable(const VariableSpec& vars, Variable v)
    {
        Monomial mono = Monomial::one(vars);
        if (v.odd()) {
            mono.odd_mask = std::uint64_t{1} << v.index;
        } else {
            mono.exponents[static_cast<std::size_t>(v.kind == Variable::Kind::p ? v.index : vars.n + v.index)] = 1;
        }
        return monomial(vars, std::move(mono));
    }

    const VariableSpec& vars() const { return vars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coefficient(const Monomial& mono) const
    {
        auto it = terms_.find(mono);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add(const Monomial& mono, const Rational& coeff)
    {
        if (coeff == 0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(mono, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    void erase(const Monomial& mono) { terms_.erase(mono); }

    SuperPolynomial& operator+=(const SuperPolynomial& other)
    {
        for (const auto& [mono, c] : other.terms_) {
            add(mono, c);
        }
        return *this;
    }

    SuperPolynomial& operator-=(const SuperPolynomial& other)
    {
        for (const auto& [mono, c] : other.terms_) {
            add(mono, -c);
        }
        return *this;
    }

    SuperPolynomial& operator*=(const Rational& s)
    {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [mono, c] : terms_) {
            c *= s;
        }
        return *this;
    }

    friend SuperPolynomial operator+(SuperPolynomial a, const SuperPolynomial& b) { return a += b; }
    friend SuperPolynomial operator-(SuperPolynomial a, const SuperPolynomial& b) { return a -= b; }
    friend SuperPolynomial operator*(SuperPolynomial a, const Rational& s) { return a *= s; }

    friend SuperPolynomial operator*(const SuperPolynomial& a, const SuperPolynomial& b)
    {
        SuperPolynomial out(a.vars_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                auto [sign, mono] = monomial_mul(ma, mb);
                if (sign != 0) {
                    out.add(mono, sign > 0 ? Rational(ca * cb) : Rational(-(ca * cb)));
                }
            }
        }
        return out;
    }

    friend bool operator==(const SuperPolynomial& a, const SuperPolynomial& b) { return a.terms_ == b.terms_; }

    /// Splits into (even part, odd part) by the parity of the odd factor.
    std::pair<SuperPolynomial, SuperPolynomial> parity_components() const
    {
        std::pair<SuperPolynomial, SuperPolynomial> out{SuperPolynomial(vars_), SuperPolynomial(vars_)};
        for (const auto& [mono, c] : terms_) {
            (mono.odd() ? out.second : out.first).add(mono, c);
        }
        return out;
    }

private:
    VariableSpec vars_;
    Terms terms_;
};

inline std::string to_string(const SuperPolynomial& f)
{
    if (f.is_zero()) {
        return "0";
    }
    std::string out;
    for (const auto& [mono, c] : f.terms()) {
        const bool neg = c < 0;
        const Rational mag = neg ? Rational(-c) : c;
        if (out.empty()) {
            out += neg ? "-" : "";
        } else {
            out += neg ? " - " : " + ";
        }
        const std::string m = to_string(mono, f.vars());
        if (mag != 1 || m == "1") {
            out += to_string(mag);
            if (m != "1") {
                out += " " + m;
            }
        } else {
            out += m;
        }
    }
    return out;
}

/// Even variables: ordinary partial derivative. Odd U_k: left derivative,
/// i.e. U_k is moved to the front before being removed, giving the sign
/// (-1)^{#odd factors below k}.
inline SuperPolynomial partial_derivative(const SuperPolynomial& f, Variable v)
{
    const auto& vars = f.vars();
    SuperPolynomial out(vars);
    if (v.odd()) {
        const std::uint64_t bit = std::uint64_t{1} << v.index;
        const std::uint64_t below = bit - 1;
        for (const auto& [mono, c] : f.terms()) {
            if ((mono.odd_mask & bit) == 0) {
                continue;
            }
            Monomial d = mono;
            d.odd_mask &= ~bit;
            out.add(d, (std::popcount(mono.odd_mask & below) & 1) ? Rational(-c) : c);
        }
        return out;
    }
    const auto slot = static_cast<std::size_t>(v.kind == Variable::Kind::p ? v.index : vars.n + v.index);
    for (const auto& [mono, c] : f.terms()) {
        const auto e = mono.exponents[slot];
        if (e == 0) {
            continue;
        }
        Monomial d = mono;
        d.exponents[slot] = e - 1;
        out.add(d, c * e);
    }
    return out;
}

namespace detail {

inline SuperPolynomial bracket_homogeneous(const SuperPolynomial& f, bool f_odd, const SuperPolynomial& g)
{
    const auto& vars = f.vars();
    SuperPolynomial out(vars);
    for (int i = 0; i < vars.n; ++i) {
        out += partial_derivative(f, Variable::p(i)) * partial_derivative(g, Variable::q(i));
        out -= partial_derivative(f, Variable::q(i)) * partial_derivative(g, Variable::p(i));
    }
    SuperPolynomial odd_part(vars);
    for (int k = 0; k < vars.m; ++k) {
        odd_part += partial_derivative(f, Variable::u(k)) * partial_derivative(g, Variable::u(k));
    }
    // -(-1)^{p(f)}
    if (f_odd) {
        out += odd_part;
    } else {
        out -= odd_part;
    }
    return out;
}

} // namespace detail

/// Poisson bracket on generating functions:
///   {f,g} = sum_i (f_{p_i} g_{q_i} - f_{q_i} g_{p_i}) - (-1)^{p(f)} sum_k f_{U_k} g_{U_k}.
/// A parity-inhomogeneous f is split into its parity components.
inline SuperPolynomial poisson_bracket(const SuperPolynomial& f, const SuperPolynomial& g)
{
    auto [even, odd] = f.parity_components();
    SuperPolynomial out = detail::bracket_homogeneous(even, false, g);
    out += detail::bracket_homogeneous(odd, true, g);
    return out;
}

} // namespace supercoh
