#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "monomial.hpp"
#include "rational.hpp"
#include "sparse_matrix.hpp"
#include "super_polynomial.hpp"

namespace supercoh {

enum class Family { Po, H, SH, PoHat, HHat };

inline std::string to_string(Family f)
{
    switch (f) {
    case Family::Po:
        return "Po";
    case Family::H:
        return "H";
    case Family::SH:
        return "SH";
    case Family::PoHat:
        return "PoHat";
    case Family::HHat:
        return "HHat";
    }
    return "?";
}

struct AlgebraSpec {
    Family family = Family::Po;
    VariableSpec vars;

    bool has_grading_element() const { return family == Family::PoHat || family == Family::HHat; }
    bool keeps_constants() const { return family == Family::Po || family == Family::PoHat; }
    bool finite_dimensional() const { return vars.n == 0; }

    // Lowest weight of any basis element.
    int min_weight() const
    {
        int w = keeps_constants() ? -vars.shift() : *std::min_element(vars.weights.begin(), vars.weights.end()) - vars.shift();
        if (has_grading_element()) {
            w = std::min(w, 0);
        }
        return w;
    }

    // Highest weight of any basis element; only meaningful when finite.
    int max_weight() const
    {
        int top = vars.m * (vars.m > 0 ? vars.u_weight(0) : 0) - vars.shift();
        if (family == Family::SH) {
            top -= vars.u_weight(0);
        }
        if (has_grading_element()) {
            top = std::max(top, 0);
        }
        return top;
    }

    void validate() const
    {
        vars.validate();
        if (family == Family::SH && (vars.n != 0 || vars.m < 3)) {
            throw PreconditionError("SH(0|m) requires n = 0 and m >= 3");
        }
    }

    friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;
};

/// Canonical spelling, e.g. "SH(0|4)", "HHat(2|0)".
inline std::string to_string(const AlgebraSpec& spec)
{
    return to_string(spec.family) + "(" + std::to_string(2 * spec.vars.n) + "|" + std::to_string(spec.vars.m) + ")";
}

/// Parses `Po(2n|m)`, `H(2n|m)`, `SH(0|m)`, `PoHat(2n|m)`, `HHat(2n|m)`,
/// case-insensitively, with the standard grading.
inline AlgebraSpec parse_algebra_spec(const std::string& text)
{
    static const std::regex pattern(R"(^\s*([A-Za-z]+)\s*\(\s*(\d+)\s*\|\s*(\d+)\s*\)\s*$)");
    std::smatch match;
    if (!std::regex_match(text, match, pattern)) {
        throw ParseError("malformed algebra spec '" + text + "' (expected e.g. SH(0|4))");
    }
    std::string name = match[1];
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    AlgebraSpec spec;
    if (name == "po") {
        spec.family = Family::Po;
    } else if (name == "h") {
        spec.family = Family::H;
    } else if (name == "sh") {
        spec.family = Family::SH;
    } else if (name == "pohat") {
        spec.family = Family::PoHat;
    } else if (name == "hhat") {
        spec.family = Family::HHat;
    } else {
        throw ParseError("unknown algebra family '" + std::string(match[1]) + "' in '" + text + "'");
    }
    const int even = std::stoi(match[2]);
    const int odd = std::stoi(match[3]);
    if (even % 2 != 0) {
        throw ParseError("even dimension must be 2n in '" + text + "'");
    }
    if (spec.family == Family::SH && (even != 0 || odd < 3)) {
        throw ParseError("SH requires n=0 and m>=3, got '" + text + "'");
    }
    if (even + odd == 0) {
        throw ParseError("algebra needs at least one variable: '" + text + "'");
    }
    if (odd > 64) {
        throw ParseError("at most 64 odd variables: '" + text + "'");
    }
    spec.vars = VariableSpec::standard(even / 2, odd);
    return spec;
}

struct BasisElement {
    int id = 0;
    std::optional<Monomial> monomial; // empty for the grading element G
    bool odd = false;
    int weight = 0;

    bool is_grading_element() const { return !monomial.has_value(); }
};

/// All monomials of the given weight, exponents lexicographic then mask
/// ascending. Empty for weights with no monomials.
inline std::vector<Monomial> monomials_of_weight(const VariableSpec& vars, int weight)
{
    std::vector<Monomial> out;
    const int target = weight + vars.shift();
    if (target < 0) {
        return out;
    }
    std::vector<std::uint32_t> exps(static_cast<std::size_t>(vars.even_count()), 0);
    const int uw = vars.m > 0 ? vars.u_weight(0) : 1;

    auto emit_odd = [&](int remaining) {
        if (remaining % uw != 0) {
            return;
        }
        const int r = remaining / uw;
        if (r > vars.m) {
            return;
        }
        if (r == 0) {
            out.push_back(Monomial{exps, 0});
            return;
        }
        // r-subsets of m bits in ascending numeric order (Gosper)
        std::uint64_t mask = (r == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << r) - 1);
        const std::uint64_t limit = (vars.m == 64) ? 0 : (std::uint64_t{1} << vars.m);
        while (true) {
            out.push_back(Monomial{exps, mask});
            if (r == vars.m) {
                break;
            }
            const std::uint64_t c = mask & (~mask + 1);
            const std::uint64_t next = mask + c;
            if (next == 0) {
                break;
            }
            mask = (((next ^ mask) >> 2) / c) | next;
            if (limit != 0 && mask >= limit) {
                break;
            }
        }
    };

    auto rec = [&](auto&& self, int slot, int remaining) -> void {
        if (slot == vars.even_count()) {
            emit_odd(remaining);
            return;
        }
        const int w = vars.weights[static_cast<std::size_t>(slot)];
        for (int e = 0; e * w <= remaining; ++e) {
            exps[static_cast<std::size_t>(slot)] = static_cast<std::uint32_t>(e);
            self(self, slot + 1, remaining - e * w);
        }
        exps[static_cast<std::size_t>(slot)] = 0;
    };
    rec(rec, 0, target);
    return out;
}

namespace detail {

inline bool family_contains(const AlgebraSpec& spec, const Monomial& mono)
{
    const int d = mono.degree();
    switch (spec.family) {
    case Family::Po:
    case Family::PoHat:
        return true;
    case Family::H:
    case Family::HHat:
        return d >= 1;
    case Family::SH:
        return d >= 1 && d <= spec.vars.m - 1;
    }
    return false;
}

} // namespace detail

/// Basis of the algebra in one weight; ids are 0-based positions in the
/// returned list. The grading element of hat families comes last in
/// weight 0.
inline std::vector<BasisElement> enumerate_basis(const AlgebraSpec& spec, int weight)
{
    std::vector<BasisElement> out;
    for (auto& mono : monomials_of_weight(spec.vars, weight)) {
        if (!detail::family_contains(spec, mono)) {
            continue;
        }
        BasisElement e;
        e.id = static_cast<int>(out.size());
        e.odd = mono.odd();
        e.weight = weight;
        e.monomial = std::move(mono);
        out.push_back(std::move(e));
    }
    if (spec.has_grading_element() && weight == 0) {
        BasisElement g;
        g.id = static_cast<int>(out.size());
        g.weight = 0;
        out.push_back(std::move(g));
    }
    return out;
}

/// Poisson bracket followed by the family's projection: H drops the
/// constant, SH drops the constant and the top monomial U_1...U_m.
inline SuperPolynomial project_to_family(const AlgebraSpec& spec, SuperPolynomial f)
{
    if (!spec.keeps_constants()) {
        f.erase(Monomial::one(spec.vars));
    }
    if (spec.family == Family::SH) {
        Monomial top = Monomial::one(spec.vars);
        top.odd_mask = (spec.vars.m == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << spec.vars.m) - 1);
        f.erase(top);
    }
    return f;
}

/// Sparse linear combination of basis ids.
using Combination = std::map<int, Rational>;

/// A Lie superalgebra materialized on a weight window [low, high]: basis
/// ids are contiguous, ordered by weight and then by the per-weight basis
/// order, and the structure constants of every pair are precomputed.
/// Immutable after construction.
class Algebra {
public:
    Algebra(AlgebraSpec spec, int low, int high) : spec_(std::move(spec))
    {
        spec_.validate();
        low_ = std::max(low, spec_.min_weight());
        high_ = spec_.finite_dimensional() ? std::min(high, spec_.max_weight()) : high;
        for (int w = low_; w <= high_; ++w) {
            for (auto& e : enumerate_basis(spec_, w)) {
                e.id = static_cast<int>(elements_.size());
                if (e.monomial) {
                    index_.emplace(*e.monomial, e.id);
                } else {
                    grading_id_ = e.id;
                }
                elements_.push_back(std::move(e));
            }
        }
        build_table();
    }

    /// The whole algebra; only for finite-dimensional families.
    static Algebra whole(const AlgebraSpec& spec)
    {
        if (!spec.finite_dimensional()) {
            throw PreconditionError(to_string(spec) + " is infinite-dimensional; give a weight window");
        }
        return Algebra(spec, spec.min_weight(), spec.max_weight());
    }

    /// A window large enough for every cell (degree <= max_degree, weight
    /// <= max_grade) and every bracket arising in its differential.
    static Algebra for_cells(const AlgebraSpec& spec, int max_degree, int max_grade)
    {
        const int lo = spec.min_weight();
        const int hi = max_grade - std::max(0, max_degree - 1) * lo;
        return Algebra(spec, lo, std::max(hi, lo));
    }

    const AlgebraSpec& spec() const { return spec_; }
    int low() const { return low_; }
    int high() const { return high_; }
    std::size_t size() const { return elements_.size(); }
    const BasisElement& element(int id) const { return elements_[static_cast<std::size_t>(id)]; }
    const std::vector<BasisElement>& elements() const { return elements_; }
    bool odd(int id) const { return elements_[static_cast<std::size_t>(id)].odd; }
    int weight(int id) const { return elements_[static_cast<std::size_t>(id)].weight; }
    std::optional<int> grading_id() const { return grading_id_; }

    bool covers_weight(int w) const
    {
        return w <= high_ || (spec_.finite_dimensional() && high_ >= spec_.max_weight());
    }

    /// Whether a trivial-coefficient cell of tuples of length `degree`
    /// summing to `grade` is fully representable in this window.
    bool covers_cell(int degree, int grade) const
    {
        if (degree == 0) {
            return true;
        }
        return covers_weight(grade - (degree - 1) * spec_.min_weight());
    }

    std::optional<int> id_of(const Monomial& mono) const
    {
        auto it = index_.find(mono);
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    int require_id(const Monomial& mono) const
    {
        auto id = id_of(mono);
        if (!id) {
            throw NotInBasisError("monomial " + to_string(mono, spec_.vars) + " is not a basis element of " +
                                  to_string(spec_) + " in weights [" + std::to_string(low_) + ", " +
                                  std::to_string(high_) + "]");
        }
        return *id;
    }

    std::string name(int id) const
    {
        const auto& e = element(id);
        return e.monomial ? to_string(*e.monomial, spec_.vars) : std::string("G");
    }

    int parse_element(const std::string& text) const
    {
        if (text == "G") {
            if (!grading_id_) {
                throw ParseError("G is not an element of " + to_string(spec_));
            }
            return *grading_id_;
        }
        return require_id(parse_monomial(text, spec_.vars));
    }

    /// Structure constants of [e_i, e_j] with the skew-symmetry sign
    /// applied for i > j.
    struct BracketView {
        int sign;
        const SparseVector& terms;
    };

    BracketView bracket(int i, int j) const
    {
        if (i <= j) {
            const auto slot = tri(i, j);
            if (escaped_[slot]) {
                throw_escape(i, j);
            }
            return {1, table_[slot]};
        }
        const auto slot = tri(j, i);
        if (escaped_[slot]) {
            throw_escape(j, i);
        }
        return {(odd(i) && odd(j)) ? 1 : -1, table_[slot]};
    }

    /// Brackets the basis elements directly, bypassing the table.
    SuperPolynomial bracket_polynomial(int i, int j) const
    {
        const auto& a = element(i);
        const auto& b = element(j);
        SuperPolynomial out(spec_.vars);
        if (a.is_grading_element() && b.is_grading_element()) {
            return out;
        }
        if (a.is_grading_element()) {
            out.add(*b.monomial, b.weight);
            return out;
        }
        if (b.is_grading_element()) {
            out.add(*a.monomial, -a.weight);
            return out;
        }
        return project_to_family(spec_, poisson_bracket(SuperPolynomial::monomial(spec_.vars, *a.monomial),
                                                        SuperPolynomial::monomial(spec_.vars, *b.monomial)));
    }

    SuperPolynomial to_polynomial(const Combination& x) const
    {
        SuperPolynomial f(spec_.vars);
        for (const auto& [id, c] : x) {
            const auto& e = element(id);
            if (e.is_grading_element()) {
                throw PreconditionError("the grading element has no generating function");
            }
            f.add(*e.monomial, c);
        }
        return f;
    }

    Combination from_polynomial(const SuperPolynomial& f) const
    {
        Combination out;
        for (const auto& [mono, c] : f.terms()) {
            out[require_id(mono)] += c;
        }
        return out;
    }

private:
    std::size_t tri(int i, int j) const
    {
        const auto n = elements_.size();
        const auto ui = static_cast<std::size_t>(i);
        return ui * n - (ui * (ui - 1)) / 2 + static_cast<std::size_t>(j - i);
    }

    [[noreturn]] void throw_escape(int i, int j) const
    {
        throw NotInBasisError("[" + name(i) + ", " + name(j) + "] leaves the weight window [" + std::to_string(low_) +
                              ", " + std::to_string(high_) + "] of " + to_string(spec_));
    }

    void build_table()
    {
        const auto n = elements_.size();
        table_.assign(n * (n + 1) / 2, {});
        escaped_.assign(n * (n + 1) / 2, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                const auto slot = tri(static_cast<int>(i), static_cast<int>(j));
                const SuperPolynomial f = bracket_polynomial(static_cast<int>(i), static_cast<int>(j));
                std::vector<Entry> terms;
                bool escaped = false;
                for (const auto& [mono, c] : f.terms()) {
                    auto id = id_of(mono);
                    if (!id) {
                        escaped = true;
                        break;
                    }
                    terms.push_back(Entry{static_cast<Index>(*id), c});
                }
                if (escaped) {
                    escaped_[slot] = 1;
                    continue;
                }
                table_[slot] = make_sparse(std::move(terms));
            }
        }
    }

    AlgebraSpec spec_;
    int low_ = 0;
    int high_ = 0;
    std::vector<BasisElement> elements_;
    std::unordered_map<Monomial, int, MonomialHash> index_;
    std::optional<int> grading_id_;
    std::vector<SparseVector> table_;
    std::vector<std::uint8_t> escaped_;
};

/// Bracket of two combinations of basis elements, reduced to the family.
/// Throws NotInBasisError naming the offending monomial when the result
/// leaves the materialized window.
inline Combination algebra_bracket(const Algebra& alg, const Combination& x, const Combination& y)
{
    Combination out;
    for (const auto& [i, a] : x) {
        for (const auto& [j, b] : y) {
            const SuperPolynomial f = alg.bracket_polynomial(i, j);
            for (const auto& [mono, c] : f.terms()) {
                out[alg.require_id(mono)] += a * b * c;
            }
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

} // namespace supercoh
