#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "algebra.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "sparse_matrix.hpp"

namespace supercoh {

enum class Module { trivial, adjoint };

inline std::string to_string(Module m) { return m == Module::trivial ? "trivial" : "adjoint"; }

inline Module parse_module(const std::string& text)
{
    if (text == "trivial") {
        return Module::trivial;
    }
    if (text == "adjoint") {
        return Module::adjoint;
    }
    throw ParseError("unknown module '" + text + "' (expected trivial or adjoint)");
}

/// Argument list of a cochain. Canonical form: even ids strictly ascending
/// first, then odd ids non-decreasing.
using ArgTuple = std::vector<int>;

/// Sign picked up when two adjacent arguments are swapped:
/// C(..., x, y, ...) = -(-1)^{p(x)p(y)} C(..., y, x, ...).
inline int swap_sign(const Algebra& alg, int x, int y) { return (alg.odd(x) && alg.odd(y)) ? 1 : -1; }

inline bool canonical_before(const Algebra& alg, int a, int b)
{
    const bool oa = alg.odd(a);
    const bool ob = alg.odd(b);
    return oa != ob ? ob : a < b;
}

/// Sorts a raw argument list into canonical order, returning the Koszul
/// sign of the permutation; sign 0 when an even argument repeats.
inline std::pair<int, ArgTuple> canonicalize(const Algebra& alg, ArgTuple raw)
{
    for (int id : raw) {
        if (id < 0 || static_cast<std::size_t>(id) >= alg.size()) {
            throw std::out_of_range("canonicalize: unknown basis id " + std::to_string(id));
        }
    }
    int sign = 1;
    for (std::size_t i = 1; i < raw.size(); ++i) {
        for (std::size_t j = i; j > 0 && canonical_before(alg, raw[j], raw[j - 1]); --j) {
            sign *= swap_sign(alg, raw[j], raw[j - 1]);
            std::swap(raw[j], raw[j - 1]);
        }
    }
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i] == raw[i - 1] && !alg.odd(raw[i])) {
            return {0, {}};
        }
    }
    return {sign, std::move(raw)};
}

/// Moves `front` from the head of (front, rest...) into canonical position
/// within the canonical tuple `rest`.
inline std::pair<int, ArgTuple> insert_canonical(const Algebra& alg, int front, const ArgTuple& rest)
{
    std::size_t pos = 0;
    int sign = 1;
    while (pos < rest.size() && canonical_before(alg, rest[pos], front)) {
        sign *= swap_sign(alg, front, rest[pos]);
        ++pos;
    }
    if (pos < rest.size() && rest[pos] == front && !alg.odd(front)) {
        return {0, {}};
    }
    ArgTuple out;
    out.reserve(rest.size() + 1);
    out.insert(out.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(pos));
    out.push_back(front);
    out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(pos), rest.end());
    return {sign, std::move(out)};
}

inline int tuple_weight(const Algebra& alg, const ArgTuple& t)
{
    int w = 0;
    for (int id : t) {
        w += alg.weight(id);
    }
    return w;
}

inline bool tuple_odd(const Algebra& alg, const ArgTuple& t)
{
    bool p = false;
    for (int id : t) {
        p ^= alg.odd(id);
    }
    return p;
}

/// Coordinate of a cochain: canonical arguments plus, for the adjoint
/// module, the basis id of the value component (-1 for trivial).
struct CellKey {
    ArgTuple args;
    int value = -1;

    friend auto operator<=>(const CellKey&, const CellKey&) = default;
    friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const noexcept
    {
        std::size_t h = std::hash<int>{}(k.value);
        for (int id : k.args) {
            h ^= static_cast<std::size_t>(id) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

/// Ordered basis of the cochains of one degree and weight.
struct CellBasis {
    int degree = 0;
    int weight = 0;
    Module module = Module::trivial;
    std::vector<CellKey> keys;
    std::unordered_map<CellKey, Index, CellKeyHash> index;

    std::size_t size() const { return keys.size(); }

    std::optional<Index> find(const CellKey& key) const
    {
        auto it = index.find(key);
        if (it == index.end()) {
            return std::nullopt;
        }
        return it->second;
    }
};

inline constexpr std::size_t default_max_cell = 200000;

namespace detail {

// Canonical k-tuples with argument weights summing to `grade`, in
// lexicographic order of the canonical sequence.
inline void enumerate_tuples(const Algebra& alg, int k, int grade, std::size_t cap,
                             const std::function<void(const ArgTuple&)>& emit)
{
    std::vector<int> order;
    order.reserve(alg.size());
    for (std::size_t i = 0; i < alg.size(); ++i) {
        if (!alg.odd(static_cast<int>(i))) {
            order.push_back(static_cast<int>(i));
        }
    }
    const std::size_t odd_start = order.size();
    for (std::size_t i = 0; i < alg.size(); ++i) {
        if (alg.odd(static_cast<int>(i))) {
            order.push_back(static_cast<int>(i));
        }
    }
    if (k == 0) {
        if (grade == 0) {
            emit({});
        }
        return;
    }
    if (order.empty()) {
        return;
    }
    int lo = alg.weight(order.front());
    int hi = lo;
    for (int id : order) {
        lo = std::min(lo, alg.weight(id));
        hi = std::max(hi, alg.weight(id));
    }

    std::size_t emitted = 0;
    ArgTuple tuple;
    tuple.reserve(static_cast<std::size_t>(k));
    auto rec = [&](auto&& self, std::size_t start, int slots, int partial) -> void {
        if (slots == 0) {
            if (partial == grade) {
                if (++emitted > cap) {
                    throw ResourceCapError("cell (k=" + std::to_string(k) + ", g=" + std::to_string(grade) +
                                           ") exceeds the cap of " + std::to_string(cap) +
                                           " cochain basis elements; narrow the degree/grade range or raise --max-cell");
                }
                emit(tuple);
            }
            return;
        }
        for (std::size_t pos = start; pos < order.size(); ++pos) {
            const int id = order[pos];
            const int w = alg.weight(id);
            if (partial + w + (slots - 1) * lo > grade) {
                // weights only grow within a parity block
                if (pos < odd_start) {
                    pos = std::max(pos, odd_start) - 1;
                    continue;
                }
                break;
            }
            if (partial + w + (slots - 1) * hi < grade) {
                continue;
            }
            tuple.push_back(id);
            self(self, alg.odd(id) ? pos : pos + 1, slots - 1, partial + w);
            tuple.pop_back();
        }
    };
    rec(rec, 0, k, 0);
}

} // namespace detail

/// Basis of C^k_g. Trivial module: canonical k-tuples whose weights sum to
/// g. Adjoint module: (tuple, value) pairs with value weight = (sum of
/// argument weights) - g; only for finite-dimensional algebras.
inline CellBasis enumerate_cell_basis(const Algebra& alg, int k, int g, Module module,
                                      std::size_t cap = default_max_cell)
{
    if (k < 0) {
        throw PreconditionError("cochain degree must be non-negative");
    }
    CellBasis cell;
    cell.degree = k;
    cell.weight = g;
    cell.module = module;
    auto add = [&](CellKey key) {
        if (cell.keys.size() >= cap) {
            throw ResourceCapError("cell (k=" + std::to_string(k) + ", g=" + std::to_string(g) + ") exceeds the cap of " +
                                   std::to_string(cap) +
                                   " cochain basis elements; narrow the degree/grade range or raise --max-cell");
        }
        cell.index.emplace(key, static_cast<Index>(cell.keys.size()));
        cell.keys.push_back(std::move(key));
    };

    if (module == Module::trivial) {
        if (!alg.covers_cell(k, g)) {
            throw PreconditionError("weight window [" + std::to_string(alg.low()) + ", " + std::to_string(alg.high()) +
                                    "] too small for cell (k=" + std::to_string(k) + ", g=" + std::to_string(g) + ")");
        }
        detail::enumerate_tuples(alg, k, g, cap, [&](const ArgTuple& t) { add(CellKey{t, -1}); });
        return cell;
    }

    const auto& spec = alg.spec();
    if (!spec.finite_dimensional() || alg.low() > spec.min_weight() || alg.high() < spec.max_weight()) {
        throw PreconditionError("adjoint coefficients need the whole finite-dimensional algebra; " + to_string(spec) +
                                " cells would be infinite");
    }
    std::map<int, std::vector<int>> by_weight;
    for (const auto& e : alg.elements()) {
        by_weight[e.weight].push_back(e.id);
    }
    const int lo = alg.low();
    const int hi = alg.high();
    for (int s = k * lo; s <= k * hi; ++s) {
        auto values = by_weight.find(s - g);
        if (values == by_weight.end()) {
            continue;
        }
        detail::enumerate_tuples(alg, k, s, cap, [&](const ArgTuple& t) {
            for (int v : values->second) {
                add(CellKey{t, v});
            }
        });
    }
    return cell;
}

/// Sparse cochain of one degree and weight: coefficients over canonical
/// argument tuples (times a value basis element for the adjoint module).
class Cochain {
public:
    Cochain() = default;
    Cochain(int degree, int weight, Module module) : degree_(degree), weight_(weight), module_(module) {}

    int degree() const { return degree_; }
    int weight() const { return weight_; }
    Module module() const { return module_; }
    const std::map<CellKey, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational coefficient(const CellKey& key) const
    {
        auto it = terms_.find(key);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add(const CellKey& key, const Rational& c)
    {
        if (static_cast<int>(key.args.size()) != degree_) {
            throw PreconditionError("cochain term of wrong degree");
        }
        if ((module_ == Module::trivial) != (key.value < 0)) {
            throw PreconditionError("cochain term does not match the module");
        }
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(key, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    /// Adds c * C(raw...) after canonicalizing the argument order.
    void add_raw(const Algebra& alg, ArgTuple raw, const Rational& c, int value = -1)
    {
        auto [sign, t] = canonicalize(alg, std::move(raw));
        if (sign != 0) {
            add(CellKey{std::move(t), value}, sign > 0 ? c : Rational(-c));
        }
    }

    Cochain& operator+=(const Cochain& other)
    {
        check_compatible(other);
        for (const auto& [k, c] : other.terms_) {
            add(k, c);
        }
        return *this;
    }

    Cochain& operator-=(const Cochain& other)
    {
        check_compatible(other);
        for (const auto& [k, c] : other.terms_) {
            add(k, -c);
        }
        return *this;
    }

    Cochain& operator*=(const Rational& s)
    {
        if (s == 0) {
            terms_.clear();
        }
        for (auto& [k, c] : terms_) {
            c *= s;
        }
        return *this;
    }

    friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
    friend Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
    friend Cochain operator*(Cochain a, const Rational& s) { return a *= s; }
    friend Cochain operator*(const Rational& s, Cochain a) { return a *= s; }
    friend bool operator==(const Cochain&, const Cochain&) = default;

    /// Cochain parity of one term: argument parities plus value parity.
    static bool term_odd(const Algebra& alg, const CellKey& key)
    {
        bool p = tuple_odd(alg, key.args);
        if (key.value >= 0) {
            p ^= alg.odd(key.value);
        }
        return p;
    }

private:
    void check_compatible(const Cochain& other) const
    {
        if (other.degree_ != degree_ || other.weight_ != weight_ || other.module_ != module_) {
            throw PreconditionError("cochains of different degree, weight or module");
        }
    }

    int degree_ = 0;
    int weight_ = 0;
    Module module_ = Module::trivial;
    std::map<CellKey, Rational> terms_;
};

inline SparseVector coordinates(const CellBasis& cell, const Cochain& c)
{
    if (c.degree() != cell.degree || c.module() != cell.module) {
        throw PreconditionError("cochain does not belong to this cell");
    }
    std::vector<Entry> out;
    out.reserve(c.terms().size());
    for (const auto& [key, coeff] : c.terms()) {
        auto idx = cell.find(key);
        if (!idx) {
            throw PreconditionError("cochain term outside cell (k=" + std::to_string(cell.degree) +
                                    ", g=" + std::to_string(cell.weight) + "): not weight-homogeneous");
        }
        out.push_back(Entry{*idx, coeff});
    }
    return make_sparse(std::move(out));
}

inline Cochain from_coordinates(const CellBasis& cell, const SparseVector& x)
{
    Cochain c(cell.degree, cell.weight, cell.module);
    for (const auto& e : x) {
        c.add(cell.keys[e.col], e.value);
    }
    return c;
}

/// Checks that every term's weight matches the cochain's weight.
inline void check_homogeneous(const Algebra& alg, const Cochain& c)
{
    for (const auto& [key, coeff] : c.terms()) {
        int w = tuple_weight(alg, key.args);
        if (key.value >= 0) {
            w -= alg.weight(key.value);
        }
        if (w != c.weight()) {
            throw PreconditionError("cochain is not weight-homogeneous");
        }
    }
}

inline std::string term_to_string(const Algebra& alg, const CellKey& key)
{
    std::string out = "C(";
    for (std::size_t i = 0; i < key.args.size(); ++i) {
        if (i > 0) {
            out += ",";
        }
        out += alg.name(key.args[i]);
    }
    if (key.value >= 0) {
        out += "; " + alg.name(key.value);
    }
    return out + ")";
}

/// e.g. "C(U_1,U_1) + 1/2 C(U_1 U_4,U_1,U_1 U_2 U_3) - C(...)"; "0" for
/// the zero cochain. Terms in canonical key order.
inline std::string cochain_pretty(const Algebra& alg, const Cochain& c)
{
    if (c.is_zero()) {
        return "0";
    }
    std::string out;
    for (const auto& [key, coeff] : c.terms()) {
        const bool neg = coeff < 0;
        const Rational mag = neg ? Rational(-coeff) : coeff;
        if (out.empty()) {
            out += neg ? "-" : "";
        } else {
            out += neg ? " - " : " + ";
        }
        if (mag != 1) {
            out += to_string(mag) + " ";
        }
        out += term_to_string(alg, key);
    }
    return out;
}

inline nlohmann::json cochain_to_json(const Algebra& alg, const Cochain& c)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [key, coeff] : c.terms()) {
        nlohmann::json args = nlohmann::json::array();
        for (int id : key.args) {
            args.push_back(alg.name(id));
        }
        nlohmann::json t{{"args", std::move(args)}, {"coeff", to_string(coeff)}};
        if (key.value >= 0) {
            t["value"] = alg.name(key.value);
        }
        terms.push_back(std::move(t));
    }
    return nlohmann::json{{"algebra", to_string(alg.spec())}, {"module", to_string(c.module())},
                          {"degree", c.degree()},           {"weight", c.weight()},
                          {"terms", std::move(terms)}};
}

/// Inverse of cochain_to_json; argument lists may be in any order (the
/// canonicalization sign is applied).
inline Cochain cochain_from_json(const Algebra& alg, const nlohmann::json& j)
{
    try {
        const AlgebraSpec spec = parse_algebra_spec(j.at("algebra").get<std::string>());
        if (!(spec == alg.spec())) {
            throw SpecMismatchError("cochain belongs to " + to_string(spec) + ", expected " + to_string(alg.spec()));
        }
        Cochain c(j.at("degree").get<int>(), j.at("weight").get<int>(), parse_module(j.at("module").get<std::string>()));
        for (const auto& t : j.at("terms")) {
            ArgTuple raw;
            for (const auto& a : t.at("args")) {
                raw.push_back(alg.parse_element(a.get<std::string>()));
            }
            if (static_cast<int>(raw.size()) != c.degree()) {
                throw DeserializationError("term with " + std::to_string(raw.size()) + " arguments in a degree " +
                                           std::to_string(c.degree()) + " cochain");
            }
            int value = -1;
            if (c.module() == Module::adjoint) {
                value = alg.parse_element(t.at("value").get<std::string>());
            }
            c.add_raw(alg, std::move(raw), parse_rational(t.at("coeff").get<std::string>()), value);
        }
        check_homogeneous(alg, c);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw DeserializationError(std::string("malformed cochain record: ") + e.what());
    } catch (const ParseError& e) {
        throw DeserializationError(std::string("malformed cochain record: ") + e.what());
    } catch (const NotInBasisError& e) {
        throw DeserializationError(std::string("malformed cochain record: ") + e.what());
    } catch (const PreconditionError& e) {
        throw DeserializationError(std::string("malformed cochain record: ") + e.what());
    }
}

} // namespace supercoh
