#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "cochain.hpp"
#include "cohomology.hpp"
#include "complex.hpp"
#include "sparse_matrix.hpp"
#include "super_polynomial.hpp"

namespace supercoh {

struct CheckResult {
    CheckResult() = default;
    explicit CheckResult(std::string n) : name(std::move(n)) {}

    std::string name;
    bool passed = true;
    std::size_t checked = 0;
    std::string detail;

    void fail(std::string why)
    {
        if (passed) {
            detail = std::move(why);
        }
        passed = false;
    }
};

namespace detail {

inline bool parity_of(const SuperPolynomial& f)
{
    return f.terms().empty() ? false : f.terms().begin()->first.odd();
}

inline Combination bracket_combination(const Algebra& alg, const Combination& x, const Combination& y)
{
    Combination out;
    for (const auto& [i, a] : x) {
        for (const auto& [j, b] : y) {
            const auto br = alg.bracket(i, j);
            for (const auto& e : br.terms) {
                Rational v = a * b * e.value;
                if (br.sign < 0) {
                    v = -v;
                }
                out[static_cast<int>(e.col)] += v;
            }
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

inline Combination scaled(Combination x, const Rational& s)
{
    for (auto& [id, c] : x) {
        c *= s;
    }
    std::erase_if(x, [](const auto& kv) { return kv.second == 0; });
    return x;
}

inline Combination added(Combination x, const Combination& y)
{
    for (const auto& [id, c] : y) {
        x[id] += c;
    }
    std::erase_if(x, [](const auto& kv) { return kv.second == 0; });
    return x;
}

} // namespace detail

/// Super skew-symmetry on all basis pairs and the super Jacobi identity
/// on all basis triples of a finite-dimensional algebra, through the
/// structure table.
inline CheckResult check_skew_jacobi_exhaustive(const AlgebraSpec& spec)
{
    CheckResult res{"skew+jacobi " + to_string(spec)};
    const Algebra alg = Algebra::whole(spec);
    const int n = static_cast<int>(alg.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Combination x{{i, 1}};
            const Combination y{{j, 1}};
            const int s = (alg.odd(i) && alg.odd(j)) ? 1 : -1;
            ++res.checked;
            if (detail::bracket_combination(alg, x, y) != detail::scaled(detail::bracket_combination(alg, y, x), s)) {
                res.fail("skew-symmetry fails for [" + alg.name(i) + ", " + alg.name(j) + "]");
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Combination f{{i, 1}};
            const Combination g{{j, 1}};
            const Combination fg = detail::bracket_combination(alg, f, g);
            for (int k = 0; k < n; ++k) {
                const Combination h{{k, 1}};
                const Combination lhs = detail::bracket_combination(alg, f, detail::bracket_combination(alg, g, h));
                const int s = (alg.odd(i) && alg.odd(j)) ? -1 : 1;
                const Combination rhs = detail::added(
                    detail::bracket_combination(alg, fg, h),
                    detail::scaled(detail::bracket_combination(alg, g, detail::bracket_combination(alg, f, h)), s));
                ++res.checked;
                if (lhs != rhs) {
                    res.fail("Jacobi fails for (" + alg.name(i) + ", " + alg.name(j) + ", " + alg.name(k) + ")");
                }
            }
        }
    }
    return res;
}

/// Skew-symmetry and Jacobi on random triples of weight-homogeneous
/// polynomials of one parity each, drawn from weights [wmin, wmax].
/// Works for infinite families since no table is involved.
inline CheckResult check_jacobi_random(const AlgebraSpec& spec, int wmin, int wmax, std::size_t samples,
                                       std::uint64_t seed)
{
    CheckResult res{"random jacobi " + to_string(spec)};
    std::mt19937_64 rng(seed);
    std::vector<std::vector<BasisElement>> by_weight;
    for (int w = wmin; w <= wmax; ++w) {
        auto elems = enumerate_basis(spec, w);
        std::erase_if(elems, [](const BasisElement& e) { return e.is_grading_element(); });
        if (!elems.empty()) {
            by_weight.push_back(std::move(elems));
        }
    }
    if (by_weight.empty()) {
        res.fail("no elements in the weight window");
        return res;
    }
    auto random_element = [&]() {
        const auto& pool = by_weight[rng() % by_weight.size()];
        const bool odd = pool[rng() % pool.size()].odd;
        SuperPolynomial f(spec.vars);
        const int terms = 1 + static_cast<int>(rng() % 3);
        for (int t = 0; t < terms; ++t) {
            const auto& e = pool[rng() % pool.size()];
            if (e.odd != odd) {
                continue;
            }
            Rational c(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3));
            c.canonicalize();
            f.add(*e.monomial, c);
        }
        return f;
    };
    auto br = [&](const SuperPolynomial& a, const SuperPolynomial& b) {
        return project_to_family(spec, poisson_bracket(a, b));
    };
    for (std::size_t s = 0; s < samples; ++s) {
        const SuperPolynomial f = random_element();
        const SuperPolynomial g = random_element();
        const SuperPolynomial h = random_element();
        const bool pf = detail::parity_of(f);
        const bool pg = detail::parity_of(g);
        ++res.checked;
        const SuperPolynomial skew = br(g, f) * Rational((pf && pg) ? 1 : -1);
        if (br(f, g) != skew) {
            res.fail("skew-symmetry fails for f = " + to_string(f) + ", g = " + to_string(g));
        }
        const SuperPolynomial lhs = br(f, br(g, h));
        const SuperPolynomial rhs = br(br(f, g), h) + br(g, br(f, h)) * Rational((pf && pg) ? -1 : 1);
        if (lhs != rhs) {
            res.fail("Jacobi fails for f = " + to_string(f) + ", g = " + to_string(g) + ", h = " + to_string(h));
        }
    }
    return res;
}

/// d_k . d_{k-1} = 0 as an exact matrix identity on every cell of the range.
inline CheckResult check_d_squared(const AlgebraSpec& spec, Module module, int kmin, int kmax, int gmin, int gmax,
                                   std::size_t cap = default_max_cell)
{
    CheckResult res{"d^2=0 " + to_string(spec) + " " + to_string(module)};
    const Algebra alg = spec.finite_dimensional() ? Algebra::whole(spec) : Algebra::for_cells(spec, kmax + 2, gmax);
    for (int k = std::max(kmin, 1); k <= kmax; ++k) {
        for (int g = gmin; g <= gmax; ++g) {
            const SparseMatrix lower = differential_matrix(alg, k - 1, g, module, cap);
            const SparseMatrix upper = differential_matrix(alg, k, g, module, cap);
            ++res.checked;
            if (!(upper * lower).is_zero()) {
                res.fail("d^2 != 0 at (" + std::to_string(k) + ", " + std::to_string(g) + ")");
            }
        }
    }
    return res;
}

/// Truncated Euler identity per grade:
///   sum_{k<=K} (-1)^k dim C^k_g = sum_{k<=K} (-1)^k dim H^k_g + (-1)^K rank d_K.
/// Cells of the finite families never vanish in high degree (odd
/// arguments repeat), so the sum is cut at K and corrected by the rank
/// of the last differential, computed on its own.
inline CheckResult check_euler(const AlgebraSpec& spec, int K, int gmin, int gmax, std::size_t cap = default_max_cell)
{
    CheckResult res{"euler " + to_string(spec)};
    const Algebra alg = spec.finite_dimensional() ? Algebra::whole(spec) : Algebra::for_cells(spec, K + 1, gmax);
    for (int g = gmin; g <= gmax; ++g) {
        long chi_c = 0;
        long chi_h = 0;
        for (int k = 0; k <= K; ++k) {
            const CellRecord rec = compute_cell(alg, Module::trivial, k, g, CellOptions{cap, false, {}});
            const long sign = (k % 2 == 0) ? 1 : -1;
            chi_c += sign * static_cast<long>(rec.dim_C);
            chi_h += sign * static_cast<long>(rec.dim_H);
        }
        const long top = static_cast<long>(rank(differential_matrix(alg, K, g, Module::trivial, cap)));
        chi_h += ((K % 2 == 0) ? 1 : -1) * top;
        ++res.checked;
        if (chi_c != chi_h) {
            res.fail("grade " + std::to_string(g) + ": " + std::to_string(chi_c) + " != " + std::to_string(chi_h));
        }
    }
    return res;
}

inline Cochain random_cochain(const Algebra& alg, int k, int g, std::mt19937_64& rng, std::size_t cap = default_max_cell)
{
    const CellBasis cell = enumerate_cell_basis(alg, k, g, Module::trivial, cap);
    Cochain c(k, g, Module::trivial);
    for (const auto& key : cell.keys) {
        if (rng() % 3 == 0) {
            Rational v(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 2));
            v.canonicalize();
            c.add(key, v);
        }
    }
    return c;
}

/// d(c1.c2) = dc1.c2 + (-1)^{k1} c1.dc2 on random cochain pairs.
inline CheckResult check_leibniz(const AlgebraSpec& spec, std::size_t pairs, std::uint64_t seed)
{
    CheckResult res{"leibniz " + to_string(spec)};
    const Algebra alg = Algebra::whole(spec);
    std::mt19937_64 rng(seed);
    const int lo = spec.min_weight();
    const int hi = spec.max_weight();
    for (std::size_t t = 0; t < pairs; ++t) {
        const int k1 = 1 + static_cast<int>(rng() % 2);
        const int k2 = 1 + static_cast<int>(rng() % 2);
        const int g1 = k1 * lo + static_cast<int>(rng() % static_cast<unsigned>(k1 * (hi - lo) + 1));
        const int g2 = k2 * lo + static_cast<int>(rng() % static_cast<unsigned>(k2 * (hi - lo) + 1));
        const Cochain c1 = random_cochain(alg, k1, g1, rng);
        const Cochain c2 = random_cochain(alg, k2, g2, rng);
        const Cochain lhs = differential(alg, cup_product(alg, c1, c2));
        const Cochain rhs = cup_product(alg, differential(alg, c1), c2) +
                            Rational(k1 % 2 ? -1 : 1) * cup_product(alg, c1, differential(alg, c2));
        ++res.checked;
        if (lhs != rhs) {
            res.fail("Leibniz fails for degrees (" + std::to_string(k1) + ", " + std::to_string(k2) + "), grades (" +
                     std::to_string(g1) + ", " + std::to_string(g2) + ")");
        }
    }
    return res;
}

/// Recomputes dim ker Z - rank b with plain ranks for every cell of a
/// report and compares against the quotient procedure's dimension.
inline CheckResult check_dimension_formula(const CohomologyReport& report, std::size_t cap = default_max_cell)
{
    CheckResult res{"dim H = dim ker Z - rank b " + to_string(report.spec)};
    const Algebra alg = report.spec.finite_dimensional()
                            ? Algebra::whole(report.spec)
                            : Algebra::for_cells(report.spec, report.degree_max + 1, report.grade_max);
    for (const auto& cell : report.cells) {
        if (cell.capped) {
            continue;
        }
        const std::size_t rz = rank(differential_matrix(alg, cell.degree, cell.grade, report.module, cap));
        const std::size_t rb =
            cell.degree == 0 ? 0 : rank(differential_matrix(alg, cell.degree - 1, cell.grade, report.module, cap));
        ++res.checked;
        if (cell.dim_C - rz - rb != cell.dim_H) {
            res.fail("mismatch at (" + std::to_string(cell.degree) + ", " + std::to_string(cell.grade) + ")");
        }
    }
    return res;
}

inline CheckResult check_grading_vanishing(const AlgebraSpec& spec, int kmax, int max_abs_grade,
                                           std::size_t cap = default_max_cell)
{
    CheckResult res{"grading element vanishing " + to_string(spec)};
    std::vector<int> grades;
    for (int g = -max_abs_grade; g <= max_abs_grade; ++g) {
        if (g != 0) {
            grades.push_back(g);
        }
    }
    const VanishingReport rep = grading_element_vanishing_check(spec, kmax, grades, cap);
    res.checked = rep.cells.size();
    for (const auto& c : rep.cells) {
        if (c.dim_H != 0) {
            res.fail("dim H^" + std::to_string(c.degree) + "_" + std::to_string(c.grade) + " = " +
                     std::to_string(c.dim_H));
        }
    }
    return res;
}

struct CellWindow {
    const char* algebra;
    int kmin;
    int kmax;
    int gmin;
    int gmax;
};

/// Cell windows covered by the d^2 and dimension suites.
inline const std::vector<CellWindow>& reference_windows()
{
    static const std::vector<CellWindow> windows{
        {"SH(0|4)", 1, 6, -6, 6},   {"SH(0|3)", 1, 8, -8, 8},  {"H(0|4)", 1, 6, -6, 6},
        {"Po(0|4)", 1, 6, 0, 6},    {"H(2|0)", 1, 8, -4, 0},   {"Po(2|0)", 1, 8, -4, 0},
        {"HHat(2|0)", 0, 8, -3, 3}, {"PoHat(2|0)", 0, 8, 0, 0}, {"PoHat(2|0)", 0, 4, -3, 3},
    };
    return windows;
}

/// Suites run by `supercoh check`. `suites` selects by name among
/// jacobi, d2, euler, leibniz, dims, vanishing; empty means all.
/// `progress` is called after each finished check.
inline std::vector<CheckResult> standard_checks(const std::vector<std::string>& suites,
                                                const std::function<void(const CheckResult&)>& progress = {},
                                                std::size_t cap = default_max_cell)
{
    auto wanted = [&](const std::string& name) {
        return suites.empty() || std::find(suites.begin(), suites.end(), name) != suites.end();
    };
    std::vector<CheckResult> out;
    auto record = [&](CheckResult r) {
        if (progress) {
            progress(r);
        }
        out.push_back(std::move(r));
    };
    if (wanted("jacobi")) {
        record(check_skew_jacobi_exhaustive(parse_algebra_spec("Po(0|4)")));
        record(check_jacobi_random(parse_algebra_spec("Po(2|0)"), -2, 3, 1000, 20240611));
    }
    if (wanted("d2")) {
        for (const auto& w : reference_windows()) {
            record(check_d_squared(parse_algebra_spec(w.algebra), Module::trivial, w.kmin, w.kmax, w.gmin, w.gmax, cap));
        }
    }
    if (wanted("euler")) {
        for (const char* name : {"SH(0|4)", "H(0|4)", "Po(0|4)"}) {
            record(check_euler(parse_algebra_spec(name), 6, -6, 6, cap));
        }
    }
    if (wanted("leibniz")) {
        record(check_leibniz(parse_algebra_spec("SH(0|4)"), 100, 7));
    }
    if (wanted("dims")) {
        for (const auto& w : reference_windows()) {
            TableOptions options;
            options.max_cell = cap;
            options.representatives = false;
            record(check_dimension_formula(
                compute_table(parse_algebra_spec(w.algebra), Module::trivial, w.kmin, w.kmax, w.gmin, w.gmax, options),
                cap));
        }
    }
    if (wanted("vanishing")) {
        record(check_grading_vanishing(parse_algebra_spec("HHat(2|0)"), 4, 3, cap));
        record(check_grading_vanishing(parse_algebra_spec("PoHat(2|0)"), 4, 3, cap));
    }
    return out;
}

} // namespace supercoh
