#pragma once

#include <map>
#include <vector>

#include "algebra.hpp"
#include "cochain.hpp"
#include "sparse_matrix.hpp"

namespace supercoh {

namespace detail {

// Sign of bringing x_i to the front of the canonical tuple.
inline int front_sign(const Algebra& alg, const ArgTuple& x, std::size_t i)
{
    int s = 1;
    for (std::size_t l = 0; l < i; ++l) {
        s *= swap_sign(alg, x[l], x[i]);
    }
    return s;
}

// Sign of reordering (x_0..x_k) into (x_i, x_j, rest) for i < j.
inline int pair_front_sign(const Algebra& alg, const ArgTuple& x, std::size_t i, std::size_t j)
{
    int s = front_sign(alg, x, i);
    for (std::size_t l = 0; l < j; ++l) {
        if (l != i) {
            s *= swap_sign(alg, x[l], x[j]);
        }
    }
    return s;
}

inline ArgTuple without(const ArgTuple& x, std::size_t i, std::size_t j = static_cast<std::size_t>(-1))
{
    ArgTuple out;
    out.reserve(x.size());
    for (std::size_t l = 0; l < x.size(); ++l) {
        if (l != i && l != j) {
            out.push_back(x[l]);
        }
    }
    return out;
}

} // namespace detail

/// The differential as a function on canonical tuples:
///
///   dc(x_0..x_k) = sum_i  s_i (-1)^{p(x_i)p(c)} x_i . c(..^x_i..)
///                - sum_{i<j} s_ij c([x_i,x_j], ..^x_i..^x_j..)
///
/// where s_i (s_ij) is the sign of moving x_i (x_i then x_j) to the front
/// under C(..,x,y,..) = -(-1)^{p(x)p(y)} C(..,y,x,..). The action terms
/// vanish for trivial coefficients.
///
/// Rows are indexed by the (k+1, g) cell basis and columns by the (k, g)
/// cell basis, so the matrix at k is the cocycle system Z and the matrix
/// at k-1 is the coboundary parametrization b.
inline SparseMatrix differential_matrix(const Algebra& alg, const CellBasis& source, const CellBasis& target)
{
    if (target.degree != source.degree + 1 || target.weight != source.weight || target.module != source.module) {
        throw PreconditionError("differential_matrix: cells are not consecutive");
    }
    const bool adjoint = source.module == Module::adjoint;
    std::map<int, std::vector<int>> by_weight;
    if (adjoint) {
        for (const auto& e : alg.elements()) {
            by_weight[e.weight].push_back(e.id);
        }
    }

    SparseMatrix d(target.size(), source.size());
    std::vector<Entry> row;
    for (std::size_t r = 0; r < target.size(); ++r) {
        const CellKey& w = target.keys[r];
        const ArgTuple& x = w.args;
        row.clear();

        for (std::size_t i = 0; i < x.size(); ++i) {
            for (std::size_t j = i + 1; j < x.size(); ++j) {
                auto br = alg.bracket(x[i], x[j]);
                if (br.terms.empty()) {
                    continue;
                }
                const int s = -detail::pair_front_sign(alg, x, i, j) * br.sign;
                const ArgTuple rest = detail::without(x, i, j);
                for (const auto& term : br.terms) {
                    auto [si, t] = insert_canonical(alg, static_cast<int>(term.col), rest);
                    if (si == 0) {
                        continue;
                    }
                    auto col = source.find(CellKey{std::move(t), w.value});
                    if (!col) {
                        throw ConsistencyError("differential_matrix: bracket term outside the source cell");
                    }
                    row.push_back(Entry{*col, (s * si > 0) ? term.value : Rational(-term.value)});
                }
            }
        }

        if (adjoint) {
            const int vw = alg.weight(w.value);
            for (std::size_t i = 0; i < x.size(); ++i) {
                auto candidates = by_weight.find(vw - alg.weight(x[i]));
                if (candidates == by_weight.end()) {
                    continue;
                }
                const ArgTuple rest = detail::without(x, i);
                const bool rest_odd = tuple_odd(alg, rest);
                const int si = detail::front_sign(alg, x, i);
                for (int u : candidates->second) {
                    auto br = alg.bracket(x[i], u);
                    const Rational* coef = find_entry(br.terms, static_cast<Index>(w.value));
                    if (!coef) {
                        continue;
                    }
                    const bool c_odd = rest_odd ^ alg.odd(u);
                    int s = si * br.sign;
                    if (alg.odd(x[i]) && c_odd) {
                        s = -s;
                    }
                    auto col = source.find(CellKey{rest, u});
                    if (!col) {
                        throw ConsistencyError("differential_matrix: action term outside the source cell");
                    }
                    row.push_back(Entry{*col, s > 0 ? *coef : Rational(-*coef)});
                }
            }
        }
        d.set_row(r, make_sparse(std::move(row)));
        row = {};
    }
    return d;
}

inline SparseMatrix differential_matrix(const Algebra& alg, int k, int g, Module module,
                                        std::size_t cap = default_max_cell)
{
    const CellBasis source = enumerate_cell_basis(alg, k, g, module, cap);
    const CellBasis target = enumerate_cell_basis(alg, k + 1, g, module, cap);
    return differential_matrix(alg, source, target);
}

inline Cochain differential(const Algebra& alg, const Cochain& c, std::size_t cap = default_max_cell)
{
    check_homogeneous(alg, c);
    const CellBasis source = enumerate_cell_basis(alg, c.degree(), c.weight(), c.module(), cap);
    const CellBasis target = enumerate_cell_basis(alg, c.degree() + 1, c.weight(), c.module(), cap);
    const SparseMatrix d = differential_matrix(alg, source, target);
    return from_coordinates(target, d.apply(coordinates(source, c)));
}

} // namespace supercoh
