#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace supercoh {

using Index = std::uint32_t;

struct Entry {
    Index col;
    Rational value;

    friend bool operator==(const Entry&, const Entry&) = default;
};

/// Sorted by column, no stored zeros.
using SparseVector = std::vector<Entry>;

/// Sorts, merges duplicate columns and drops zeros.
inline SparseVector make_sparse(std::vector<Entry> items)
{
    std::sort(items.begin(), items.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    SparseVector out;
    out.reserve(items.size());
    for (auto& e : items) {
        if (!out.empty() && out.back().col == e.col) {
            out.back().value += e.value;
        } else {
            if (!out.empty() && out.back().value == 0) {
                out.pop_back();
            }
            out.push_back(std::move(e));
        }
    }
    if (!out.empty() && out.back().value == 0) {
        out.pop_back();
    }
    return out;
}

inline const Rational* find_entry(const SparseVector& v, Index col)
{
    auto it = std::lower_bound(v.begin(), v.end(), col, [](const Entry& e, Index c) { return e.col < c; });
    if (it == v.end() || it->col != col) {
        return nullptr;
    }
    return &it->value;
}

inline Rational entry_at(const SparseVector& v, Index col)
{
    const Rational* p = find_entry(v, col);
    return p ? *p : Rational(0);
}

/// target += factor * source
inline void add_scaled(SparseVector& target, const Rational& factor, const SparseVector& source)
{
    if (factor == 0 || source.empty()) {
        return;
    }
    SparseVector out;
    out.reserve(target.size() + source.size());
    auto a = target.begin();
    auto b = source.begin();
    Rational tmp;
    while (a != target.end() || b != source.end()) {
        if (b == source.end() || (a != target.end() && a->col < b->col)) {
            out.push_back(std::move(*a));
            ++a;
        } else if (a == target.end() || b->col < a->col) {
            out.push_back(Entry{b->col, factor * b->value});
            ++b;
        } else {
            tmp = factor * b->value;
            a->value += tmp;
            if (a->value != 0) {
                out.push_back(std::move(*a));
            }
            ++a;
            ++b;
        }
    }
    target = std::move(out);
}

inline void scale(SparseVector& v, const Rational& factor)
{
    for (auto& e : v) {
        e.value *= factor;
    }
}

class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows) {}

    std::size_t rows() const { return data_.size(); }
    std::size_t cols() const { return cols_; }

    const SparseVector& row(std::size_t i) const { return data_[i]; }
    const std::vector<SparseVector>& row_data() const { return data_; }

    void set_row(std::size_t i, SparseVector v)
    {
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (v[k].col >= cols_ || v[k].value == 0 || (k > 0 && v[k - 1].col >= v[k].col)) {
                throw std::invalid_argument("set_row: entries must be sorted, nonzero and in range");
            }
        }
        data_[i] = std::move(v);
    }

    void append_row(SparseVector v)
    {
        data_.emplace_back();
        set_row(data_.size() - 1, std::move(v));
    }

    Rational at(std::size_t i, Index j) const { return entry_at(data_[i], j); }

    std::size_t nonzeros() const
    {
        std::size_t n = 0;
        for (const auto& r : data_) {
            n += r.size();
        }
        return n;
    }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const SparseVector& r) { return r.empty(); });
    }

    SparseMatrix transpose() const
    {
        std::vector<std::vector<Entry>> cols(cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            for (const auto& e : data_[i]) {
                cols[e.col].push_back(Entry{static_cast<Index>(i), e.value});
            }
        }
        SparseMatrix t(cols_, data_.size());
        for (std::size_t j = 0; j < cols_; ++j) {
            t.data_[j] = std::move(cols[j]); // already sorted by row
        }
        return t;
    }

    SparseVector apply(const SparseVector& x) const
    {
        std::vector<Entry> out;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            Rational acc = 0;
            auto a = data_[i].begin();
            auto b = x.begin();
            while (a != data_[i].end() && b != x.end()) {
                if (a->col < b->col) {
                    ++a;
                } else if (b->col < a->col) {
                    ++b;
                } else {
                    acc += a->value * b->value;
                    ++a;
                    ++b;
                }
            }
            if (acc != 0) {
                out.push_back(Entry{static_cast<Index>(i), acc});
            }
        }
        return out;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b)
    {
        if (a.cols() != b.rows()) {
            throw std::invalid_argument("matrix product: inner dimensions differ");
        }
        SparseMatrix out(a.rows(), b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            SparseVector acc;
            for (const auto& e : a.data_[i]) {
                add_scaled(acc, e.value, b.data_[e.col]);
            }
            out.data_[i] = std::move(acc);
        }
        return out;
    }

    /// Keeps the listed columns, renumbered 0..columns.size()-1.
    SparseMatrix select_columns(std::span<const Index> columns) const
    {
        std::vector<std::int64_t> remap(cols_, -1);
        for (std::size_t k = 0; k < columns.size(); ++k) {
            remap[columns[k]] = static_cast<std::int64_t>(k);
        }
        SparseMatrix out(rows(), columns.size());
        for (std::size_t i = 0; i < rows(); ++i) {
            std::vector<Entry> kept;
            for (const auto& e : data_[i]) {
                if (remap[e.col] >= 0) {
                    kept.push_back(Entry{static_cast<Index>(remap[e.col]), e.value});
                }
            }
            out.data_[i] = make_sparse(std::move(kept));
        }
        return out;
    }

    static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& dense, std::size_t cols)
    {
        SparseMatrix out(dense.size(), cols);
        for (std::size_t i = 0; i < dense.size(); ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                if (dense[i][j] != 0) {
                    out.data_[i].push_back(Entry{static_cast<Index>(j), dense[i][j]});
                }
            }
        }
        return out;
    }

    std::vector<std::vector<Rational>> to_dense() const
    {
        std::vector<std::vector<Rational>> out(rows(), std::vector<Rational>(cols_));
        for (std::size_t i = 0; i < rows(); ++i) {
            for (const auto& e : data_[i]) {
                out[i][e.col] = e.value;
            }
        }
        return out;
    }

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    std::size_t cols_ = 0;
    std::vector<SparseVector> data_;
};

/// Debug dump: one row per line, space-separated `col:num/den` pairs.
inline void dump_matrix(std::ostream& out, const SparseMatrix& m)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        bool first = true;
        for (const auto& e : m.row(i)) {
            if (!first) {
                out << ' ';
            }
            first = false;
            out << e.col << ':' << to_fraction_string(e.value);
        }
        out << '\n';
    }
}

struct ReduceOptions {
    bool reduced = true;           // back-substitute to reduced row-echelon form
    bool record_transform = false; // keep T with T * M = reduced
};

/// Row-echelon form of a matrix. `reduced` holds the `rank` nonzero rows
/// sorted by pivot column, each with leading entry 1 (and zeros in every
/// other pivot column when fully reduced).
struct EchelonForm {
    SparseMatrix reduced;
    std::size_t rank = 0;
    std::vector<Index> pivots;
    std::optional<SparseMatrix> transform;

    std::vector<Index> free_columns() const
    {
        std::vector<Index> out;
        std::size_t p = 0;
        for (Index c = 0; c < reduced.cols(); ++c) {
            if (p < pivots.size() && pivots[p] == c) {
                ++p;
            } else {
                out.push_back(c);
            }
        }
        return out;
    }
};

/// Gaussian elimination over Q. Pivot rule: take the sparsest remaining
/// row (ties: lowest leading column) and pivot on its leading column.
inline EchelonForm row_reduce(const SparseMatrix& m, ReduceOptions options = {})
{
    struct WorkRow {
        SparseVector v;
        SparseVector t;
    };
    std::vector<WorkRow> active;
    active.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (m.row(i).empty()) {
            continue;
        }
        WorkRow w{m.row(i), {}};
        if (options.record_transform) {
            w.t.push_back(Entry{static_cast<Index>(i), Rational(1)});
        }
        active.push_back(std::move(w));
    }

    std::vector<WorkRow> chosen;
    Rational factor;
    while (!active.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < active.size(); ++i) {
            const auto& a = active[i].v;
            const auto& b = active[best].v;
            if (a.size() < b.size() || (a.size() == b.size() && a.front().col < b.front().col)) {
                best = i;
            }
        }
        WorkRow pivot = std::move(active[best]);
        active[best] = std::move(active.back());
        active.pop_back();

        const Rational inv = 1 / pivot.v.front().value;
        scale(pivot.v, inv);
        scale(pivot.t, inv);
        const Index col = pivot.v.front().col;

        for (std::size_t i = 0; i < active.size();) {
            const Rational* hit = find_entry(active[i].v, col);
            if (hit) {
                factor = -*hit;
                add_scaled(active[i].v, factor, pivot.v);
                if (options.record_transform) {
                    add_scaled(active[i].t, factor, pivot.t);
                }
                if (active[i].v.empty()) {
                    active[i] = std::move(active.back());
                    active.pop_back();
                    continue;
                }
            }
            ++i;
        }
        chosen.push_back(std::move(pivot));
    }

    if (options.reduced) {
        // Later pivot rows carry no earlier pivot columns; clear each pivot
        // column from the rows chosen before it, last pivot first.
        for (std::size_t i = chosen.size(); i-- > 0;) {
            const Index col = chosen[i].v.front().col;
            for (std::size_t j = 0; j < i; ++j) {
                const Rational* hit = find_entry(chosen[j].v, col);
                if (hit) {
                    factor = -*hit;
                    add_scaled(chosen[j].v, factor, chosen[i].v);
                    if (options.record_transform) {
                        add_scaled(chosen[j].t, factor, chosen[i].t);
                    }
                }
            }
        }
    }

    std::sort(chosen.begin(), chosen.end(),
              [](const WorkRow& a, const WorkRow& b) { return a.v.front().col < b.v.front().col; });

    EchelonForm out;
    out.rank = chosen.size();
    out.reduced = SparseMatrix(0, m.cols());
    SparseMatrix transform(0, m.rows());
    for (auto& w : chosen) {
        out.pivots.push_back(w.v.front().col);
        out.reduced.append_row(std::move(w.v));
        if (options.record_transform) {
            transform.append_row(std::move(w.t));
        }
    }
    if (options.record_transform) {
        out.transform = std::move(transform);
    }
    return out;
}

inline std::size_t rank(const SparseMatrix& m)
{
    return row_reduce(m, ReduceOptions{.reduced = false}).rank;
}

namespace detail {

inline std::vector<SparseVector> nullspace_from_rref(const EchelonForm& e)
{
    const auto free = e.free_columns();
    std::vector<std::int64_t> slot(e.reduced.cols(), -1);
    for (std::size_t k = 0; k < free.size(); ++k) {
        slot[free[k]] = static_cast<std::int64_t>(k);
    }
    std::vector<std::vector<Entry>> parts(free.size());
    for (std::size_t k = 0; k < free.size(); ++k) {
        parts[k].push_back(Entry{free[k], Rational(1)});
    }
    for (std::size_t r = 0; r < e.rank; ++r) {
        for (const auto& entry : e.reduced.row(r)) {
            if (slot[entry.col] >= 0) {
                parts[static_cast<std::size_t>(slot[entry.col])].push_back(Entry{e.pivots[r], -entry.value});
            }
        }
    }
    std::vector<SparseVector> out;
    out.reserve(parts.size());
    for (auto& p : parts) {
        out.push_back(make_sparse(std::move(p)));
    }
    return out;
}

} // namespace detail

/// Basis of {x : M x = 0}: one vector per free column, equal to 1 there
/// and 0 on the other free columns.
inline std::vector<SparseVector> nullspace_basis(const SparseMatrix& m)
{
    return detail::nullspace_from_rref(row_reduce(m));
}

/// Constraints B x = 0 cutting out exactly the column space of b. Rows of
/// B are indexed by the free columns of rref(b^T) and restrict to the
/// identity there, so B has full row rank and B b = 0.
inline SparseMatrix cokernel_constraints(const SparseMatrix& b)
{
    auto rows = detail::nullspace_from_rref(row_reduce(b.transpose()));
    SparseMatrix out(0, b.rows());
    for (auto& r : rows) {
        out.append_row(std::move(r));
    }
    return out;
}

/// Reduces x against a row space given in reduced row-echelon form. The
/// result is zero iff x lies in the row space, and is canonical for the
/// coset x + rowspace.
inline SparseVector reduce_modulo(const EchelonForm& span, SparseVector x)
{
    for (std::size_t r = 0; r < span.rank && !x.empty(); ++r) {
        const Rational* hit = find_entry(x, span.pivots[r]);
        if (hit) {
            const Rational factor = -*hit;
            add_scaled(x, factor, span.reduced.row(r));
        }
    }
    return x;
}

/// A solution t of M t = rhs, or nullopt if the system is inconsistent.
inline std::optional<SparseVector> solve(const SparseMatrix& m, const SparseVector& rhs)
{
    const Index aug = static_cast<Index>(m.cols());
    for (const auto& e : rhs) {
        if (e.col >= m.rows()) {
            throw std::invalid_argument("solve: right-hand side longer than the matrix");
        }
    }
    SparseMatrix augmented(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        SparseVector r = m.row(i);
        if (const Rational* v = find_entry(rhs, static_cast<Index>(i))) {
            r.push_back(Entry{aug, *v});
        }
        augmented.set_row(i, std::move(r));
    }
    const EchelonForm e = row_reduce(augmented);
    std::vector<Entry> t;
    for (std::size_t r = 0; r < e.rank; ++r) {
        if (e.pivots[r] == aug) {
            return std::nullopt;
        }
        if (const Rational* v = find_entry(e.reduced.row(r), aug)) {
            t.push_back(Entry{e.pivots[r], *v});
        }
    }
    return make_sparse(std::move(t));
}

/// Outcome of the quotient procedure on one cell.
struct QuotientResult {
    std::size_t dimension = 0;
    std::vector<SparseVector> representatives; // in the C^k cell basis
    std::size_t rank_z_system = 0;             // rank of the reduced relations A y = 0
    std::size_t rank_b_system = 0;             // rank of B x = 0
    std::size_t rank_z = 0;                    // rank of d_k
    std::size_t rank_b = 0;                    // rank of d_{k-1}
    std::size_t cell_dimension = 0;
};

/// Computes Z/B for cocycles {Z x = 0} and coboundaries {x = b t}:
///  (a) eliminate t to get constraints B x = 0;
///  (b) compare the ranks of the B- and Z-systems; equal ranks mean Z = B;
///  (c) otherwise substitute y = B x into Z x = 0, giving A y = 0; the
///      non-leading y's give the cohomology basis.
/// Because B restricts to the identity on its free columns F, A = Z|_F and
/// y pulls back to x by placing it on F. Representatives therefore have no
/// entries in the pivot columns of the coboundary echelon form.
///
/// The rank formula dim ker Z - rank b is computed independently and any
/// disagreement throws ConsistencyError.
inline QuotientResult quotient_space(const SparseMatrix& z, const SparseMatrix& b)
{
    const std::size_t n = z.cols();
    if (b.rows() != n) {
        throw PreconditionError("quotient_space: Z has " + std::to_string(n) + " columns but b has " +
                                    std::to_string(b.rows()) + " rows");
    }
    if (!(z * b).is_zero()) {
        throw ConsistencyError("quotient_space: a coboundary column violates Z x = 0 (d^2 != 0)");
    }

    QuotientResult out;
    out.cell_dimension = n;

    // (a)
    const EchelonForm b_span = row_reduce(b.transpose());
    const std::vector<Index> free = b_span.free_columns();
    out.rank_b = b_span.rank;
    out.rank_b_system = free.size();

    // (b)
    out.rank_z = rank(z);
    if (out.rank_b_system != out.rank_z) {
        // (c)
        const SparseMatrix a = z.select_columns(free);
        const EchelonForm a_form = row_reduce(a);
        out.rank_z_system = a_form.rank;
        for (auto& y : detail::nullspace_from_rref(a_form)) {
            SparseVector x;
            x.reserve(y.size());
            for (auto& e : y) {
                x.push_back(Entry{free[e.col], std::move(e.value)});
            }
            out.representatives.push_back(std::move(x));
        }
    } else {
        out.rank_z_system = out.rank_z;
    }
    out.dimension = out.representatives.size();

    const std::size_t by_ranks = (n - out.rank_z) - out.rank_b;
    if (by_ranks != out.dimension || out.rank_z_system != out.rank_z) {
        throw ConsistencyError("quotient_space: substep procedure gives dim " + std::to_string(out.dimension) +
                               " but dim ker Z - rank b = " + std::to_string(by_ranks));
    }
    return out;
}

} // namespace supercoh
