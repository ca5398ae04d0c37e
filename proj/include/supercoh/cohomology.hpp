#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "algebra.hpp"
#include "cache.hpp"
#include "cochain.hpp"
#include "complex.hpp"
#include "errors.hpp"
#include "sparse_matrix.hpp"

namespace supercoh {

struct CellOptions {
    std::size_t max_cell = default_max_cell;
    bool representatives = true;
    // When set, the d-matrices of each computed cell are written here.
    std::optional<std::filesystem::path> dump_dir;
};

/// Result for one (degree, grade) cell.
struct CellRecord {
    int degree = 0;
    int grade = 0;
    bool capped = false;
    std::string message;
    std::size_t dim_C = 0;
    std::size_t rank_Z = 0;
    std::size_t rank_b = 0;
    std::size_t dim_H = 0;
    std::vector<Cochain> representatives;
};

namespace detail {

inline void dump_cell_matrix(const std::filesystem::path& dir, const std::string& name, const SparseMatrix& m)
{
    // Neighbouring cells share a differential, so the same file may be
    // written by two workers; write-then-rename keeps it whole.
    std::filesystem::create_directories(dir);
    const auto target = dir / (name + "_" + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ".txt");
    const auto tmp = target.string() + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp);
        if (!out) {
            throw IoError("cannot write matrix dump " + tmp);
        }
        dump_matrix(out, m);
    }
    std::filesystem::rename(tmp, target);
}

// d_{k-1}: C^{k-1} -> C^k, as a (dim C^k) x (dim C^{k-1}) matrix; empty
// when k = 0.
inline SparseMatrix coboundary_matrix(const Algebra& alg, const CellBasis& cell, std::size_t cap)
{
    if (cell.degree == 0) {
        return SparseMatrix(cell.size(), 0);
    }
    const CellBasis below = enumerate_cell_basis(alg, cell.degree - 1, cell.weight, cell.module, cap);
    return differential_matrix(alg, below, cell);
}

inline Cochain normalized(Cochain c)
{
    if (!c.is_zero()) {
        const Rational lead = c.terms().begin()->second;
        c *= Rational(1 / lead);
    }
    return c;
}

} // namespace detail

/// Builds the cells of degree k-1, k, k+1 at weight g, forms b = d_{k-1}
/// and Z = d_k and runs the quotient procedure. Representatives are
/// normalized so their first nonzero coordinate is 1.
inline CellRecord compute_cell(const Algebra& alg, Module module, int k, int g, const CellOptions& options = {})
{
    if (k < 0) {
        throw PreconditionError("cochain degree must be non-negative");
    }
    const CellBasis cell = enumerate_cell_basis(alg, k, g, module, options.max_cell);
    const CellBasis above = enumerate_cell_basis(alg, k + 1, g, module, options.max_cell);
    const SparseMatrix z = differential_matrix(alg, cell, above);
    const SparseMatrix b = detail::coboundary_matrix(alg, cell, options.max_cell);
    if (options.dump_dir) {
        const std::string grade = "_g" + std::to_string(g);
        detail::dump_cell_matrix(*options.dump_dir, "d_k" + std::to_string(k) + grade, z);
        if (k > 0) {
            detail::dump_cell_matrix(*options.dump_dir, "d_k" + std::to_string(k - 1) + grade, b);
        }
    }
    const QuotientResult q = quotient_space(z, b);

    CellRecord rec;
    rec.degree = k;
    rec.grade = g;
    rec.dim_C = cell.size();
    rec.rank_Z = q.rank_z;
    rec.rank_b = q.rank_b;
    rec.dim_H = q.dimension;
    if (options.representatives) {
        for (const auto& x : q.representatives) {
            rec.representatives.push_back(detail::normalized(from_coordinates(cell, x)));
        }
    }
    return rec;
}

inline nlohmann::json cell_to_json(const Algebra& alg, const CellRecord& rec)
{
    if (rec.capped) {
        return nlohmann::json{{"degree", rec.degree}, {"grade", rec.grade}, {"status", "capped"}, {"message", rec.message}};
    }
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& c : rec.representatives) {
        reps.push_back(cochain_to_json(alg, c));
    }
    return nlohmann::json{{"degree", rec.degree}, {"grade", rec.grade}, {"dim_C", rec.dim_C},   {"rank_Z", rec.rank_Z},
                          {"rank_b", rec.rank_b}, {"dim_H", rec.dim_H}, {"representatives", std::move(reps)}};
}

inline CellRecord cell_from_json(const Algebra& alg, const nlohmann::json& j)
{
    CellRecord rec;
    rec.degree = j.at("degree").get<int>();
    rec.grade = j.at("grade").get<int>();
    if (j.contains("status") && j["status"] == "capped") {
        rec.capped = true;
        rec.message = j.value("message", "");
        return rec;
    }
    rec.dim_C = j.at("dim_C").get<std::size_t>();
    rec.rank_Z = j.at("rank_Z").get<std::size_t>();
    rec.rank_b = j.at("rank_b").get<std::size_t>();
    rec.dim_H = j.at("dim_H").get<std::size_t>();
    for (const auto& c : j.at("representatives")) {
        rec.representatives.push_back(cochain_from_json(alg, c));
    }
    return rec;
}

inline std::string cache_key(const AlgebraSpec& spec, Module module, int k, int g)
{
    return std::string("supercoh/") + std::string(tool_version) + "|" + to_string(spec) + "|" + to_string(module) + "|" +
           std::string(convention_fingerprint) + "|k=" + std::to_string(k) + "|g=" + std::to_string(g);
}

/// Grid of cell results with row = degree, column = grade.
struct CohomologyReport {
    AlgebraSpec spec;
    Module module = Module::trivial;
    int degree_min = 0;
    int degree_max = 0;
    int grade_min = 0;
    int grade_max = 0;
    std::vector<CellRecord> cells; // degree-major, then grade

    const CellRecord& cell(int k, int g) const
    {
        for (const auto& c : cells) {
            if (c.degree == k && c.grade == g) {
                return c;
            }
        }
        throw std::out_of_range("cell (" + std::to_string(k) + ", " + std::to_string(g) + ") not in report");
    }

    std::size_t dim(int k, int g) const { return cell(k, g).dim_H; }

    bool any_capped() const
    {
        return std::any_of(cells.begin(), cells.end(), [](const CellRecord& c) { return c.capped; });
    }
};

inline nlohmann::json report_to_json(const CohomologyReport& report)
{
    const Algebra alg = report.spec.finite_dimensional()
                            ? Algebra::whole(report.spec)
                            : Algebra::for_cells(report.spec, report.degree_max + 1, report.grade_max);
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : report.cells) {
        cells.push_back(cell_to_json(alg, c));
    }
    return nlohmann::json{{"spec", to_string(report.spec)},
                          {"module", to_string(report.module)},
                          {"convention", {{"weight_shift", -2}, {"derivative_side", "left"}}},
                          {"cells", std::move(cells)}};
}

/// Degree rows, grade columns; blank for 0, "?" for capped cells.
inline std::string render_table(const CohomologyReport& report)
{
    std::vector<std::string> header{"n\\g"};
    for (int g = report.grade_min; g <= report.grade_max; ++g) {
        header.push_back(std::to_string(g));
    }
    std::vector<std::vector<std::string>> rows;
    for (int k = report.degree_min; k <= report.degree_max; ++k) {
        std::vector<std::string> row{std::to_string(k)};
        for (int g = report.grade_min; g <= report.grade_max; ++g) {
            const CellRecord& c = report.cell(k, g);
            row.push_back(c.capped ? "?" : (c.dim_H == 0 ? "" : std::to_string(c.dim_H)));
        }
        rows.push_back(std::move(row));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t i = 0; i < header.size(); ++i) {
        width[i] = header[i].size();
        for (const auto& r : rows) {
            width[i] = std::max(width[i], r[i].size());
        }
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string out = "|";
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out += " " + cells[i] + std::string(width[i] - cells[i].size(), ' ') + " |";
        }
        return out + "\n";
    };
    std::string out = "H^n_g(" + to_string(report.spec) + "), " + to_string(report.module) + " coefficients\n";
    out += line(header);
    std::string rule = "|";
    for (auto w : width) {
        rule += std::string(w + 2, '-') + "|";
    }
    out += rule + "\n";
    for (const auto& r : rows) {
        out += line(r);
    }
    return out;
}

struct TableOptions {
    std::size_t max_cell = default_max_cell;
    unsigned jobs = 1;
    bool representatives = true;
    const CellCache* cache = nullptr;
    std::optional<std::filesystem::path> dump_dir;
};

/// Computes every cell of [degree_min, degree_max] x [grade_min, grade_max].
/// Cells are independent and handed out to `jobs` workers; cells over the
/// size cap are flagged rather than aborting the whole table.
inline CohomologyReport compute_table(const AlgebraSpec& spec, Module module, int degree_min, int degree_max, int grade_min,
                                      int grade_max, const TableOptions& options = {})
{
    if (degree_min > degree_max || grade_min > grade_max || degree_min < 0) {
        throw PreconditionError("empty or negative degree/grade range");
    }
    const Algebra alg = spec.finite_dimensional() ? Algebra::whole(spec)
                                                  : Algebra::for_cells(spec, degree_max + 1, grade_max);
    CohomologyReport report;
    report.spec = spec;
    report.module = module;
    report.degree_min = degree_min;
    report.degree_max = degree_max;
    report.grade_min = grade_min;
    report.grade_max = grade_max;

    std::vector<std::pair<int, int>> tasks;
    for (int k = degree_min; k <= degree_max; ++k) {
        for (int g = grade_min; g <= grade_max; ++g) {
            tasks.emplace_back(k, g);
        }
    }
    report.cells.resize(tasks.size());

    CellOptions cell_options;
    cell_options.max_cell = options.max_cell;
    cell_options.representatives = options.representatives;
    cell_options.dump_dir = options.dump_dir;

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) {
                return;
            }
            const auto [k, g] = tasks[i];
            try {
                const std::string key = cache_key(spec, module, k, g);
                if (options.cache && options.representatives) {
                    if (auto hit = options.cache->load(key)) {
                        report.cells[i] = cell_from_json(alg, *hit);
                        continue;
                    }
                }
                try {
                    report.cells[i] = compute_cell(alg, module, k, g, cell_options);
                    if (options.cache && options.representatives) {
                        options.cache->store(key, cell_to_json(alg, report.cells[i]));
                    }
                } catch (const ResourceCapError& e) {
                    CellRecord capped;
                    capped.degree = k;
                    capped.grade = g;
                    capped.capped = true;
                    capped.message = e.what();
                    report.cells[i] = std::move(capped);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(tasks.size());
                return;
            }
        }
    };
    const unsigned jobs = std::max(1U, std::min<unsigned>(options.jobs, static_cast<unsigned>(tasks.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return report;
}

inline bool verify_cocycle(const Algebra& alg, const Cochain& c, std::size_t cap = default_max_cell)
{
    return differential(alg, c, cap).is_zero();
}

/// A (k-1)-cochain w with d w = c, or nullopt when c is not a coboundary.
inline std::optional<Cochain> is_coboundary(const Algebra& alg, const Cochain& c, std::size_t cap = default_max_cell)
{
    if (!verify_cocycle(alg, c, cap)) {
        throw PreconditionError("is_coboundary: input is not a cocycle");
    }
    if (c.degree() == 0) {
        if (c.is_zero()) {
            return Cochain(-1, c.weight(), c.module());
        }
        return std::nullopt;
    }
    const CellBasis cell = enumerate_cell_basis(alg, c.degree(), c.weight(), c.module(), cap);
    const CellBasis below = enumerate_cell_basis(alg, c.degree() - 1, c.weight(), c.module(), cap);
    const SparseMatrix b = differential_matrix(alg, below, cell);
    auto t = solve(b, coordinates(cell, c));
    if (!t) {
        return std::nullopt;
    }
    return from_coordinates(below, *t);
}

/// Exterior product of trivial-coefficient cochains:
///   (c1 . c2)(x_1..x_n) = sum_S s(S) c1(x_S) c2(x_{not S})
/// over position subsets S of size k1, where s(S) is the sign of moving
/// x_S to the front. Satisfies d(c1.c2) = dc1.c2 + (-1)^{k1} c1.dc2 and
/// c1.c2 = (-1)^{k1 k2 + p1 p2} c2.c1.
inline Cochain cup_product(const Algebra& alg, const Cochain& c1, const Cochain& c2)
{
    if (c1.module() != Module::trivial || c2.module() != Module::trivial) {
        throw PreconditionError("cup_product needs trivial coefficients");
    }
    Cochain out(c1.degree() + c2.degree(), c1.weight() + c2.weight(), Module::trivial);
    ArgTuple merged;
    std::map<int, int> mult_merged;
    std::map<int, int> mult_left;
    for (const auto& [k1, a] : c1.terms()) {
        for (const auto& [k2, b] : c2.terms()) {
            const ArgTuple& t1 = k1.args;
            const ArgTuple& t2 = k2.args;
            merged.clear();
            int sign = 1;
            int passed_even = 0;
            int passed_total = 0;
            std::size_t i = 0;
            std::size_t j = 0;
            bool vanishes = false;
            while (i < t1.size() || j < t2.size()) {
                const bool take_left = j == t2.size() || (i < t1.size() && !canonical_before(alg, t2[j], t1[i]));
                if (take_left) {
                    const int x = t1[i++];
                    if (alg.odd(x)) {
                        sign *= (passed_even & 1) ? -1 : 1;
                    } else {
                        sign *= (passed_total & 1) ? -1 : 1;
                    }
                    merged.push_back(x);
                } else {
                    const int y = t2[j++];
                    if (!alg.odd(y)) {
                        ++passed_even;
                    }
                    ++passed_total;
                    merged.push_back(y);
                }
                const auto n = merged.size();
                if (n > 1 && merged[n - 1] == merged[n - 2] && !alg.odd(merged[n - 1])) {
                    vanishes = true;
                    break;
                }
            }
            if (vanishes) {
                continue;
            }
            // Each choice of which copies of a repeated odd argument go to
            // c1 contributes the same sign.
            mult_merged.clear();
            mult_left.clear();
            for (int x : merged) {
                if (alg.odd(x)) {
                    ++mult_merged[x];
                }
            }
            for (int x : t1) {
                if (alg.odd(x)) {
                    ++mult_left[x];
                }
            }
            mpz_class ways = 1;
            for (const auto& [x, r] : mult_left) {
                mpz_class binom;
                mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(mult_merged[x]), static_cast<unsigned long>(r));
                ways *= binom;
            }
            Rational coeff = a * b * Rational(ways);
            if (sign < 0) {
                coeff = -coeff;
            }
            out.add(CellKey{merged, -1}, coeff);
        }
    }
    return out;
}

struct ClassComparison {
    bool equal = false;
    std::optional<Rational> lambda; // c1 ~ lambda * c2
    bool first_is_coboundary = false;
    bool second_is_coboundary = false;
};

/// Whether c1 - lambda c2 is a coboundary for some nonzero lambda (or both
/// are coboundaries). Both inputs must be cocycles of one cell.
inline ClassComparison equal_mod_coboundaries(const Algebra& alg, const Cochain& c1, const Cochain& c2,
                                              std::size_t cap = default_max_cell)
{
    if (c1.degree() != c2.degree() || c1.weight() != c2.weight() || c1.module() != c2.module()) {
        throw PreconditionError("equal_mod_coboundaries: cochains live in different cells");
    }
    if (!verify_cocycle(alg, c1, cap) || !verify_cocycle(alg, c2, cap)) {
        throw PreconditionError("equal_mod_coboundaries: inputs must be cocycles");
    }
    const CellBasis cell = enumerate_cell_basis(alg, c1.degree(), c1.weight(), c1.module(), cap);
    const SparseMatrix b = detail::coboundary_matrix(alg, cell, cap);
    const EchelonForm span = row_reduce(b.transpose());
    const SparseVector r1 = reduce_modulo(span, coordinates(cell, c1));
    const SparseVector r2 = reduce_modulo(span, coordinates(cell, c2));

    ClassComparison out;
    out.first_is_coboundary = r1.empty();
    out.second_is_coboundary = r2.empty();
    if (r1.empty() || r2.empty()) {
        out.equal = r1.empty() && r2.empty();
        return out;
    }
    if (r1.front().col != r2.front().col || r1.size() != r2.size()) {
        return out;
    }
    const Rational lambda = r1.front().value / r2.front().value;
    for (std::size_t i = 0; i < r1.size(); ++i) {
        if (r1[i].col != r2[i].col || r1[i].value != lambda * r2[i].value) {
            return out;
        }
    }
    out.equal = true;
    out.lambda = lambda;
    return out;
}

/// Product of generators with the given exponents, in generator order.
struct ProbeMonomial {
    std::vector<int> exponents;
    int degree = 0;
    int grade = 0;
};

struct ProbeRelation {
    std::size_t monomial;                                  // index into RingProbeResult::monomials
    std::vector<std::pair<std::size_t, Rational>> combination; // monomial ~ sum coeff * earlier monomial
};

struct ProbeCell {
    int degree = 0;
    int grade = 0;
    std::size_t dim_H = 0;
    std::size_t generated_rank = 0;
    std::vector<std::size_t> monomials; // indices of monomials landing here
    bool capped = false;

    bool uncovered() const { return generated_rank < dim_H; }
};

struct RingProbeResult {
    std::vector<std::string> generator_names;
    std::vector<ProbeMonomial> monomials;
    std::vector<ProbeCell> cells;
    std::vector<ProbeRelation> relations;

    std::string monomial_name(std::size_t i) const
    {
        std::string out;
        const auto& e = monomials[i].exponents;
        for (std::size_t g = 0; g < e.size(); ++g) {
            if (e[g] == 0) {
                continue;
            }
            out += generator_names[g];
            if (e[g] > 1) {
                out += "^" + std::to_string(e[g]);
            }
        }
        return out.empty() ? "1" : out;
    }

    const ProbeCell* find_cell(int k, int g) const
    {
        for (const auto& c : cells) {
            if (c.degree == k && c.grade == g) {
                return &c;
            }
        }
        return nullptr;
    }

    std::vector<const ProbeCell*> uncovered_cells() const
    {
        std::vector<const ProbeCell*> out;
        for (const auto& c : cells) {
            if (c.uncovered()) {
                out.push_back(&c);
            }
        }
        return out;
    }
};

/// Multiplies out monomials in the generators up to `degree_cap`, then
/// compares, cell by cell over degrees 1..degree_cap and the grade window,
/// the span of the products modulo coboundaries with the cohomology.
/// Cells where H is larger than the span point at missing generators; a
/// product dependent on earlier ones (modulo coboundaries) is reported as
/// a relation. Every product is checked to be a cocycle first.
inline RingProbeResult ring_probe(const Algebra& alg, const std::vector<std::pair<std::string, Cochain>>& generators,
                                  int degree_cap, int grade_min, int grade_max, std::size_t cap = default_max_cell)
{
    RingProbeResult result;
    for (const auto& [name, c] : generators) {
        if (c.degree() < 1) {
            throw PreconditionError("ring_probe: generators must have degree >= 1");
        }
        if (!verify_cocycle(alg, c, cap)) {
            throw PreconditionError("ring_probe: generator " + name + " is not a cocycle");
        }
        result.generator_names.push_back(name);
    }

    // Products, built depth-first from prefix products.
    std::vector<Cochain> products;
    std::vector<int> exps(generators.size(), 0);
    auto rec = [&](auto&& self, std::size_t gen, const Cochain& prefix) -> void {
        if (gen == generators.size()) {
            if (prefix.degree() >= 1 && prefix.weight() >= grade_min && prefix.weight() <= grade_max) {
                result.monomials.push_back(ProbeMonomial{exps, prefix.degree(), prefix.weight()});
                products.push_back(prefix);
            }
            return;
        }
        Cochain current = prefix;
        const auto& g = generators[gen].second;
        for (int e = 0;; ++e) {
            exps[gen] = e;
            self(self, gen + 1, current);
            if (current.degree() + g.degree() > degree_cap) {
                break;
            }
            current = cup_product(alg, current, g);
        }
        exps[gen] = 0;
    };
    Cochain unit(0, 0, Module::trivial);
    unit.add(CellKey{{}, -1}, 1);
    rec(rec, 0, unit);

    for (std::size_t i = 0; i < products.size(); ++i) {
        if (!verify_cocycle(alg, products[i], cap)) {
            throw ConsistencyError("ring_probe: product " + result.monomial_name(i) + " is not a cocycle");
        }
    }

    for (int k = 1; k <= degree_cap; ++k) {
        for (int g = grade_min; g <= grade_max; ++g) {
            ProbeCell pc;
            pc.degree = k;
            pc.grade = g;
            for (std::size_t i = 0; i < products.size(); ++i) {
                if (result.monomials[i].degree == k && result.monomials[i].grade == g) {
                    pc.monomials.push_back(i);
                }
            }
            try {
                const CellRecord rec_cell = compute_cell(alg, Module::trivial, k, g, CellOptions{cap, false, {}});
                pc.dim_H = rec_cell.dim_H;
                if (!pc.monomials.empty()) {
                    const CellBasis cell = enumerate_cell_basis(alg, k, g, Module::trivial, cap);
                    const SparseMatrix b = detail::coboundary_matrix(alg, cell, cap);
                    const EchelonForm span = row_reduce(b.transpose());
                    std::vector<SparseVector> reduced;
                    std::vector<std::size_t> independent;
                    for (std::size_t idx : pc.monomials) {
                        SparseVector r = reduce_modulo(span, coordinates(cell, products[idx]));
                        // Is r in the span of the earlier independent products?
                        SparseMatrix m(cell.size(), independent.size());
                        std::vector<std::vector<Entry>> cols(cell.size());
                        for (std::size_t c = 0; c < independent.size(); ++c) {
                            for (const auto& e : reduced[c]) {
                                cols[e.col].push_back(Entry{static_cast<Index>(c), e.value});
                            }
                        }
                        for (std::size_t row = 0; row < cell.size(); ++row) {
                            m.set_row(row, std::move(cols[row]));
                        }
                        auto lambda = solve(m, r);
                        if (lambda) {
                            ProbeRelation rel{idx, {}};
                            for (const auto& e : *lambda) {
                                rel.combination.emplace_back(independent[e.col], e.value);
                            }
                            result.relations.push_back(std::move(rel));
                        } else {
                            reduced.push_back(std::move(r));
                            independent.push_back(idx);
                        }
                    }
                    pc.generated_rank = independent.size();
                }
            } catch (const ResourceCapError&) {
                pc.capped = true;
            }
            result.cells.push_back(std::move(pc));
        }
    }
    return result;
}

struct VanishingReport {
    struct Cell {
        int degree;
        int grade;
        std::size_t dim_H;
    };
    std::vector<Cell> cells;
    bool passed = true;
};

/// With a grading element present all cohomology sits in grade 0; computes
/// the off-grade cells and flags any nonzero one.
inline VanishingReport grading_element_vanishing_check(const AlgebraSpec& spec, int degree_max,
                                                       const std::vector<int>& grades,
                                                       std::size_t cap = default_max_cell)
{
    if (!spec.has_grading_element()) {
        throw PreconditionError(to_string(spec) + " has no grading element");
    }
    int gmax = 0;
    for (int g : grades) {
        gmax = std::max(gmax, g);
    }
    const Algebra alg =
        spec.finite_dimensional() ? Algebra::whole(spec) : Algebra::for_cells(spec, degree_max + 1, gmax);
    VanishingReport report;
    for (int k = 0; k <= degree_max; ++k) {
        for (int g : grades) {
            if (g == 0) {
                continue;
            }
            const CellRecord rec = compute_cell(alg, Module::trivial, k, g, CellOptions{cap, false, {}});
            report.cells.push_back({k, g, rec.dim_H});
            if (rec.dim_H != 0) {
                report.passed = false;
            }
        }
    }
    return report;
}

} // namespace supercoh
