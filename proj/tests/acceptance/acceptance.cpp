// Runs the acceptance criteria end to end and prints one PASS/FAIL line
// per criterion. Exits nonzero if any criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <utility>
#include <vector>

#include <json.hpp>

#include <supercoh/supercoh.hpp>

#include "oracle/dense_reference.hpp"
#include "support/fixture_match.hpp"

using namespace supercoh;

namespace {

using Cell = std::pair<int, int>;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool passed = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            passed = false;
            notes.push_back("FAILED " + what);
        }
    }
    void note(std::string s) { notes.push_back(std::move(s)); }
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string cell_name(int k, int g)
{
    return "(" + std::to_string(k) + "," + std::to_string(g) + ")";
}

const std::vector<fixtures::Fixture>& all_fixtures()
{
    static const auto f = fixtures::load_fixtures(SUPERCOH_FIXTURE_FILE);
    return f;
}

Cochain single_rep(const Algebra& alg, int k, int g, Outcome& out)
{
    const auto rec = compute_cell(alg, Module::trivial, k, g);
    out.require(rec.dim_H == 1, "dim H" + cell_name(k, g) + " = " + std::to_string(rec.dim_H) + ", expected 1");
    return rec.representatives.empty() ? Cochain(k, g, Module::trivial) : rec.representatives[0];
}

/// Compares a computed window with the expected map; cells absent from the
/// map must be zero.
void compare_window(const CohomologyReport& r, const std::map<Cell, std::size_t>& expected,
                    const std::function<bool(int, int)>& in_window, Outcome& out, const std::string& label)
{
    std::size_t checked = 0;
    for (const auto& c : r.cells) {
        if (!in_window(c.degree, c.grade)) {
            continue;
        }
        ++checked;
        const auto it = expected.find({c.degree, c.grade});
        const std::size_t want = it == expected.end() ? 0 : it->second;
        out.require(!c.capped, label + " cell " + cell_name(c.degree, c.grade) + " capped");
        out.require(c.dim_H == want, label + " dim H" + cell_name(c.degree, c.grade) + " = " +
                                         std::to_string(c.dim_H) + ", expected " + std::to_string(want));
    }
    out.note(label + ": " + std::to_string(checked) + " cells compared");
}

std::pair<int, std::string> run_cli(const std::string& args)
{
    const std::string cmd = std::string(SUPERCOH_CLI) + " " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return {-1, ""};
    }
    std::string text;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) {
        text += buf.data();
    }
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text};
}

const std::map<Cell, std::size_t> sh04_table{
    {{2, -2}, 1}, {{2, 0}, 1},  {{2, 2}, 1},  {{3, 0}, 1},  {{4, -4}, 1}, {{4, -2}, 1}, {{4, 0}, 1},
    {{4, 2}, 1},  {{4, 4}, 1},  {{5, -2}, 1}, {{5, 0}, 1},  {{5, 2}, 1},  {{6, -6}, 1}, {{6, -4}, 1},
    {{6, -2}, 1}, {{6, 0}, 1},  {{6, 2}, 1},  {{6, 4}, 1},  {{6, 6}, 1},
};

Outcome table_one()
{
    Outcome out;
    const auto t0 = Clock::now();
    const auto [code, text] =
        run_cli("table --algebra 'SH(0|4)' --degrees 1..6 --grades -6..6 --module trivial --format json --no-cache");
    const double elapsed = seconds_since(t0);
    out.require(code == 0, "CLI exit code " + std::to_string(code));
    if (code != 0) {
        return out;
    }
    const auto j = nlohmann::json::parse(text);
    std::size_t nonzero = 0;
    std::size_t cells = 0;
    for (const auto& c : j.at("cells")) {
        ++cells;
        const Cell key{c.at("degree").get<int>(), c.at("grade").get<int>()};
        const std::size_t dim = c.at("dim_H").get<std::size_t>();
        const std::size_t want = sh04_table.count(key) ? 1 : 0;
        nonzero += dim > 0 ? 1 : 0;
        out.require(dim == want, "dim H" + cell_name(key.first, key.second) + " = " + std::to_string(dim));
    }
    out.require(cells == 6 * 13, "grid has " + std::to_string(cells) + " cells");
    out.require(nonzero == 19, std::to_string(nonzero) + " nonzero cells");
    out.require(elapsed < 60.0, "runtime " + std::to_string(elapsed) + " s >= 60 s");
    std::ostringstream os;
    os << nonzero << " nonzero cells of " << cells << ", " << elapsed << " s";
    out.note(os.str());
    return out;
}

Outcome generator_fixtures()
{
    Outcome out;
    const Algebra alg = Algebra::whole(parse_algebra_spec("SH(0|4)"));
    for (const auto& [name, k, g] : std::vector<std::tuple<std::string, int, int>>{
             {"a", 2, -2}, {"b", 2, 0}, {"c", 2, 2}, {"f", 3, 0}}) {
        const Cochain rep = single_rep(alg, k, g, out);
        const auto& fx = fixtures::find_fixture(all_fixtures(), "SH(0|4)", name);
        const auto m = fixtures::match_fixture(alg, fx, rep);
        out.require(m.matched, name + " not cohomologous to the computed class");
        if (m.matched) {
            out.note(name + ": matched reading '" + m.reading + "', lambda = " + to_string(m.lambda));
        }
    }
    return out;
}

Outcome ring_relations()
{
    Outcome out;
    const Algebra alg = Algebra::whole(parse_algebra_spec("SH(0|4)"));
    const Cochain a = single_rep(alg, 2, -2, out);
    const Cochain b = single_rep(alg, 2, 0, out);
    const Cochain c = single_rep(alg, 2, 2, out);
    const Cochain f = single_rep(alg, 3, 0, out);
    const Cochain ac = cup_product(alg, a, c);
    const Cochain bb = cup_product(alg, b, b);
    const auto cmp = equal_mod_coboundaries(alg, ac, bb);
    out.require(!cmp.first_is_coboundary && !cmp.second_is_coboundary, "ac or b^2 is a coboundary");
    out.require(cmp.equal && cmp.lambda && *cmp.lambda != 0, "ac not proportional to b^2");
    if (cmp.lambda) {
        out.note("ac ~ " + to_string(*cmp.lambda) + " b^2");
    }
    const Cochain ff = cup_product(alg, f, f);
    out.require(verify_cocycle(alg, ff), "f^2 not a cocycle");
    out.require(is_coboundary(alg, ff).has_value(), "f^2 not a coboundary");
    out.note(std::string("f^2 ") + (ff.is_zero() ? "vanishes identically" : "is a nonzero coboundary"));
    return out;
}

Outcome sh03_ring()
{
    Outcome out;
    const Algebra alg = Algebra::whole(parse_algebra_spec("SH(0|3)"));
    const Cochain a = single_rep(alg, 2, -2, out);
    const Cochain f = single_rep(alg, 3, 0, out);
    for (const auto& [name, rep] : std::vector<std::pair<std::string, const Cochain*>>{{"a", &a}, {"f", &f}}) {
        const auto m = fixtures::match_fixture(alg, fixtures::find_fixture(all_fixtures(), "SH(0|3)", name), *rep);
        out.require(m.matched, name + " fixture mismatch");
    }
    const auto probe = ring_probe(alg, {{"a", a}, {"f", f}}, 8, -8, 8);
    std::set<Cell> expected;
    for (int i = 1; 2 * i <= 8; ++i) {
        expected.insert({2 * i, -2 * i});
    }
    for (int i = 0; 2 * i + 3 <= 8; ++i) {
        expected.insert({2 * i + 3, -2 * i});
    }
    std::set<Cell> nonzero;
    for (const auto& c : probe.cells) {
        out.require(!c.capped, "cell " + cell_name(c.degree, c.grade) + " capped");
        if (c.dim_H > 0) {
            nonzero.insert({c.degree, c.grade});
            out.require(c.dim_H == 1, "dim H" + cell_name(c.degree, c.grade) + " = " + std::to_string(c.dim_H));
        }
    }
    out.require(nonzero == expected, "nonzero cells differ from {a^i, a^i f}");
    out.require(probe.uncovered_cells().empty(), "some class is not a product of a and f");
    bool f_squared = false;
    for (const auto& rel : probe.relations) {
        if (probe.monomial_name(rel.monomial) == "f^2" && rel.combination.empty()) {
            f_squared = true;
        }
    }
    out.require(f_squared, "f^2 ~ 0 not found");
    out.note(std::to_string(nonzero.size()) + " nonzero cells, all spanned by products of a and f; f^2 ~ 0");
    return out;
}

Outcome tables_two_three()
{
    Outcome out;
    const auto t0 = Clock::now();
    const std::map<Cell, std::size_t> h04{
        {{1, 2}, 1},  {{2, -2}, 1}, {{3, 0}, 1}, {{3, 4}, 1}, {{4, -4}, 1},
        {{4, 2}, 1},  {{5, -2}, 1}, {{5, 6}, 1}, {{6, -6}, 1}, {{6, 4}, 1},
    };
    const std::map<Cell, std::size_t> po04{
        {{1, 2}, 1}, {{2, 0}, 1}, {{3, 0}, 1}, {{3, 4}, 1}, {{4, 2}, 2}, {{5, 0}, 1}, {{5, 6}, 1}, {{6, 4}, 2},
    };
    TableOptions opt;
    opt.representatives = false;
    const auto rh = compute_table(parse_algebra_spec("H(0|4)"), Module::trivial, 1, 6, -6, 6, opt);
    const auto rp = compute_table(parse_algebra_spec("Po(0|4)"), Module::trivial, 1, 6, 0, 6, opt);
    auto even = [](int, int g) { return g % 2 == 0; };
    auto odd = [](int, int g) { return g % 2 != 0; };
    compare_window(rh, h04, even, out, "H(0|4) displayed");
    compare_window(rh, {}, odd, out, "H(0|4) omitted columns");
    compare_window(rp, po04, even, out, "Po(0|4) displayed");
    compare_window(rp, {}, odd, out, "Po(0|4) omitted columns");
    out.note("runtime " + std::to_string(seconds_since(t0)) + " s");
    return out;
}

Outcome table_four()
{
    Outcome out;
    const auto t0 = Clock::now();
    const std::map<Cell, std::size_t> h20{{{2, -2}, 1}, {{5, -2}, 1}, {{7, 0}, 1}};
    const std::map<Cell, std::size_t> p20{{{3, -4}, 1}, {{5, -2}, 1}, {{6, -4}, 1}, {{7, 0}, 1}, {{8, -2}, 1}};
    TableOptions opt;
    opt.representatives = false;
    auto window = [](int k, int g) { return k >= 2 && k <= 8 && (g == -4 || g == -2 || g == 0); };
    compare_window(compute_table(parse_algebra_spec("H(2|0)"), Module::trivial, 2, 8, -4, 0, opt), h20, window, out,
                   "H(2|0)");
    compare_window(compute_table(parse_algebra_spec("Po(2|0)"), Module::trivial, 2, 8, -4, 0, opt), p20, window, out,
                   "Po(2|0)");
    out.note("runtime " + std::to_string(seconds_since(t0)) + " s");
    return out;
}

std::vector<std::size_t> grade_zero_dims(const char* spec, int kmax)
{
    TableOptions opt;
    opt.representatives = false;
    const auto r = compute_table(parse_algebra_spec(spec), Module::trivial, 0, kmax, 0, 0, opt);
    std::vector<std::size_t> dims;
    for (const auto& c : r.cells) {
        dims.push_back(c.dim_H);
    }
    return dims;
}

std::string join(const std::vector<std::size_t>& v)
{
    std::string s;
    for (const auto x : v) {
        s += (s.empty() ? "" : ",") + std::to_string(x);
    }
    return "(" + s + ")";
}

Outcome hat_algebras()
{
    Outcome out;
    const std::vector<std::size_t> grassmann{1, 1, 0, 0, 0, 0, 0, 1, 1};
    const auto hh = grade_zero_dims("HHat(2|0)", 8);
    out.require(hh == grassmann, "HHat(2|0) grade-0 dims " + join(hh));
    out.note("HHat(2|0) grade 0: " + join(hh));

    const auto spec = parse_algebra_spec("HHat(2|0)");
    const Algebra alg = Algebra::for_cells(spec, 8, 0);
    const Cochain a7 = single_rep(alg, 7, 0, out);
    const auto m = fixtures::match_fixture(alg, fixtures::find_fixture(all_fixtures(), "HHat(2|0)", "a7"), a7);
    out.require(m.matched, "a7 fixture mismatch");
    if (m.matched) {
        out.note("a7: matched reading '" + m.reading + "', lambda = " + to_string(m.lambda));
    }

    for (const char* name : {"HHat(2|0)", "PoHat(2|0)"}) {
        const auto v = check_grading_vanishing(parse_algebra_spec(name), 4, 3);
        out.require(v.passed, v.name + ": " + v.detail);
        out.note(v.name + ": " + std::to_string(v.checked) + " off-grade cells vanish");
    }

    const auto ph = grade_zero_dims("PoHat(2|0)", 8);
    out.require(ph.size() == 9 && ph[0] == 1 && ph[1] == 1 && ph[2] == 0 && ph[7] == 1 && ph[8] == 1,
                "PoHat(2|0) grade-0 dims " + join(ph));
    out.note("PoHat(2|0) grade 0: " + join(ph));
    return out;
}

Outcome property_suites()
{
    Outcome out;
    const auto t0 = Clock::now();
    std::size_t count = 0;
    for (const auto& r : standard_checks({})) {
        ++count;
        out.require(r.passed, r.name + ": " + r.detail);
    }
    out.note(std::to_string(count) + " checks, runtime " + std::to_string(seconds_since(t0)) + " s");
    return out;
}

Outcome oracle_equivalence()
{
    Outcome out;
    for (const int m : {3, 4}) {
        const std::string name = "SH(0|" + std::to_string(m) + ")";
        const Algebra alg = Algebra::whole(parse_algebra_spec(name));
        const oracle::DenseReference ref(m);
        std::size_t cells = 0;
        for (int k = 0; k <= 5; ++k) {
            for (int g = -k - 1; g <= (m - 3) * k + 1; ++g) {
                const auto rec = compute_cell(alg, Module::trivial, k, g, {default_max_cell, false, {}});
                const std::size_t dense = ref.dim_H(k, g);
                ++cells;
                out.require(rec.dim_H == dense, name + " H" + cell_name(k, g) + ": sparse " +
                                                    std::to_string(rec.dim_H) + ", dense " + std::to_string(dense));
                out.require(rec.dim_C == ref.dim_cell(k, g), name + " C" + cell_name(k, g) + " size differs");
            }
        }
        out.note(name + ": " + std::to_string(cells) + " cells agree");
    }
    return out;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 SH(0|4) table", table_one},
        {"2 SH(0|4) generator fixtures", generator_fixtures},
        {"3 SH(0|4) ring relations", ring_relations},
        {"4 SH(0|3) generators", sh03_ring},
        {"5 H(0|4) and Po(0|4) tables", tables_two_three},
        {"6 H(2|0) and Po(2|0) table", table_four},
        {"7 hat algebras", hat_algebras},
        {"8 property suites", property_suites},
        {"9 dense oracle equivalence", oracle_equivalence},
    };
    int failed = 0;
    for (const auto& [label, run] : criteria) {
        Outcome o;
        const auto t0 = Clock::now();
        try {
            o = run();
        } catch (const std::exception& e) {
            o.passed = false;
            o.note(std::string("exception: ") + e.what());
        }
        std::cout << (o.passed ? "PASS " : "FAIL ") << label << " [" << seconds_since(t0) << " s]\n";
        for (const auto& n : o.notes) {
            std::cout << "    " << n << "\n";
        }
        std::cout.flush();
        failed += o.passed ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
