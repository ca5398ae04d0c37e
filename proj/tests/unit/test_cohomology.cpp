#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include <supercoh/supercoh.hpp>

#include "oracle/dense_reference.hpp"
#include "support/fixture_match.hpp"

using namespace supercoh;

namespace {

const Algebra& sh4()
{
    static const Algebra alg = Algebra::whole(parse_algebra_spec("SH(0|4)"));
    return alg;
}

Cochain rep(const Algebra& alg, int k, int g)
{
    const auto rec = compute_cell(alg, Module::trivial, k, g);
    if (rec.representatives.size() != 1) {
        throw std::runtime_error("expected a one-dimensional cell");
    }
    return rec.representatives[0];
}

Cochain unit()
{
    Cochain one(0, 0, Module::trivial);
    one.add(CellKey{{}, -1}, 1);
    return one;
}

} // namespace

TEST(ComputeCell, RecordsAreConsistent)
{
    const auto rec = compute_cell(sh4(), Module::trivial, 3, 0);
    EXPECT_EQ(rec.dim_H, 1U);
    EXPECT_EQ(rec.dim_C - rec.rank_Z - rec.rank_b, rec.dim_H);
    ASSERT_EQ(rec.representatives.size(), 1U);
    const auto& r = rec.representatives[0];
    EXPECT_EQ(r.terms().begin()->second, 1) << "first coordinate normalized";
    EXPECT_TRUE(verify_cocycle(sh4(), r));
    EXPECT_FALSE(is_coboundary(sh4(), r).has_value());
}

TEST(ComputeCell, FirstRowOfSH04IsEmpty)
{
    for (int g = -6; g <= 6; ++g) {
        EXPECT_EQ(compute_cell(sh4(), Module::trivial, 1, g).dim_H, 0U) << g;
    }
}

TEST(ComputeCell, NegativeDegreeRejected)
{
    EXPECT_THROW(compute_cell(sh4(), Module::trivial, -1, 0), PreconditionError);
}

TEST(ComputeCell, CapIsReported)
{
    CellOptions opt;
    opt.max_cell = 50;
    EXPECT_THROW(compute_cell(sh4(), Module::trivial, 4, 0, opt), ResourceCapError);
}

TEST(ComputeCell, DegreeZeroHasTheUnit)
{
    EXPECT_EQ(compute_cell(sh4(), Module::trivial, 0, 0).dim_H, 1U);
}

TEST(ComputeCell, AdjointCoefficients)
{
    // H^0 with adjoint coefficients is the center; SH(0|3) has none.
    const auto alg = Algebra::whole(parse_algebra_spec("SH(0|3)"));
    for (int g = -1; g <= 0; ++g) {
        EXPECT_EQ(compute_cell(alg, Module::adjoint, 0, g).dim_H, 0U);
    }
    // The constants of Po(0|3) are central; a 0-cochain valued in them sits
    // at grade 2.
    const auto po = Algebra::whole(parse_algebra_spec("Po(0|3)"));
    EXPECT_EQ(compute_cell(po, Module::adjoint, 0, 2).dim_H, 1U);
}

TEST(ComputeTable, ThreadsAndCacheDoNotChangeTheReport)
{
    const auto spec = parse_algebra_spec("SH(0|4)");
    const auto serial = report_to_json(compute_table(spec, Module::trivial, 1, 4, -4, 4));
    TableOptions opt;
    opt.jobs = 4;
    EXPECT_EQ(report_to_json(compute_table(spec, Module::trivial, 1, 4, -4, 4, opt)).dump(), serial.dump());

    const auto dir = std::filesystem::temp_directory_path() / ("supercoh-cache-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    DiskCache cache(dir);
    opt.cache = &cache;
    const auto first = report_to_json(compute_table(spec, Module::trivial, 1, 4, -4, 4, opt)).dump();
    EXPECT_FALSE(std::filesystem::is_empty(dir));
    const auto second = report_to_json(compute_table(spec, Module::trivial, 1, 4, -4, 4, opt)).dump();
    EXPECT_EQ(first, serial.dump());
    EXPECT_EQ(second, serial.dump());
    std::filesystem::remove_all(dir);
}

TEST(ComputeTable, CappedCellsAreFlagged)
{
    const auto& alg = sh4();
    std::size_t below = 0;
    for (int k = 2; k <= 4; ++k) {
        below = std::max(below, enumerate_cell_basis(alg, k, 0, Module::trivial).size());
    }
    ASSERT_GT(enumerate_cell_basis(alg, 5, 0, Module::trivial).size(), below);
    TableOptions opt;
    opt.max_cell = below;
    const auto r = compute_table(parse_algebra_spec("SH(0|4)"), Module::trivial, 3, 4, 0, 0, opt);
    EXPECT_FALSE(r.cell(3, 0).capped);
    EXPECT_TRUE(r.cell(4, 0).capped);
    EXPECT_TRUE(r.any_capped());
    EXPECT_NE(render_table(r).find('?'), std::string::npos);
    const auto j = report_to_json(r);
    EXPECT_EQ(j["cells"][1]["status"], "capped");
}

TEST(ComputeTable, JsonLayout)
{
    const auto j = report_to_json(compute_table(parse_algebra_spec("SH(0|3)"), Module::trivial, 2, 2, -2, -2));
    EXPECT_EQ(j["spec"], "SH(0|3)");
    EXPECT_EQ(j["module"], "trivial");
    EXPECT_EQ(j["convention"]["weight_shift"], -2);
    EXPECT_EQ(j["convention"]["derivative_side"], "left");
    const auto& c = j["cells"][0];
    EXPECT_EQ(c["degree"], 2);
    EXPECT_EQ(c["grade"], -2);
    EXPECT_EQ(c["dim_H"], 1);
    EXPECT_EQ(c["representatives"].size(), 1U);
    EXPECT_EQ(c["representatives"][0]["degree"], 2);
}

TEST(VerifyCocycle, SumOfSquaresAndRandomCochains)
{
    const auto& alg = sh4();
    Cochain a(2, -2, Module::trivial);
    for (int i = 1; i <= 4; ++i) {
        const int u = alg.parse_element("U_" + std::to_string(i));
        a.add(CellKey{{u, u}, -1}, 1);
    }
    EXPECT_TRUE(verify_cocycle(alg, a));
    std::mt19937_64 rng(17);
    int non_cocycles = 0;
    for (int t = 0; t < 20; ++t) {
        non_cocycles += verify_cocycle(alg, random_cochain(alg, 2, -2, rng)) ? 0 : 1;
    }
    EXPECT_GE(non_cocycles, 18);
    const Cochain w = random_cochain(alg, 2, 0, rng);
    EXPECT_TRUE(verify_cocycle(alg, differential(alg, w)));
}

TEST(IsCoboundary, WitnessAndAbsence)
{
    const auto& alg = sh4();
    std::mt19937_64 rng(18);
    const Cochain w = random_cochain(alg, 2, 0, rng);
    const Cochain c = differential(alg, w);
    const auto witness = is_coboundary(alg, c);
    ASSERT_TRUE(witness.has_value());
    EXPECT_EQ(differential(alg, *witness), c);
    EXPECT_FALSE(is_coboundary(alg, rep(alg, 2, -2)).has_value());
    const auto zero = is_coboundary(alg, Cochain(3, 0, Module::trivial));
    ASSERT_TRUE(zero.has_value());
    EXPECT_TRUE(zero->is_zero());
    EXPECT_THROW(is_coboundary(alg, random_cochain(alg, 2, -2, rng)), PreconditionError);
}

TEST(CupProduct, UnitAndRestrictions)
{
    const auto& alg = sh4();
    const Cochain c = rep(alg, 3, 0);
    EXPECT_EQ(cup_product(alg, unit(), c), c);
    EXPECT_EQ(cup_product(alg, c, unit()), c);
    const auto po = Algebra::whole(parse_algebra_spec("Po(0|3)"));
    Cochain adj(0, 0, Module::adjoint);
    EXPECT_THROW(cup_product(po, adj, adj), PreconditionError);
}

TEST(CupProduct, ASquaredRepresentsH4)
{
    const auto& alg = sh4();
    const Cochain a = rep(alg, 2, -2);
    const Cochain a2 = cup_product(alg, a, a);
    EXPECT_EQ(a2.degree(), 4);
    EXPECT_EQ(a2.weight(), -4);
    EXPECT_TRUE(verify_cocycle(alg, a2));
    EXPECT_TRUE(equal_mod_coboundaries(alg, a2, rep(alg, 4, -4)).equal);
}

TEST(CupProduct, ESquaredIsCoboundaryInPo04)
{
    const auto po = Algebra::whole(parse_algebra_spec("Po(0|4)"));
    Cochain e(1, 2, Module::trivial);
    e.add(CellKey{{po.parse_element("U_1 U_2 U_3 U_4")}, -1}, 1);
    ASSERT_TRUE(verify_cocycle(po, e));
    const Cochain e2 = cup_product(po, e, e);
    EXPECT_TRUE(verify_cocycle(po, e2));
    EXPECT_TRUE(is_coboundary(po, e2).has_value());
}

TEST(CupProduct, LeibnizOnRandomPairs)
{
    const auto r = check_leibniz(parse_algebra_spec("SH(0|4)"), 40, 123);
    EXPECT_TRUE(r.passed) << r.detail;
    const auto r3 = check_leibniz(parse_algebra_spec("Po(0|3)"), 40, 321);
    EXPECT_TRUE(r3.passed) << r3.detail;
}

TEST(CupProduct, SuperCommutativeAndAssociativeOnGenerators)
{
    const auto& alg = sh4();
    const std::vector<Cochain> gens{rep(alg, 2, -2), rep(alg, 2, 0), rep(alg, 2, 2), rep(alg, 3, 0)};
    for (const auto& x : gens) {
        for (const auto& y : gens) {
            const int k = x.degree() * y.degree();
            const int p = (x.weight() & 1) * (y.weight() & 1); // parity of SH(0|4) cochains is grade mod 2
            const Rational s = ((k + p) % 2 == 0) ? 1 : -1;
            const Cochain xy = cup_product(alg, x, y);
            const Cochain yx = cup_product(alg, y, x);
            EXPECT_EQ(xy, yx * s) << "cochain-level identity";
            for (const auto& z : gens) {
                if (x.degree() + y.degree() + z.degree() > 6) {
                    continue;
                }
                EXPECT_EQ(cup_product(alg, cup_product(alg, x, y), z), cup_product(alg, x, cup_product(alg, y, z)));
            }
        }
    }
}

TEST(EqualModCoboundaries, Basics)
{
    const auto& alg = sh4();
    const Cochain c = rep(alg, 2, 0);
    std::mt19937_64 rng(19);
    const Cochain shifted = c + differential(alg, random_cochain(alg, 1, 0, rng));
    const auto r = equal_mod_coboundaries(alg, c, shifted);
    EXPECT_TRUE(r.equal);
    ASSERT_TRUE(r.lambda.has_value());
    EXPECT_EQ(*r.lambda, 1);
    const auto r2 = equal_mod_coboundaries(alg, c * Rational(3), c);
    EXPECT_EQ(*r2.lambda, 3);
    EXPECT_THROW(equal_mod_coboundaries(alg, c, rep(alg, 2, -2)), PreconditionError);
}

TEST(EqualModCoboundaries, BothCoboundaries)
{
    const auto& alg = sh4();
    std::mt19937_64 rng(20);
    const Cochain x = differential(alg, random_cochain(alg, 1, 0, rng));
    const Cochain y = differential(alg, random_cochain(alg, 1, 0, rng));
    const auto r = equal_mod_coboundaries(alg, x, y);
    EXPECT_TRUE(r.equal);
    EXPECT_TRUE(r.first_is_coboundary && r.second_is_coboundary);
    EXPECT_FALSE(equal_mod_coboundaries(alg, x, rep(alg, 2, 0)).equal);
}

TEST(RingProbe, SH03GeneratedByAAndF)
{
    const auto alg = Algebra::whole(parse_algebra_spec("SH(0|3)"));
    const auto r = ring_probe(alg, {{"a", rep(alg, 2, -2)}, {"f", rep(alg, 3, 0)}}, 8, -8, 0);
    EXPECT_TRUE(r.uncovered_cells().empty());
    bool f_squared = false;
    for (const auto& rel : r.relations) {
        if (r.monomial_name(rel.monomial) == "f^2" && rel.combination.empty()) {
            f_squared = true;
        }
    }
    EXPECT_TRUE(f_squared);
}

TEST(RingProbe, EmptyGeneratorsLeaveEveryNonzeroCellUncovered)
{
    const auto alg = Algebra::whole(parse_algebra_spec("SH(0|3)"));
    const auto r = ring_probe(alg, {}, 4, -4, 0);
    std::size_t nonzero = 0;
    for (const auto& c : r.cells) {
        nonzero += c.dim_H > 0 ? 1 : 0;
    }
    EXPECT_EQ(r.uncovered_cells().size(), nonzero);
    EXPECT_EQ(nonzero, 3U);
}

TEST(RingProbe, RejectsNonCocycles)
{
    const auto& alg = sh4();
    std::mt19937_64 rng(21);
    EXPECT_THROW(ring_probe(alg, {{"x", random_cochain(alg, 2, -2, rng)}}, 4, -4, 4), PreconditionError);
}

TEST(GradingVanishing, HatAlgebras)
{
    EXPECT_TRUE(check_grading_vanishing(parse_algebra_spec("HHat(2|0)"), 4, 2).passed);
    EXPECT_TRUE(check_grading_vanishing(parse_algebra_spec("PoHat(2|0)"), 3, 1).passed);
    EXPECT_THROW(grading_element_vanishing_check(parse_algebra_spec("H(2|0)"), 2, {1}), PreconditionError);
}

TEST(Euler, TruncatedIdentityOnSmallAlgebras)
{
    for (const char* name : {"SH(0|3)", "H(0|3)", "Po(0|3)"}) {
        const auto r = check_euler(parse_algebra_spec(name), 5, -5, 5);
        EXPECT_TRUE(r.passed) << name << ": " << r.detail;
    }
}

TEST(DenseOracle, AgreesOnSH03)
{
    const oracle::DenseReference ref(3);
    const auto alg = Algebra::whole(parse_algebra_spec("SH(0|3)"));
    for (int k = 0; k <= 4; ++k) {
        for (int g = -k - 1; g <= 1; ++g) {
            EXPECT_EQ(ref.dim_H(k, g), compute_cell(alg, Module::trivial, k, g, {default_max_cell, false, {}}).dim_H)
                << k << "," << g;
        }
    }
}

TEST(Fixtures, EveryFixtureParsesAndIsHomogeneous)
{
    const auto all = fixtures::load_fixtures(SUPERCOH_FIXTURE_FILE);
    EXPECT_GE(all.size(), 9U);
    for (const auto& fx : all) {
        const auto spec = parse_algebra_spec(fx.algebra);
        const Algebra alg =
            spec.finite_dimensional() ? Algebra::whole(spec) : Algebra::for_cells(spec, fx.degree + 1, fx.grade);
        for (const auto& cand : fixtures::candidate_readings(alg, fx)) {
            EXPECT_NO_THROW(check_homogeneous(alg, cand.cochain)) << fx.name << " " << cand.reading;
        }
    }
}

TEST(Fixtures, MatcherRejectsWrongClass)
{
    const auto all = fixtures::load_fixtures(SUPERCOH_FIXTURE_FILE);
    const auto& fx = fixtures::find_fixture(all, "SH(0|4)", "a");
    const auto& alg = sh4();
    // c lives in another cell; compare a against 2a + coboundary instead,
    // then against a non-cohomologous cocycle of the same cell: none exists
    // at (2,-2), so use an exact coboundary which must be rejected.
    std::mt19937_64 rng(22);
    const Cochain boundary = differential(alg, random_cochain(alg, 1, -2, rng));
    if (!boundary.is_zero()) {
        EXPECT_FALSE(fixtures::match_fixture(alg, fx, boundary).matched);
    }
    EXPECT_TRUE(fixtures::match_fixture(alg, fx, rep(alg, 2, -2) * Rational(2)).matched);
}
