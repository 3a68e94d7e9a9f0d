#include "doctest.h"
#include "test_util.hpp"

#include "qlogic/builtin.hpp"
#include "qlogic/error.hpp"
#include "qlogic/vertex_gen.hpp"

#include <algorithm>
#include <set>

using namespace qlogic;

namespace {

Logic logic_of(const std::string& name) { return parse_logic(load_source("builtin:" + name, DataKind::logic)); }
TermTable terms_of(const std::string& name) { return parse_terms(load_source("builtin:" + name, DataKind::terms)); }
HRep golden(const std::string& name) {
    return std::get<HRep>(parse_dd(testutil::read_data("scenarios/" + name + ".ine")).body);
}

RatVec ints(std::initializer_list<int> v) {
    RatVec out;
    for (int x : v) out.emplace_back(x);
    return out;
}

TwoValuedState epr_state(const Logic& l, std::initializer_list<int> bits) {
    TwoValuedState s;
    s.values.assign(l.atoms.size(), 0);
    int i = 1;
    for (int b : bits) {
        std::string a = "a" + std::to_string(i++);
        s.values[l.index_of(a)] = static_cast<std::uint8_t>(b);
        s.values[l.index_of(a + "'")] = static_cast<std::uint8_t>(1 - b);
    }
    return s;
}

}  // namespace

TEST_CASE("parse_terms") {
    auto t = parse_terms("# c\nterm p1 prob a1\nterm E12 joint_expect a1 a2\n");
    REQUIRE(t.terms.size() == 2);
    CHECK(t.terms[1].kind == TermKind::joint_expect);
    CHECK(t.labels() == std::vector<std::string>{"p1", "E12"});
    CHECK_THROWS_AS(parse_terms("term p1 prob a1\nterm p1 prob a2\n"), FormatError);
    CHECK_THROWS_AS(parse_terms("term p1 prob a1 a2\n"), FormatError);
    CHECK_THROWS_AS(parse_terms("term p12 joint_prob a1 a1\n"), FormatError);
    CHECK_THROWS_AS(parse_terms("term p12 joint_prob a1\n"), FormatError);
    CHECK_THROWS_AS(parse_terms("term x magic a1\n"), FormatError);
    CHECK_THROWS_AS(parse_terms("trem p1 prob a1\n"), FormatError);
    for (const auto& name : builtin_names(DataKind::terms)) {
        CAPTURE(name);
        CHECK_NOTHROW(terms_of(name));
    }
}

TEST_CASE("gen_state_vertices examples") {
    Logic epr = logic_of("epr-2x2");
    SUBCASE("probabilities and joints of one state") {
        auto v = gen_state_vertices(epr, terms_of("bwf-prob"), std::vector{epr_state(epr, {0, 1, 0, 1})});
        REQUIRE(v.points.size() == 1);
        CHECK(v.points[0] == ints({0, 1, 0, 1, 0, 0, 0, 1}));
    }
    SUBCASE("joint expectations of the all-true state") {
        auto v = gen_state_vertices(epr, terms_of("chsh-expect"), std::vector{epr_state(epr, {1, 1, 1, 1})});
        CHECK(v.points[0] == ints({1, 1, 1, 1}));
    }
    SUBCASE("pentagon state v1") {
        Logic l = logic_of("pentagon");
        TwoValuedState s;
        s.values.assign(10, 0);
        for (const char* a : {"a1", "a4", "a6", "a8"}) s.values[l.index_of(a)] = 1;
        auto v = gen_state_vertices(l, terms_of("pentagon-prob"), std::vector{s});
        CHECK(v.points[0] == ints({1, 0, 0, 1, 0, 1, 0, 1, 0, 0}));
    }
    SUBCASE("one point per state, duplicates kept") {
        auto v = gen_state_vertices(epr, terms_of("chsh-expect"));
        CHECK(v.points.size() == 16);
        CHECK(dedupe(v).points.size() < 16);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(gen_state_vertices(epr, TermTable{}), DimensionError);
        CHECK_THROWS_AS(gen_state_vertices(epr, parse_terms("term p prob zz\n")), FormatError);
        CHECK_THROWS_AS(gen_state_vertices(epr, parse_terms("term c context_product a1 a1'\n")), DomainError);
        CHECK_THROWS_AS(gen_state_vertices(logic_of("cabello18"), terms_of("cabello-contexts")), DomainError);
        try {
            gen_state_vertices(logic_of("cabello18"), parse_terms("term p1 prob a1\n"));
            FAIL("expected an error");
        } catch (const DomainError& e) {
            CHECK(std::string(e.what()).find("parity") != std::string::npos);
        }
    }
}

TEST_CASE("expectation vertices are affine images of probability vertices") {
    for (const char* name : {"pentagon", "specker-bug", "gamma1", "epr-2x3"}) {
        CAPTURE(name);
        Logic l = logic_of(name);
        TermTable p, e;
        for (const auto& a : l.atoms) {
            p.terms.push_back({"p" + a.name, TermKind::prob, {a.name}});
            e.terms.push_back({"E" + a.name, TermKind::expect, {a.name}});
        }
        auto vp = gen_state_vertices(l, p);
        auto ve = gen_state_vertices(l, e);
        REQUIRE(vp.points.size() == ve.points.size());
        for (std::size_t i = 0; i < vp.points.size(); ++i)
            for (std::size_t k = 0; k < vp.dim; ++k) CHECK(ve.points[i][k] == 2 * vp.points[i][k] - 1);
    }
}

TEST_CASE("hulls of generated vertices reproduce the golden tables") {
    const std::vector<std::tuple<const char*, const char*, const char*>> cases = {
        {"epr-2x2", "bwf-prob", "bwf-2x2"},
        {"epr-2x2", "chsh-expect", "chsh-2x2"},
        {"pentagon", "pentagon-prob", "pentagon-prob"},
        {"pentagon", "pentagon-pair-expect", "pentagon-pair-expect-KCBS"},
        {"pentagon", "pentagon-all-pair-expect", "pentagon-all-pair-expect"},
        {"pentagon", "bub-stairs", "bub-stairs"},
        {"pentagon", "pentagon-nonintertwining", "pentagon-nonintertwining"},
        {"specker-bug", "bug-prob", "bug-prob"},
        {"specker-bug", "bug-edge-expect", "bug-edge-expect"}};
    for (auto [logic, terms, gold] : cases) {
        CAPTURE(gold);
        HRep h = hull(gen_state_vertices(logic_of(logic), terms_of(terms)));
        CHECK(compare_hreps(h, golden(gold)).empty());
    }
    SUBCASE("24 Bell-Wigner-Fine facets") {
        HRep h = hull(gen_state_vertices(logic_of("epr-2x2"), terms_of("bwf-prob")));
        CHECK(h.inequalities.size() == 24);
    }
    SUBCASE("KCBS row") {
        HRep h = hull(gen_state_vertices(logic_of("pentagon"), terms_of("pentagon-pair-expect")));
        CHECK(contains_inequality(h, make_row(IntVec{3, 1, 1, 1, 1, 1})));
    }
    SUBCASE("Specker bug edge relation holds with equality") {
        HRep h = hull(gen_state_vertices(logic_of("specker-bug"), terms_of("bug-edge-expect")));
        HRow r = make_row(IntVec{0, -1, 1, -1, 1, -1, 1});
        CHECK(implied_equality(h, r));
    }
}

TEST_CASE("noncontextual vertices") {
    SUBCASE("counts") {
        auto c = gen_noncontextual_vertices(logic_of("cabello18"));
        CHECK(c.points.size() == 256);
        CHECK(c.dim == 9);
        auto p = gen_noncontextual_vertices(logic_of("pentagon"));
        CHECK(p.points.size() == 32);
        CHECK(p.dim == 5);
        auto b = gen_noncontextual_vertices(logic_of("specker-bug"));
        CHECK(b.points.size() == 128);
        CHECK(b.dim == 7);
    }
    SUBCASE("single context") {
        auto v = gen_noncontextual_vertices(parse_logic("context a b c"));
        CHECK(v.points == std::vector<RatVec>{ints({-1}), ints({1})});
    }
    SUBCASE("cubes") {
        HRep p = hull(gen_noncontextual_vertices(logic_of("pentagon")));
        CHECK(p.inequalities.size() == 10);
        CHECK(compare_hreps(p, golden("pentagon-noncontextual")).empty());
        HRep b = hull(gen_noncontextual_vertices(logic_of("specker-bug")));
        CHECK(b.inequalities.size() == 14);
        CHECK(compare_hreps(b, golden("bug-noncontextual")).empty());
        for (const auto& r : b.inequalities) {
            auto z = row_vector(r);
            CHECK(z[0] == 1);
            CHECK(std::count_if(z.begin() + 1, z.end(), [](const Int& x) { return sgn(x) != 0; }) == 1);
        }
    }
    SUBCASE("term selection and worker count") {
        Logic l = logic_of("cabello18");
        auto all = gen_noncontextual_vertices(l);
        CHECK(gen_noncontextual_vertices(l, terms_of("cabello-contexts")).points == all.points);
        CHECK(gen_noncontextual_vertices(l, {26, 3}).points == all.points);
        CHECK_THROWS_AS(gen_noncontextual_vertices(l, parse_terms("term x context_product a1 a2\n")), DomainError);
    }
    SUBCASE("cost guard") {
        CHECK_THROWS_AS(gen_noncontextual_vertices(logic_of("yu-oh"), {20, 1}), DomainError);
    }
}

TEST_CASE("scenario catalog") {
    auto names = scenario_names();
    for (const char* n : {"one-var", "two-var-prob", "two-var-expect", "three-var-prob", "three-var-expect", "bwf-2x2",
                          "chsh-2x2", "epr-2x3-full", "epr-2x3-joints", "pentagon-prob",
                          "pentagon-pair-expect-KCBS", "pentagon-all-pair-expect", "bub-stairs",
                          "pentagon-nonintertwining", "bug-prob", "bug-edge-expect", "cabello-contextual"})
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    CHECK_THROWS_AS(builtin_scenario("nope"), FormatError);

    for (const auto& n : names) {
        CAPTURE(n);
        Scenario s = builtin_scenario(n);
        HRep h = hull(s.v);
        auto check = check_scenario(s, h);
        for (const auto& p : check.problems) CAPTURE(p);
        CHECK(check.ok());
    }
}

TEST_CASE("epr-2x3 joint-expectation facets split into CHSH and trivial rows") {
    HRep h = hull(gen_state_vertices(logic_of("epr-2x3"), terms_of("epr-2x3-joints")));
    REQUIRE(h.inequalities.size() == 90);
    int chsh = 0, trivial = 0;
    for (const auto& r : h.inequalities) {
        auto z = row_vector(r);
        auto nz = std::count_if(z.begin() + 1, z.end(), [](const Int& x) { return sgn(x) != 0; });
        if (z[0] == 2 && nz == 4) ++chsh;
        if (z[0] == 1 && nz == 1) ++trivial;
    }
    CHECK(chsh == 72);
    CHECK(trivial == 18);
}

TEST_CASE("scenario check reports problems") {
    Scenario s = builtin_scenario("chsh-2x2");
    HRep h = hull(s.v);
    h.inequalities.pop_back();
    auto c = check_scenario(s, h);
    CHECK_FALSE(c.ok());
    CHECK(c.golden_diff.missing_inequalities.size() == 1);
}
