#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fmsat/dimacs.hpp"
#include "fmsat/enumerate.hpp"
#include "fmsat/formula.hpp"
#include "test_util.hpp"

using namespace fmsat;
using fmsat::testing::random_mixed_formula;

TEST_CASE("clause normalization removes duplicates and flags tautologies") {
    Clause c = make_clause({2, -1, 2, 2});
    CHECK(c.size() == 2);
    CHECK_FALSE(c.is_tautology());

    Clause t = make_clause({1, -1, 3});
    CHECK(t.is_tautology());
    CHECK(t.size() == 3);

    CHECK(make_clause({}).empty());
    CHECK_THROWS_AS(Lit(0), std::invalid_argument);
}

TEST_CASE("clause classification follows the at-most-one definitions") {
    // (!a | !b | c): one positive literal
    ClauseClass k = classify_clause(make_clause({-1, -2, 3}));
    CHECK(k.horn);
    CHECK_FALSE(k.anti_horn);
    CHECK_FALSE(k.binary);
    CHECK_FALSE(k.other);

    // (a | b): no negative literals, two literals
    k = classify_clause(make_clause({1, 2}));
    CHECK_FALSE(k.horn);
    CHECK(k.anti_horn);
    CHECK(k.binary);
    CHECK_FALSE(k.other);

    // (a | b | !c): one negative literal
    k = classify_clause(make_clause({1, 2, -3}));
    CHECK_FALSE(k.horn);
    CHECK(k.anti_horn);
    CHECK_FALSE(k.binary);
    CHECK_FALSE(k.other);

    // (a | b | c | !d | !e): two of each polarity, length five
    k = classify_clause(make_clause({1, 2, 3, -4, -5}));
    CHECK_FALSE(k.horn);
    CHECK_FALSE(k.anti_horn);
    CHECK_FALSE(k.binary);
    CHECK(k.other);

    // units are both Horn and anti-Horn
    k = classify_clause(make_clause({-7}));
    CHECK(k.horn);
    CHECK(k.anti_horn);
}

TEST_CASE("horn and anti_horn together iff at most one literal of each polarity") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Formula f = random_mixed_formula(seed);
        for (const Clause& c : f.clauses()) {
            int pos = 0, neg = 0;
            for (Lit l : c.literals()) (l.is_positive() ? pos : neg)++;
            ClauseClass k = classify_clause(c);
            CHECK(k.horn == (pos <= 1));
            CHECK(k.anti_horn == (neg <= 1));
            CHECK(k.binary == (c.size() == 2));
            CHECK(k.other == (!k.horn && !k.anti_horn && !k.binary));
        }
    }
}

TEST_CASE("parse_dimacs handles the basic forms") {
    Formula f = parse_dimacs("p cnf 2 1\n1 -2 0");
    CHECK(f.num_vars() == 2);
    REQUIRE(f.num_clauses() == 1);
    CHECK(f.clause(0) == make_clause({1, -2}));

    Formula empty = parse_dimacs("p cnf 1 0");
    CHECK(empty.num_vars() == 1);
    CHECK(empty.num_clauses() == 0);

    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0"), DimacsError);  // literal out of range
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0"), DimacsError);    // clause count mismatch
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 -2"), DimacsError);   // missing terminator
    CHECK_THROWS_AS(parse_dimacs("p dnf 2 1\n1 0"), DimacsError);    // malformed header
    CHECK_THROWS_AS(parse_dimacs("1 2 0"), DimacsError);             // no problem line
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\np cnf 1 1\n1 0"), DimacsError);
}

TEST_CASE("comments are collected on read and dropped on write") {
    std::vector<std::string> comments;
    Formula f = parse_dimacs("c hello\np cnf 1 1\nc mid\n1 0\n", &comments);
    REQUIRE(comments.size() == 2);
    CHECK(comments[0] == "c hello");
    CHECK(comments[1] == "c mid");
    CHECK(write_dimacs(f) == "p cnf 1 1\n1 0\n");
}

TEST_CASE("write_dimacs basic forms") {
    CHECK(write_dimacs(make_formula(2, {{1, -2}})) == "p cnf 2 1\n1 -2 0\n");
    CHECK(write_dimacs(Formula()) == "p cnf 0 0\n");
}

TEST_CASE("dimacs round trip is the identity for random formulas") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Formula f = random_mixed_formula(seed);
        CHECK(parse_dimacs(write_dimacs(f)) == f);
    }
}

TEST_CASE("formula_stats percentages") {
    // {(a|b), (!a|!b)}
    StatsReport r = formula_stats(make_formula(2, {{1, 2}, {-1, -2}}));
    CHECK(*r.pct_binary == doctest::Approx(100.0));
    CHECK(*r.pct_horn == doctest::Approx(50.0));
    CHECK(*r.pct_anti_horn == doctest::Approx(50.0));
    CHECK(*r.pct_other == doctest::Approx(0.0));
    CHECK(*r.pct_pure_vars == doctest::Approx(0.0));

    // all-unit formula
    r = formula_stats(make_formula(2, {{1}, {2}}));
    CHECK(*r.pct_horn == doctest::Approx(100.0));
    CHECK(*r.pct_anti_horn == doctest::Approx(100.0));
    CHECK(*r.pct_pure_vars == doctest::Approx(100.0));

    // no clauses: undefined markers
    r = formula_stats(Formula(3, {}));
    CHECK_FALSE(r.pct_horn.has_value());
    CHECK_FALSE(r.pct_pure_vars.has_value());
    CHECK(format_pct(r.pct_horn) == "NA");
    CHECK(format_pct(std::optional<double>(12.3456)) == "12.35");
}

TEST_CASE("brute_force_solve examples") {
    CHECK_FALSE(brute_force_solve(make_formula(1, {{1}, {-1}})));
    CHECK(brute_force_solve(Formula(0, {})));
    auto model = brute_force_solve(make_formula(2, {{1, 2}}));
    REQUIRE(model);
    CHECK(model->satisfies(make_formula(2, {{1, 2}})));
    CHECK_THROWS_AS(brute_force_solve(Formula(31, {})), LimitError);
}

TEST_CASE("brute_force_count examples") {
    CHECK(brute_force_count(Formula(3, {}), {1, 2, 3}) == 8);
    CHECK(brute_force_count(make_formula(1, {{1}}), {1}) == 1);
    CHECK(brute_force_count(make_formula(2, {{1, 2}}), {1, 2}) == 3);
    // empty projection: 1 iff satisfiable
    CHECK(brute_force_count(make_formula(2, {{1, 2}}), {}) == 1);
    CHECK(brute_force_count(make_formula(1, {{1}, {-1}}), {}) == 0);
    CHECK_THROWS_AS(brute_force_count(make_formula(1, {{1}}), {5}), std::invalid_argument);
}

TEST_CASE("backbone_brute examples") {
    BackboneResult r = backbone_brute(make_formula(2, {{1}, {1, 2}}));
    REQUIRE(r.satisfiable);
    CHECK(r.status[0] == BackboneStatus::ForcedTrue);
    CHECK(r.status[1] == BackboneStatus::Free);
    CHECK(r.forced_count() == 1);

    r = backbone_brute(make_formula(2, {{1, 2}}));
    REQUIRE(r.satisfiable);
    CHECK(r.status[0] == BackboneStatus::Free);
    CHECK(r.status[1] == BackboneStatus::Free);

    CHECK_FALSE(backbone_brute(make_formula(1, {{1}, {-1}})).satisfiable);
}

TEST_CASE("count positive iff satisfiable, and backbone matches unit-forcing") {
    for (std::uint64_t seed = 100; seed < 180; ++seed) {
        Formula f = random_mixed_formula(seed);
        bool sat = brute_force_solve(f).has_value();
        CHECK((brute_force_count(f, all_vars(f)) > 0) == sat);
        if (!sat) continue;

        BackboneResult bb = backbone_brute(f);
        for (int v = 1; v <= f.num_vars(); ++v) {
            // forced iff adding the opposite unit clause kills all models
            std::vector<Clause> with_true(f.clauses().begin(), f.clauses().end());
            with_true.push_back(make_clause({v}));
            std::vector<Clause> with_false(f.clauses().begin(), f.clauses().end());
            with_false.push_back(make_clause({-v}));
            std::uint64_t count_true =
                brute_force_count(Formula(f.num_vars(), with_true), all_vars(f));
            std::uint64_t count_false =
                brute_force_count(Formula(f.num_vars(), with_false), all_vars(f));
            BackboneStatus expected = BackboneStatus::Free;
            if (count_false == 0) expected = BackboneStatus::ForcedTrue;
            if (count_true == 0) expected = BackboneStatus::ForcedFalse;
            CHECK(bb.status[static_cast<std::size_t>(v - 1)] == expected);
        }
    }
}

TEST_CASE("active_var_count counts occurring variables") {
    CHECK(active_var_count(make_formula(5, {{1, -3}})) == 2);
    CHECK(active_var_count(Formula(4, {})) == 0);
}
