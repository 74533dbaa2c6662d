#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fmsat/dimacs.hpp"
#include "fmsat/enumerate.hpp"
#include "fmsat/feature_model.hpp"
#include "fmsat/generate.hpp"

using namespace fmsat;

TEST_CASE("random_ksat honors the density-derived clause count") {
    GenSpec spec;
    spec.n = 200;
    spec.density = 4.25;
    spec.seed = 1;
    Formula f = random_ksat(spec);
    CHECK(f.num_clauses() == 850);
    CHECK(f.num_vars() == 200);
    for (const Clause& c : f.clauses()) {
        CHECK(c.size() == 3);
        CHECK_FALSE(c.is_tautology());
    }
}

TEST_CASE("identical specs give byte-identical output") {
    GenSpec spec;
    spec.n = 40;
    spec.m = 120;
    spec.seed = 77;
    CHECK(write_dimacs(random_ksat(spec)) == write_dimacs(random_ksat(spec)));
    GenSpec other = spec;
    other.seed = 78;
    CHECK(write_dimacs(random_ksat(spec)) != write_dimacs(random_ksat(other)));
}

TEST_CASE("n=3 k=3 forces the variable set") {
    GenSpec spec;
    spec.n = 3;
    spec.m = 1;
    spec.k = 3;
    spec.seed = 5;
    Formula f = random_ksat(spec);
    REQUIRE(f.num_clauses() == 1);
    REQUIRE(f.clause(0).size() == 3);
    std::vector<int> vars;
    for (Lit l : f.clause(0).literals()) vars.push_back(l.var());
    CHECK(vars == std::vector<int>{1, 2, 3});
}

TEST_CASE("k > n is rejected") {
    GenSpec spec;
    spec.n = 2;
    spec.m = 1;
    spec.k = 3;
    CHECK_THROWS_AS(random_ksat(spec), std::invalid_argument);
}

TEST_CASE("horn mix hits the scheduled fraction exactly") {
    auto horn_count = [](const Formula& f) {
        std::size_t h = 0;
        for (const Clause& c : f.clauses()) h += classify_clause(c).horn;
        return h;
    };

    GenSpec spec;
    spec.n = 30;
    spec.m = 100;
    spec.seed = 3;

    spec.horn_fraction = 1.0;
    CHECK(horn_count(random_ksat_horn_mix(spec)) == 100);

    spec.horn_fraction = 0.0;
    CHECK(horn_count(random_ksat_horn_mix(spec)) == 0);

    spec.m = 850;
    spec.n = 200;
    spec.horn_fraction = 0.5;
    CHECK(horn_count(random_ksat_horn_mix(spec)) == 425);

    // measured fraction within one clause of the target across a sweep
    spec.n = 25;
    spec.m = 83;
    for (double p : {0.13, 0.4, 0.71, 0.95}) {
        spec.horn_fraction = p;
        double measured =
            static_cast<double>(horn_count(random_ksat_horn_mix(spec))) / spec.m;
        CHECK(std::abs(measured - p) * spec.m <= 1.0 + 1e-9);
    }
}

TEST_CASE("horn mix: every 3-clause is Horn xor anti-Horn") {
    GenSpec spec;
    spec.n = 20;
    spec.m = 60;
    spec.seed = 11;
    spec.horn_fraction = 0.37;
    Formula f = random_ksat_horn_mix(spec);
    for (const Clause& c : f.clauses()) {
        ClauseClass k = classify_clause(c);
        CHECK(k.horn != k.anti_horn);
    }
}

TEST_CASE("horn mix rejects bad parameters") {
    GenSpec spec;
    spec.n = 10;
    spec.m = 10;
    spec.k = 4;
    spec.horn_fraction = 0.5;
    CHECK_THROWS_AS(random_ksat_horn_mix(spec), std::invalid_argument);
    spec.k = 3;
    spec.horn_fraction = 1.5;
    CHECK_THROWS_AS(random_ksat_horn_mix(spec), std::invalid_argument);
}

TEST_CASE("hard FM structure for the 4-leaf example") {
    GenSpec spec;
    spec.n = 4;
    spec.m = 2;
    spec.k = 3;
    spec.seed = 9;
    FeatureModel fm = generate_hard_fm(spec, 2);
    CHECK(fm.constraints.size() == 2);

    int leaves = 0, internal = 0;
    std::function<void(const Feature&)> count = [&](const Feature& f) {
        if (f.children.empty())
            ++leaves;
        else
            ++internal;
        CHECK(f.relation == ChildRelation::Optional);
        CHECK(f.group == GroupKind::None);
        for (const Feature& c : f.children) count(c);
    };
    count(fm.root);
    CHECK(leaves == 4);
    CHECK(internal >= 3);
}

TEST_CASE("hard FM projection count equals the embedded 3-SAT count") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        GenSpec spec;
        spec.n = 4 + static_cast<int>(seed % 7);  // 4..10
        spec.density = 2.0;
        spec.k = 3;
        spec.seed = derive_seed(1234, seed);
        Formula embedded = random_ksat(spec);
        FeatureModel fm = generate_hard_fm(spec, 2);
        auto [cnf, map] = encode_fm(fm);

        std::vector<int> leaf_vars;
        for (int v = 1; v <= spec.n; ++v)
            leaf_vars.push_back(map.var_of("X" + std::to_string(v), false));

        CHECK(brute_force_count(cnf, leaf_vars) ==
              brute_force_count(embedded, all_vars(embedded)));
    }
}

TEST_CASE("derive_seed is deterministic and spreads") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
}
