#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "fmsat/enumerate.hpp"
#include "fmsat/feature_model.hpp"
#include "fmsat/generate.hpp"

using namespace fmsat;

namespace {

// Independent configuration counter: walks the tree semantics and evaluates
// constraints directly, never touching the CNF encoding.
struct FlatFeature {
    std::string name;
    int parent = -1;
    bool mandatory = false;
    bool tristate = false;
    GroupKind group = GroupKind::None;
    std::vector<int> children;
};

void flatten_into(const Feature& f, int parent, std::vector<FlatFeature>& out) {
    int idx = static_cast<int>(out.size());
    FlatFeature flat;
    flat.name = f.name;
    flat.parent = parent;
    flat.mandatory = f.relation == ChildRelation::Mandatory;
    flat.tristate = f.kind == FeatureKind::Tristate;
    flat.group = f.group;
    out.push_back(flat);
    if (parent >= 0) out[static_cast<std::size_t>(parent)].children.push_back(idx);
    for (const Feature& c : f.children) flatten_into(c, idx, out);
}

std::uint64_t enumerate_configs(const FeatureModel& fm) {
    std::vector<FlatFeature> feats;
    flatten_into(fm.root, -1, feats);
    int count = static_cast<int>(feats.size());
    REQUIRE(count <= 16);

    std::map<std::string, int> index;
    for (int i = 0; i < count; ++i) index[feats[static_cast<std::size_t>(i)].name] = i;
    std::vector<int> tristate_idx;
    for (int i = 0; i < count; ++i)
        if (feats[static_cast<std::size_t>(i)].tristate) tristate_idx.push_back(i);

    std::uint64_t configs = 0;
    for (std::uint32_t mask = 0; mask < (1u << count); ++mask) {
        if (!(mask & 1u)) continue;  // the root is always selected
        bool ok = true;
        for (int i = 1; i < count && ok; ++i) {
            bool present = (mask >> i) & 1u;
            bool parent_present = (mask >> feats[static_cast<std::size_t>(i)].parent) & 1u;
            if (present && !parent_present) ok = false;
            if (!present && parent_present && feats[static_cast<std::size_t>(i)].mandatory)
                ok = false;
        }
        for (int i = 0; i < count && ok; ++i) {
            const FlatFeature& f = feats[static_cast<std::size_t>(i)];
            if (f.group == GroupKind::None || !((mask >> i) & 1u)) continue;
            int selected = 0;
            for (int c : f.children) selected += (mask >> c) & 1u;
            if (f.group == GroupKind::Or && selected < 1) ok = false;
            if (f.group == GroupKind::Alternative && selected != 1) ok = false;
        }
        if (!ok) continue;

        std::uint32_t t = static_cast<std::uint32_t >(tristate_idx.size());
        for (std::uint32_t tmask = 0; tmask < (1u << t); ++tmask) {
            bool valid = true;
            for (std::uint32_t j = 0; j < t && valid; ++j)
                if (((tmask >> j) & 1u) &&
                    !((mask >> tristate_idx[static_cast<std::size_t>(j)]) & 1u))
                    valid = false;  // static requires presence
            if (!valid) continue;

            auto lookup = [&](const std::string& name, bool primed) {
                int i = index.at(name);
                if (!primed) return static_cast<bool>((mask >> i) & 1u);
                for (std::uint32_t j = 0; j < t; ++j)
                    if (tristate_idx[static_cast<std::size_t>(j)] == i)
                        return static_cast<bool>((tmask >> j) & 1u);
                return false;
            };
            bool all = true;
            for (const ExprPtr& c : fm.constraints)
                if (!evaluate(c, lookup)) {
                    all = false;
                    break;
                }
            if (all) ++configs;
        }
    }
    return configs;
}

// Random feature model for the projection-equivalence property.
FeatureModel random_fm(std::uint64_t seed, int max_features = 10) {
    SplitMix64 rng(seed);
    int count = 2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_features - 1)));

    std::vector<int> parent(static_cast<std::size_t>(count), -1);
    std::vector<Feature> nodes(static_cast<std::size_t>(count));
    std::vector<std::vector<int>> children(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        nodes[static_cast<std::size_t>(i)].name = "F" + std::to_string(i);
        nodes[static_cast<std::size_t>(i)].kind =
            rng.next_below(5) == 0 ? FeatureKind::Tristate : FeatureKind::Boolean;
        if (i > 0) {
            parent[static_cast<std::size_t>(i)] = static_cast<int>(rng.next_below(i));
            children[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])].push_back(i);
            nodes[static_cast<std::size_t>(i)].relation =
                rng.next_below(2) ? ChildRelation::Mandatory : ChildRelation::Optional;
        }
    }
    for (int i = 0; i < count; ++i)
        if (children[static_cast<std::size_t>(i)].size() >= 2 && rng.next_below(3) == 0)
            nodes[static_cast<std::size_t>(i)].group =
                rng.next_below(2) ? GroupKind::Or : GroupKind::Alternative;

    // assemble bottom-up (children indices are always larger)
    for (int i = count - 1; i >= 1; --i)
        nodes[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])]
            .children.insert(nodes[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])]
                                 .children.begin(),
                             nodes[static_cast<std::size_t>(i)]);

    FeatureModel fm;
    fm.root = nodes[0];

    auto random_ref = [&]() {
        int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(count)));
        bool primed = nodes[static_cast<std::size_t>(i)].kind == FeatureKind::Tristate &&
                      rng.next_below(3) == 0;
        ExprPtr ref = make_ref("F" + std::to_string(i), primed);
        return rng.next_below(2) ? make_not(ref) : ref;
    };
    std::uint64_t num_constraints = rng.next_below(4);
    for (std::uint64_t c = 0; c < num_constraints; ++c) {
        ExprOp op = std::array{ExprOp::And, ExprOp::Or, ExprOp::Implies,
                               ExprOp::Iff}[rng.next_below(4)];
        fm.constraints.push_back(make_binary(op, random_ref(), random_ref()));
    }
    return fm;
}

}  // namespace

TEST_CASE("parse_fm accepts the documented schema") {
    FeatureModel fm = parse_fm(R"({
        "name": "Car", "kind": "boolean",
        "children": [
            {"name": "Radio", "kind": "boolean", "relation": "optional"}
        ]
    })");
    CHECK(fm.root.name == "Car");
    REQUIRE(fm.root.children.size() == 1);
    CHECK(fm.root.children[0].relation == ChildRelation::Optional);
    CHECK(feature_count(fm.root) == 2);

    FeatureModel alt = parse_fm(R"({
        "name": "Engine", "group": "alternative",
        "children": [
            {"name": "Gas", "relation": "optional"},
            {"name": "Electric", "relation": "optional"}
        ]
    })");
    CHECK(alt.root.group == GroupKind::Alternative);
}

TEST_CASE("parse_fm rejects invalid documents") {
    // constraint over an undeclared feature
    CHECK_THROWS_AS(parse_fm(R"({"name":"R","constraints":["A => R"]})"), FmError);
    // duplicate names
    CHECK_THROWS_AS(parse_fm(R"({"name":"R","children":[
        {"name":"R","relation":"optional"}]})"),
                    FmError);
    // group with fewer than two children
    CHECK_THROWS_AS(parse_fm(R"({"name":"R","group":"or","children":[
        {"name":"A","relation":"optional"}]})"),
                    FmError);
    // root must not declare a relation
    CHECK_THROWS_AS(parse_fm(R"({"name":"R","relation":"optional"})"), FmError);
    // primed reference to a non-tristate feature
    CHECK_THROWS_AS(parse_fm(R"({"name":"R","children":[
        {"name":"A","relation":"optional"}],"constraints":["A' => R"]})"),
                    FmError);
    // missing relation on a child
    CHECK_THROWS_AS(parse_fm(R"({"name":"R","children":[{"name":"A"}]})"), FmError);
    CHECK_THROWS_AS(parse_fm("not json"), FmError);
}

TEST_CASE("constraint grammar: precedence and round trip") {
    ExprPtr e = parse_constraint("!A & B => C | D <=> E");
    // (<=>) binds loosest: ((!A & B) => (C | D)) <=> E
    REQUIRE(e->op == ExprOp::Iff);
    CHECK(e->lhs->op == ExprOp::Implies);
    CHECK(e->lhs->lhs->op == ExprOp::And);
    CHECK(e->lhs->lhs->lhs->op == ExprOp::Not);
    CHECK(e->lhs->rhs->op == ExprOp::Or);
    CHECK(e->rhs->op == ExprOp::Ref);

    // => is right-associative
    ExprPtr imp = parse_constraint("A => B => C");
    CHECK(imp->rhs->op == ExprOp::Implies);

    for (const char* text : {"A => B", "!(A | B') & C", "A <=> B <=> !C", "((A))"}) {
        ExprPtr parsed = parse_constraint(text);
        CHECK(constraint_to_string(parse_constraint(constraint_to_string(parsed))) ==
              constraint_to_string(parsed));
    }
    CHECK_THROWS_AS(parse_constraint("A &"), FmError);
    CHECK_THROWS_AS(parse_constraint("(A"), FmError);
    CHECK_THROWS_AS(parse_constraint(""), FmError);
}

TEST_CASE("encode_fm emits the structural clauses") {
    // root R with optional child C: {(r), (!c | r)}
    Feature root;
    root.name = "R";
    Feature child;
    child.name = "C";
    child.relation = ChildRelation::Optional;
    root.children.push_back(child);
    FeatureModel fm{root, {}};
    auto [f, map] = encode_fm(fm);
    CHECK(f == make_formula(2, {{1}, {-2, 1}}));
    CHECK(map.presence.at("R") == 1);
    CHECK(map.presence.at("C") == 2);
    CHECK(map.aux.empty());
}

TEST_CASE("alternative group encodes to exactly-one semantics") {
    FeatureModel fm = parse_fm(R"({
        "name": "R", "group": "alternative",
        "children": [
            {"name": "A", "relation": "optional"},
            {"name": "B", "relation": "optional"}
        ]
    })");
    auto [f, map] = encode_fm(fm);
    CHECK(f == make_formula(3, {{1}, {-2, 1}, {-3, 1}, {-1, 2, 3}, {-2, -3}}));
    CHECK(brute_force_count(f, map.feature_vars()) == 2);
}

TEST_CASE("tristate features add the pair clause") {
    FeatureModel fm = parse_fm(R"({
        "name": "R",
        "children": [{"name": "A", "kind": "tristate", "relation": "optional"}]
    })");
    auto [f, map] = encode_fm(fm);
    CHECK(map.presence.at("A") == 2);
    CHECK(map.static_var.at("A") == 3);
    bool found = false;
    for (const Clause& c : f.clauses()) found |= c == make_clause({2, -3});
    CHECK(found);
    // states: A absent, module, static -> 3 configurations
    CHECK(brute_force_count(f, map.feature_vars()) == 3);
}

TEST_CASE("ctcr examples") {
    FeatureModel fm = parse_fm(R"({
        "name": "R",
        "children": [
            {"name": "A", "relation": "optional"},
            {"name": "B", "relation": "optional"},
            {"name": "C", "relation": "optional"}
        ]
    })");
    CHECK(ctcr(fm) == doctest::Approx(0.0));

    fm.constraints.push_back(parse_constraint("A => B"));
    CHECK(ctcr(fm) == doctest::Approx(0.5));  // 2 of 4 features

    fm.constraints.push_back(parse_constraint("R & C"));
    CHECK(ctcr(fm) == doctest::Approx(1.0));
}

TEST_CASE("projection equivalence against the recursive enumerator") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        FeatureModel fm = random_fm(seed);
        auto [cnf, map] = encode_fm(fm);
        std::uint64_t expect = enumerate_configs(fm);
        std::uint64_t got = brute_force_count(cnf, map.feature_vars());
        CHECK(got == expect);
    }
}

TEST_CASE("every model selects the root and respects the tree") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        FeatureModel fm = random_fm(seed, 8);
        auto [cnf, map] = encode_fm(fm);
        if (cnf.num_vars() > 20) continue;

        std::vector<FlatFeature> feats;
        flatten_into(fm.root, -1, feats);
        int root_var = map.presence.at(feats[0].name);

        for (std::uint32_t m : enumerate_models(cnf)) {
            CHECK(((m >> (root_var - 1)) & 1u) != 0);
            for (std::size_t i = 1; i < feats.size(); ++i) {
                bool present = (m >> (map.presence.at(feats[i].name) - 1)) & 1u;
                bool parent_present =
                    (m >> (map.presence.at(feats[static_cast<std::size_t>(feats[i].parent)].name) -
                           1)) &
                    1u;
                if (present) CHECK(parent_present);  // deselected parent kills the subtree
            }
            // alternative: a selected parent has exactly one selected child
            for (std::size_t i = 0; i < feats.size(); ++i) {
                if (feats[i].group != GroupKind::Alternative) continue;
                if (!((m >> (map.presence.at(feats[i].name) - 1)) & 1u)) continue;
                int selected = 0;
                for (int c : feats[i].children)
                    selected +=
                        (m >> (map.presence.at(feats[static_cast<std::size_t>(c)].name) - 1)) & 1u;
                CHECK(selected == 1);
            }
        }
    }
}

TEST_CASE("write_fm and parse_fm round trip") {
    for (std::uint64_t seed = 200; seed < 220; ++seed) {
        FeatureModel fm = random_fm(seed);
        std::string text = write_fm(fm);
        CHECK(write_fm(parse_fm(text)) == text);
    }
}
