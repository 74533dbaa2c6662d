#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "fmsat/dimacs.hpp"
#include "fmsat/enumerate.hpp"
#include "fmsat/experiment.hpp"
#include "fmsat/generate.hpp"
#include "test_util.hpp"

using namespace fmsat;
using fmsat::testing::random_mixed_formula;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fmsat_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        fs::path p = path / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p.string();
    }
};

}  // namespace

TEST_CASE("stats table over a unit-clause file") {
    TempDir tmp;
    std::string path = tmp.file("units.cnf", write_dimacs(make_formula(2, {{1}, {2}})));
    auto rows = run_stats_table({path});
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].ok);
    CHECK(rows[0].stats.num_vars == 2);
    CHECK(rows[0].stats.num_clauses == 2);
    CHECK(*rows[0].stats.pct_horn == doctest::Approx(100.0));
    CHECK(*rows[0].stats.pct_anti_horn == doctest::Approx(100.0));
    CHECK(*rows[0].stats.pct_binary == doctest::Approx(0.0));
    CHECK(*rows[0].stats.pct_other == doctest::Approx(0.0));

    std::string csv = stats_table_to_csv(rows);
    CHECK(csv.find("100.00,100.00,0.00,0.00,100.00") != std::string::npos);
}

TEST_CASE("stats table: empty input and per-file failure") {
    CHECK(run_stats_table({}).empty());

    TempDir tmp;
    std::string good = tmp.file("ok.cnf", "p cnf 1 1\n1 0\n");
    std::string bad = tmp.file("bad.cnf", "p cnf 1 2\n1 0\n");
    auto rows = run_stats_table({bad, good});
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].ok);
    CHECK_FALSE(rows[0].error.empty());
    CHECK(rows[1].ok);  // the batch continues after a failure
}

TEST_CASE("simplify table: BCP-solved rows use the NA convention") {
    TempDir tmp;
    std::string path = tmp.file("bcp.cnf", write_dimacs(make_formula(2, {{1}, {-1, 2}})));
    auto rows = run_simplify_table({path});
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].ok);
    CHECK(rows[0].core_vars == 0);
    CHECK(rows[0].core_clauses == 0);
    CHECK(rows[0].verdict == "SAT");
    CHECK_FALSE(rows[0].core_stats.pct_horn.has_value());
    CHECK(simplify_table_to_csv(rows).find("NA,NA,NA,NA") != std::string::npos);

    std::string unsat = tmp.file("unsat.cnf", write_dimacs(make_formula(1, {{1}, {-1}})));
    rows = run_simplify_table({unsat});
    REQUIRE(rows[0].ok);
    CHECK(rows[0].verdict == "UNSAT");
}

TEST_CASE("simplify table: a fixed-point input reports its own stats") {
    // find a formula the simplifier cannot touch (the core of a hard instance)
    Formula core;
    bool found = false;
    for (std::uint64_t seed = 0; seed < 60 && !found; ++seed) {
        GenSpec spec;
        spec.n = 30;
        spec.density = 4.3;
        spec.k = 3;
        spec.seed = seed;
        CoreResult r = simplify_fixed_point(random_ksat(spec));
        if (!r.verdict_sat.has_value() && r.core.num_clauses() > 0 && r.passes_used < 5) {
            core = r.core;
            found = true;
        }
    }
    REQUIRE(found);

    TempDir tmp;
    std::string path = tmp.file("core.cnf", write_dimacs(core));
    auto rows = run_simplify_table({path});
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].ok);
    CHECK(rows[0].core_clauses == core.num_clauses());
    CHECK(rows[0].core_vars == active_var_count(core));
    CHECK(rows[0].passes_used == 1);
    CHECK(rows[0].verdict.empty());
    StatsReport input_stats = formula_stats(core);
    CHECK(*rows[0].core_stats.pct_horn == doctest::Approx(*input_stats.pct_horn));
    CHECK(*rows[0].core_stats.pct_binary == doctest::Approx(*input_stats.pct_binary));
}

TEST_CASE("simplify table cores agree with brute force") {
    TempDir tmp;
    std::vector<std::string> paths;
    std::vector<Formula> formulas;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Formula f = random_mixed_formula(seed);
        formulas.push_back(f);
        paths.push_back(tmp.file("r" + std::to_string(seed) + ".cnf", write_dimacs(f)));
    }
    auto rows = run_simplify_table(paths);
    REQUIRE(rows.size() == paths.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(rows[i].ok);
        bool expect = brute_force_solve(formulas[i]).has_value();
        if (rows[i].verdict == "SAT") CHECK(expect);
        if (rows[i].verdict == "UNSAT") CHECK_FALSE(expect);
    }
}

TEST_CASE("phase transition report is well-formed and deterministic") {
    ExperimentReport a = run_phase_transition(10, {2.0, 4.0}, 5, 123, ExecMode::Serial);
    REQUIRE(a.cells.size() == 2);
    CHECK(a.cells[0].cell == "density=2.00");
    CHECK(a.cells[0].instances == 5);
    CHECK(a.rows.size() == 10);

    ExperimentReport b = run_phase_transition(10, {2.0, 4.0}, 5, 123, ExecMode::Serial);
    CHECK(a.to_json() == b.to_json());
    CHECK(a.to_csv() == b.to_csv());

    // parses back as JSON (schema round trip)
    auto parsed = nlohmann::json::parse(a.to_json());
    CHECK(parsed["experiment"] == "phase");
    CHECK(parsed["instances"].size() == 10);

    // timings are opt-in
    CHECK(a.to_json().find("wall_ms") == std::string::npos);
    CHECK(a.to_json(true).find("wall_ms") != std::string::npos);
}

TEST_CASE("horn sweep: all-Horn cells solve with almost no conflicts") {
    ExperimentReport r = run_horn_sweep(30, 90, {1.0}, 5, 7, ExecMode::Serial);
    REQUIRE(r.cells.size() == 1);
    CHECK(r.cells[0].mean_conflicts <= 1.0);
}

TEST_CASE("toggle ablation covers all eight configurations and flags LIMIT") {
    std::vector<std::pair<std::string, Formula>> inputs;
    inputs.emplace_back("easy", make_formula(2, {{1, 2}}));
    GenSpec spec;
    spec.n = 40;
    spec.density = 5.0;
    spec.k = 3;
    spec.seed = 5;
    inputs.emplace_back("hard", random_ksat(spec));

    ExperimentReport r = run_toggle_ablation(inputs, {1, 2}, 2, ExecMode::Serial);
    CHECK(r.rows.size() == 2 * 8 * 2);
    CHECK(r.cells.size() == 16);

    bool any_limit = false;
    for (const InstanceRow& row : r.rows) {
        if (row.verdict == Verdict::Limit) {
            any_limit = true;
            CHECK(row.conflicts >= 2);
        }
    }
    CHECK(any_limit);  // density 5 at n=40 cannot finish within 2 conflicts

    ExperimentReport again = run_toggle_ablation(inputs, {1, 2}, 2, ExecMode::Serial);
    CHECK(r.to_json() == again.to_json());
}

TEST_CASE("audit batch emits one JSON line per input") {
    std::vector<std::pair<std::string, Formula>> inputs;
    inputs.emplace_back("a", make_formula(2, {{1}, {1, 2}}));
    inputs.emplace_back("unsat", make_formula(1, {{1}, {-1}}));
    inputs.emplace_back("b", make_formula(3, {{1, 2}, {1, 3}}));

    std::string jsonl = audit_to_jsonl(inputs);
    std::vector<std::string> lines;
    std::stringstream ss(jsonl);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    REQUIRE(lines.size() == 3);

    auto first = nlohmann::json::parse(lines[0]);
    CHECK(first["restricted"] == 1);
    CHECK(first["holds_iff"] == true);
    auto second = nlohmann::json::parse(lines[1]);
    CHECK(second["error"] == "unsatisfiable");
    auto third = nlohmann::json::parse(lines[2]);
    CHECK(third["holds_leq"] == true);
    CHECK(third["holds_iff"] == false);
}

TEST_CASE("trail JSON round trip reconstructs identically") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Formula f = random_mixed_formula(seed);
        CoreResult core = simplify_fixed_point(f);

        std::string json = trail_to_json(core.trail);
        std::vector<ReconstructionStep> parsed = trail_from_json(json);
        REQUIRE(parsed.size() == core.trail.size());
        CHECK(trail_to_json(parsed) == json);

        auto model = brute_force_solve(core.core);
        if (!model) continue;
        Assignment a = reconstruct_model(*model, core.trail, f);
        Assignment b = reconstruct_model(*model, parsed, f);
        CHECK(a == b);
        CHECK(a.satisfies(f));
    }
}

TEST_CASE("all_toggle_configs covers the cube") {
    auto configs = all_toggle_configs();
    REQUIRE(configs.size() == 8);
    int learning = 0, restarts = 0, vsids = 0;
    for (const auto& [label, cfg] : configs) {
        learning += cfg.clause_learning;
        restarts += cfg.restarts;
        vsids += cfg.vsids;
    }
    CHECK(learning == 4);
    CHECK(restarts == 4);
    CHECK(vsids == 4);
}
