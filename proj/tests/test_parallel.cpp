#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fmsat/backdoor.hpp"
#include "fmsat/enumerate.hpp"
#include "fmsat/experiment.hpp"
#include "fmsat/generate.hpp"
#include "fmsat/profile.hpp"
#include "test_util.hpp"

// The OpenMP kernels must reproduce the serial reference results exactly.

using namespace fmsat;
using fmsat::testing::random_3sat;

TEST_CASE("brute_force_solve: parallel equals serial") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Formula f = random_3sat(seed, 16, 3.0 + (seed % 4));
        auto s = brute_force_solve(f, {}, ExecMode::Serial);
        auto p = brute_force_solve(f, {}, ExecMode::Parallel);
        CHECK(s.has_value() == p.has_value());
        if (s && p) CHECK(*s == *p);  // both return the first model
    }
}

TEST_CASE("brute_force_count: parallel equals serial") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Formula f = random_3sat(seed + 20, 15, 2.5);
        std::vector<int> proj;
        for (int v = 1; v <= 10; ++v) proj.push_back(v);
        CHECK(brute_force_count(f, proj, {}, ExecMode::Serial) ==
              brute_force_count(f, proj, {}, ExecMode::Parallel));
    }
}

TEST_CASE("backbone_brute: parallel equals serial") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Formula f = random_3sat(seed + 40, 15, 3.5);
        BackboneResult s = backbone_brute(f, {}, ExecMode::Serial);
        BackboneResult p = backbone_brute(f, {}, ExecMode::Parallel);
        CHECK(s.satisfiable == p.satisfiable);
        CHECK(s.status == p.status);
    }
}

TEST_CASE("strong backdoor search: parallel equals serial") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Formula f = random_3sat(seed + 60, 11, 1.5);
        StrongBackdoorResult s = max_strong_s_backdoor_brute(f, ExecMode::Serial);
        StrongBackdoorResult p = max_strong_s_backdoor_brute(f, ExecMode::Parallel);
        CHECK(s.size == p.size);
        CHECK(s.vars == p.vars);
    }
}

TEST_CASE("restricted_count: parallel equals serial") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Formula f = random_3sat(seed + 80, 12, 2.5);
        OracleConfig serial_cfg, parallel_cfg;
        serial_cfg.mode = ExecMode::Serial;
        parallel_cfg.mode = ExecMode::Parallel;
        RestrictedReport s = restricted_count(f, serial_cfg);
        RestrictedReport p = restricted_count(f, parallel_cfg);
        CHECK(s.satisfiable == p.satisfiable);
        CHECK(s.forced == p.forced);
        CHECK(s.unknown == p.unknown);
    }
}

TEST_CASE("snapshot profile: parallel equals serial") {
    Formula f = random_3sat(99, 13, 3.0);
    OracleConfig serial_cfg, parallel_cfg;
    serial_cfg.mode = ExecMode::Serial;
    parallel_cfg.mode = ExecMode::Parallel;
    ProfileTrace s = snapshot_profile(f, {}, serial_cfg);
    ProfileTrace p = snapshot_profile(f, {}, parallel_cfg);
    CHECK(trace_to_csv(s) == trace_to_csv(p));
}

TEST_CASE("experiment reports: parallel equals serial bytes") {
    ExperimentReport s = run_phase_transition(12, {2.0, 3.0, 4.0}, 6, 31, ExecMode::Serial);
    ExperimentReport p = run_phase_transition(12, {2.0, 3.0, 4.0}, 6, 31, ExecMode::Parallel);
    CHECK(s.to_json() == p.to_json());
    CHECK(s.to_csv() == p.to_csv());

    ExperimentReport hs = run_horn_sweep(15, 40, {0.3, 0.9}, 5, 8, ExecMode::Serial);
    ExperimentReport hp = run_horn_sweep(15, 40, {0.3, 0.9}, 5, 8, ExecMode::Parallel);
    CHECK(hs.to_json() == hp.to_json());
}
