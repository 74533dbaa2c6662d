#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fmsat/enumerate.hpp"
#include "fmsat/formula.hpp"
#include "fmsat/solver.hpp"

namespace fmsat {

/// Classification of an unassigned variable under a partial assignment:
/// unrestricted when both branches extend to a model, positively/negatively
/// restricted when only the true/false branch does, context_unsat when
/// neither does. Unknown marks inconclusive (conflict-limited) oracle calls.
enum class VarStatus : std::uint8_t {
    Unrestricted,
    PosRestricted,
    NegRestricted,
    ContextUnsat,
    Unknown
};

/// Satisfiability oracle used by the profiler: exhaustive below
/// brute_force_below variables, otherwise the CDCL solver capped at
/// conflict_limit (inconclusive results become Unknown).
struct OracleConfig {
    int brute_force_below = 20;
    std::uint64_t conflict_limit = 100000;
    ExecMode mode = ExecMode::Serial;  // parallelism of per-snapshot classification
    SolverConfig solver;
};

/// Two oracle calls: f and ctx with v true, f and ctx with v false.
/// v must be unassigned in ctx.
VarStatus classify_variable(const Formula& f, const Assignment& ctx, int v,
                            const OracleConfig& oracle = {});

struct RestrictedReport {
    bool satisfiable = false;
    std::vector<std::pair<int, bool>> forced;  // (variable, forced value)
    std::vector<int> unknown;                  // inconclusive oracle calls

    int count() const { return static_cast<int>(forced.size()); }
};

/// Globally restricted variables = variables not unrestricted with respect to
/// the empty assignment (for satisfiable formulas, the backbone).
RestrictedReport restricted_count(const Formula& f, const OracleConfig& oracle = {});

struct StatusCounts {
    int unrestricted = 0;
    int pos_restricted = 0;
    int neg_restricted = 0;
    int context_unsat = 0;
    int unknown = 0;
};

struct Snapshot {
    std::uint64_t tick = 0;  // decisions + conflicts so far
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    int unassigned = 0;
    StatusCounts counts;
    Assignment assignment;
};

struct ProfileTrace {
    std::vector<Snapshot> snapshots;
    SolveResult result;
};

/// Runs an instrumented solve; every `every`-th stable point of the search
/// becomes a snapshot in which each unassigned variable is classified with
/// fresh oracle instances.
ProfileTrace snapshot_profile(const Formula& f, const SolverConfig& cfg = {},
                              const OracleConfig& oracle = {}, int every = 1);

/// CSV with columns tick, decisions, conflicts, unassigned, unrestricted,
/// pos_restricted, neg_restricted, unknown, context_unsat.
std::string trace_to_csv(const ProfileTrace& trace);

}  // namespace fmsat
