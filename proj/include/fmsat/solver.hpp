#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fmsat/formula.hpp"

namespace fmsat {

/// Feature toggles for the CDCL solver. With clause_learning off the solver
/// backtracks chronologically (plain DPLL); restarts are only meaningful
/// together with clause learning and are ignored without it.
struct SolverConfig {
    bool clause_learning = true;
    bool restarts = true;
    bool vsids = true;
    bool phase_default = false;  // decision polarity
    std::uint64_t seed = 0;      // initial branching jitter when vsids is on
    std::optional<std::uint64_t> conflict_limit;
    bool collect_learned = false;
};

enum class Verdict { Sat, Unsat, Limit };

struct SolveMetrics {
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts_done = 0;
    int max_decision_level = 0;
};

struct SolveResult {
    Verdict verdict = Verdict::Limit;
    std::optional<Assignment> model;
    SolveMetrics metrics;
    std::vector<Clause> learned;  // populated when cfg.collect_learned
};

SolveResult solve(const Formula& f, const SolverConfig& cfg = {});

/// Called at every stable point of the search (propagation quiesced, about to
/// decide), including the initial one. decisions/conflicts are the counts so
/// far; the assignment is the current partial assignment.
using StablePointHook =
    std::function<void(std::uint64_t decisions, std::uint64_t conflicts, const Assignment&)>;

SolveResult solve_instrumented(const Formula& f, const SolverConfig& cfg,
                               const StablePointHook& hook);

struct PropagateResult {
    Assignment assignment;  // extension of the input (valid up to the conflict)
    std::optional<std::size_t> conflict_clause;  // 1-based index into f.clauses()
};

/// Unit propagation to fixpoint from a consistent partial assignment, via the
/// solver's two-watched-literal scheme.
PropagateResult propagate(const Formula& f, const Assignment& a);

/// Polynomial-time Horn decider: BCP derives the empty clause iff the formula
/// is unsatisfiable. The SAT model is the minimal one (propagated trues, all
/// other variables false). Throws std::invalid_argument on non-Horn input.
SolveResult solve_horn(const Formula& f);

}  // namespace fmsat
