#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "fmsat/formula.hpp"

namespace fmsat {

/// var was replaced everywhere by the literal rep (rep's variable has a
/// smaller index).
struct SubstitutionStep {
    int var;
    Lit rep;
};

/// var was resolved away; pos/neg are the removed clauses containing the
/// positive/negative literal of var.
struct EliminationStep {
    int var;
    std::vector<Clause> pos;
    std::vector<Clause> neg;
};

struct ForcedLiteralStep {
    Lit lit;
};

using ReconstructionStep = std::variant<SubstitutionStep, EliminationStep, ForcedLiteralStep>;

/// Result of the fixed-point simplification. The verdict is decided only when
/// the core has no clauses (SAT) or contains the empty clause (UNSAT).
struct CoreResult {
    Formula core;
    std::vector<ReconstructionStep> trail;
    int passes_used = 0;
    std::optional<bool> verdict_sat;
};

// The seven satisfiability-preserving passes. Each wrapper removes
// tautological clauses up front. A derived empty clause in the output
// signals unsatisfiability.
std::pair<Formula, std::vector<ReconstructionStep>> equiv_var_substitution(const Formula& f);
Formula subsumption(const Formula& f);
Formula self_subsuming_resolution(const Formula& f);
std::pair<Formula, std::vector<ReconstructionStep>> variable_elimination(const Formula& f);
Formula asymmetric_branching(const Formula& f);
Formula rcheck(const Formula& f);

struct BcpResult {
    Formula formula;
    std::vector<Lit> forced;
    bool unsat = false;
};
BcpResult bcp_simplify(const Formula& f);

/// Runs the passes in order (substitution, subsumption, self-subsuming
/// resolution, variable elimination, asymmetric branching, rcheck, BCP) for at
/// most max_passes rounds, stopping early at a fixed point.
CoreResult simplify_fixed_point(const Formula& f, int max_passes = 5);

/// Extends a model of the core to a complete model of the original formula by
/// replaying the trail in reverse. Throws std::logic_error when the result
/// does not satisfy the original (an implementation bug, given a core model).
Assignment reconstruct_model(const Assignment& core_model,
                             const std::vector<ReconstructionStep>& trail,
                             const Formula& original);

}  // namespace fmsat
