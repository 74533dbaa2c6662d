#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fmsat/enumerate.hpp"
#include "fmsat/formula.hpp"

namespace fmsat {

/// A weak E backdoor witness: assigning `assignment` on `vars` alone
/// satisfies every clause (the simplified formula is empty).
struct WeakBackdoorWitness {
    std::vector<int> vars;  // ascending
    Assignment assignment;  // values on vars; other variables unassigned
};

bool witness_satisfies_all(const Formula& f, const WeakBackdoorWitness& w);

struct FptStats {
    std::uint64_t branches = 0;  // leaves of the explored search tree (<= d^k)
};

/// Bounded search tree for weak E backdoors of size <= k over d-CNF input:
/// branch on the literals of the first unsatisfied clause. Throws
/// std::invalid_argument when some clause is wider than d.
std::optional<WeakBackdoorWitness> weak_e_backdoor_fpt(const Formula& f, int k, int d,
                                                       FptStats* stats = nullptr);

/// Smallest weak E backdoor by iterative deepening over k. nullopt for
/// unsatisfiable input (which has no weak backdoor of any size).
std::optional<std::pair<int, WeakBackdoorWitness>> min_weak_e_backdoor(const Formula& f, int d);

/// Ground-truth witness search over all variable subsets of size <= k and all
/// assignments to them. Desk-scale limits: n <= 20, k <= 6.
std::optional<WeakBackdoorWitness> weak_e_backdoor_brute(const Formula& f, int k);

/// size == -1 means no strong S backdoor of any size (unsatisfiable input:
/// even the empty set fails).
struct StrongBackdoorResult {
    int size = -1;
    std::vector<int> vars;
};

/// Largest B such that every assignment to B leaves a satisfiable residual
/// formula (delete satisfied clauses, strip false literals). Checked by
/// enumerating subsets in decreasing size; n <= 14.
StrongBackdoorResult max_strong_s_backdoor_brute(const Formula& f,
                                                 ExecMode mode = ExecMode::Auto);

struct AuditRecord {
    int n = 0;
    int restricted = 0;
    int weak_min = 0;
    int strong_max = 0;
    bool holds_leq = false;         // restricted <= weak_min
    bool holds_complement = false;  // strong_max >= n - weak_min
    bool holds_iff = false;         // restricted == weak_min and strong_max == n - restricted
};

/// Computes the three quantities and evaluates the relation flags. nullopt
/// for unsatisfiable input. n <= 14.
std::optional<AuditRecord> backdoor_audit(const Formula& f);

int max_clause_width(const Formula& f);

}  // namespace fmsat
