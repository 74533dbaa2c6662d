#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fmsat/formula.hpp"

namespace fmsat {

/// Kernel selection for the exhaustive oracles. Serial is the reference
/// implementation; Parallel runs the same enumeration as an OpenMP kernel
/// with identical (deterministic) results. Auto picks by problem size.
enum class ExecMode { Serial, Parallel, Auto };

/// Desk-scale guard rails for the exhaustive oracles.
struct OracleLimits {
    int max_vars = 30;
    std::uint64_t max_steps = 1ull << 30;
};

class LimitError : public std::runtime_error {
  public:
    explicit LimitError(const std::string& what) : std::runtime_error(what) {}
};

/// Exhaustive SAT check. Returns the lexicographically first model (variable 1
/// is the least significant choice), or nullopt when unsatisfiable.
std::optional<Assignment> brute_force_solve(const Formula& f, OracleLimits limits = {},
                                            ExecMode mode = ExecMode::Auto);

/// Number of assignments to `projection` that extend to a full model.
/// `projection` is a set of variable indices; duplicates are ignored.
std::uint64_t brute_force_count(const Formula& f, const std::vector<int>& projection,
                                OracleLimits limits = {}, ExecMode mode = ExecMode::Auto);

std::vector<int> all_vars(const Formula& f);

enum class BackboneStatus : std::uint8_t { Free, ForcedTrue, ForcedFalse };

struct BackboneResult {
    bool satisfiable = false;
    /// status[v-1] for variable v; meaningful only when satisfiable.
    std::vector<BackboneStatus> status;

    int forced_count() const;
};

/// Per-variable backbone classification by model enumeration.
BackboneResult backbone_brute(const Formula& f, OracleLimits limits = {},
                              ExecMode mode = ExecMode::Auto);

/// True when `assignment` (a bitmask over vars 1..n, bit v-1 = value of v)
/// satisfies every clause. Exposed for test oracles that enumerate masks.
bool mask_satisfies(const Formula& f, std::uint32_t mask);

/// All satisfying assignments as ascending bitmasks. Intended for small n
/// (the result has up to 2^n entries).
std::vector<std::uint32_t> enumerate_models(const Formula& f, OracleLimits limits = {});

}  // namespace fmsat
