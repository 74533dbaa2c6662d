#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fmsat/backdoor.hpp"
#include "fmsat/formula.hpp"
#include "fmsat/simplify.hpp"
#include "fmsat/solver.hpp"

namespace fmsat {

/// One solver run inside an experiment. Wall time is recorded in memory but
/// kept out of serialized reports unless explicitly requested, so report
/// bytes are a pure function of inputs, flags, and seeds.
struct InstanceRow {
    std::string cell;
    std::uint64_t seed = 0;
    Verdict verdict = Verdict::Limit;
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;
    double wall_ms = 0.0;
};

struct CellAggregate {
    std::string cell;
    int instances = 0;
    double mean_conflicts = 0.0;
    double median_conflicts = 0.0;
    double mean_decisions = 0.0;
    double mean_wall_ms = 0.0;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::uint64_t> seeds;
    std::vector<InstanceRow> rows;
    std::vector<CellAggregate> cells;

    std::string to_json(bool include_timings = false) const;
    std::string to_csv(bool include_timings = false) const;
};

std::string verdict_name(Verdict v);

/// The eight feature-toggle combinations (clause learning, restarts, VSIDS),
/// each with a short label like "L1R0V1".
std::vector<std::pair<std::string, SolverConfig>> all_toggle_configs();

// --- Batch tables ----------------------------------------------------------

struct StatsRow {
    std::string file;
    bool ok = false;
    std::string error;
    StatsReport stats;
};

std::vector<StatsRow> run_stats_table(const std::vector<std::string>& paths);
std::string stats_table_to_text(const std::vector<StatsRow>& rows);
std::string stats_table_to_csv(const std::vector<StatsRow>& rows);

struct SimplifyRow {
    std::string file;
    bool ok = false;
    std::string error;
    int core_vars = 0;
    std::size_t core_clauses = 0;
    StatsReport core_stats;
    int passes_used = 0;
    std::string verdict;  // "SAT", "UNSAT", or "" when undecided
};

std::vector<SimplifyRow> run_simplify_table(const std::vector<std::string>& paths,
                                            int max_passes = 5);
std::string simplify_table_to_text(const std::vector<SimplifyRow>& rows);
std::string simplify_table_to_csv(const std::vector<SimplifyRow>& rows);

// --- Experiment drivers ------------------------------------------------------

/// Random 3-SAT density sweep solved with the full-featured configuration.
ExperimentReport run_phase_transition(int n, const std::vector<double>& densities,
                                      int instances_per_cell, std::uint64_t seed,
                                      ExecMode mode = ExecMode::Auto,
                                      std::optional<std::uint64_t> conflict_limit = {});

/// Horn-fraction sweep at fixed n and m.
ExperimentReport run_horn_sweep(int n, int m, const std::vector<double>& fractions,
                                int instances_per_cell, std::uint64_t seed,
                                ExecMode mode = ExecMode::Auto,
                                std::optional<std::uint64_t> conflict_limit = {});

/// Solves every input under all eight toggle combinations per seed.
ExperimentReport run_toggle_ablation(const std::vector<std::pair<std::string, Formula>>& inputs,
                                     const std::vector<std::uint64_t>& seeds,
                                     std::optional<std::uint64_t> conflict_limit = {},
                                     ExecMode mode = ExecMode::Auto);

/// One JSON line per input: the restricted/weak/strong backdoor audit record, or an error marker
/// for unsatisfiable/oversized formulas.
std::string audit_to_jsonl(const std::vector<std::pair<std::string, Formula>>& inputs);

// --- Trail serialization -----------------------------------------------------

std::string trail_to_json(const std::vector<ReconstructionStep>& trail);
std::vector<ReconstructionStep> trail_from_json(const std::string& text);

}  // namespace fmsat
