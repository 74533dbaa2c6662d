#include "fmsat/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "fmsat/dimacs.hpp"
#include "fmsat/generate.hpp"

namespace fmsat {

using nlohmann::ordered_json;

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Sat: return "SAT";
        case Verdict::Unsat: return "UNSAT";
        case Verdict::Limit: return "LIMIT";
    }
    return "?";
}

std::vector<std::pair<std::string, SolverConfig>> all_toggle_configs() {
    std::vector<std::pair<std::string, SolverConfig>> out;
    for (int learning = 0; learning <= 1; ++learning)
        for (int restarts = 0; restarts <= 1; ++restarts)
            for (int vsids = 0; vsids <= 1; ++vsids) {
                SolverConfig cfg;
                cfg.clause_learning = learning;
                cfg.restarts = restarts;
                cfg.vsids = vsids;
                char label[16];
                std::snprintf(label, sizeof(label), "L%dR%dV%d", learning, restarts, vsids);
                out.emplace_back(label, cfg);
            }
    return out;
}

namespace {

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double median_of(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    std::size_t mid = xs.size() / 2;
    if (xs.size() % 2 == 1) return xs[mid];
    return (xs[mid - 1] + xs[mid]) / 2.0;
}

void compute_cells(ExperimentReport& report, const std::vector<std::string>& cell_order) {
    for (const std::string& cell : cell_order) {
        CellAggregate agg;
        agg.cell = cell;
        std::vector<double> conflicts, decisions, wall;
        for (const InstanceRow& row : report.rows) {
            if (row.cell != cell) continue;
            conflicts.push_back(static_cast<double>(row.conflicts));
            decisions.push_back(static_cast<double>(row.decisions));
            wall.push_back(row.wall_ms);
        }
        agg.instances = static_cast<int>(conflicts.size());
        agg.mean_conflicts = mean_of(conflicts);
        agg.median_conflicts = median_of(conflicts);
        agg.mean_decisions = mean_of(decisions);
        agg.mean_wall_ms = mean_of(wall);
        report.cells.push_back(std::move(agg));
    }
}

InstanceRow timed_solve(const Formula& f, const SolverConfig& cfg, const std::string& cell,
                        std::uint64_t seed) {
    InstanceRow row;
    row.cell = cell;
    row.seed = seed;
    auto start = std::chrono::steady_clock::now();
    SolveResult res = solve(f, cfg);
    auto stop = std::chrono::steady_clock::now();
    row.verdict = res.verdict;
    row.decisions = res.metrics.decisions;
    row.conflicts = res.metrics.conflicts;
    row.propagations = res.metrics.propagations;
    row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return row;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", x);
    return buf;
}

}  // namespace

std::string ExperimentReport::to_json(bool include_timings) const {
    ordered_json j;
    j["experiment"] = experiment;
    ordered_json params_json = ordered_json::object();
    for (const auto& [k, v] : params) params_json[k] = v;
    j["params"] = params_json;
    j["seeds"] = seeds;
    ordered_json cells_json = ordered_json::array();
    for (const CellAggregate& c : cells) {
        ordered_json cj;
        cj["cell"] = c.cell;
        cj["instances"] = c.instances;
        cj["mean_conflicts"] = format_double(c.mean_conflicts);
        cj["median_conflicts"] = format_double(c.median_conflicts);
        cj["mean_decisions"] = format_double(c.mean_decisions);
        if (include_timings) cj["mean_wall_ms"] = format_double(c.mean_wall_ms);
        cells_json.push_back(cj);
    }
    j["cells"] = cells_json;
    ordered_json rows_json = ordered_json::array();
    for (const InstanceRow& r : rows) {
        ordered_json rj;
        rj["cell"] = r.cell;
        rj["seed"] = r.seed;
        rj["verdict"] = verdict_name(r.verdict);
        rj["decisions"] = r.decisions;
        rj["conflicts"] = r.conflicts;
        rj["propagations"] = r.propagations;
        if (include_timings) rj["wall_ms"] = format_double(r.wall_ms);
        rows_json.push_back(rj);
    }
    j["instances"] = rows_json;
    return j.dump(2) + "\n";
}

std::string ExperimentReport::to_csv(bool include_timings) const {
    std::ostringstream out;
    out << "cell,seed,verdict,decisions,conflicts,propagations";
    if (include_timings) out << ",wall_ms";
    out << '\n';
    for (const InstanceRow& r : rows) {
        out << r.cell << ',' << r.seed << ',' << verdict_name(r.verdict) << ',' << r.decisions
            << ',' << r.conflicts << ',' << r.propagations;
        if (include_timings) out << ',' << format_double(r.wall_ms);
        out << '\n';
    }
    return out.str();
}

// --- Batch tables ------------------------------------------------------------

std::vector<StatsRow> run_stats_table(const std::vector<std::string>& paths) {
    std::vector<StatsRow> rows;
    for (const std::string& path : paths) {
        StatsRow row;
        row.file = path;
        try {
            Formula f = read_dimacs_file(path);
            row.stats = formula_stats(f);
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string stats_table_to_text(const std::vector<StatsRow>& rows) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-32s %10s %10s %8s %10s %8s %8s %8s\n", "File", "Variables",
                  "Clauses", "Horn", "Anti-Horn", "Binary", "Other", "Pure");
    out << buf;
    for (const StatsRow& r : rows) {
        if (!r.ok) {
            out << r.file << "  ERROR: " << r.error << '\n';
            continue;
        }
        std::snprintf(buf, sizeof(buf), "%-32s %10d %10zu %8s %10s %8s %8s %8s\n", r.file.c_str(),
                      r.stats.num_vars, r.stats.num_clauses, format_pct(r.stats.pct_horn).c_str(),
                      format_pct(r.stats.pct_anti_horn).c_str(),
                      format_pct(r.stats.pct_binary).c_str(), format_pct(r.stats.pct_other).c_str(),
                      format_pct(r.stats.pct_pure_vars).c_str());
        out << buf;
    }
    return out.str();
}

std::string stats_table_to_csv(const std::vector<StatsRow>& rows) {
    std::ostringstream out;
    out << "file,variables,clauses,horn_pct,anti_horn_pct,binary_pct,other_pct,pure_pct\n";
    for (const StatsRow& r : rows) {
        if (!r.ok) continue;
        out << r.file << ',' << r.stats.num_vars << ',' << r.stats.num_clauses << ','
            << format_pct(r.stats.pct_horn) << ',' << format_pct(r.stats.pct_anti_horn) << ','
            << format_pct(r.stats.pct_binary) << ',' << format_pct(r.stats.pct_other) << ','
            << format_pct(r.stats.pct_pure_vars) << '\n';
    }
    return out.str();
}

std::vector<SimplifyRow> run_simplify_table(const std::vector<std::string>& paths,
                                            int max_passes) {
    std::vector<SimplifyRow> rows;
    for (const std::string& path : paths) {
        SimplifyRow row;
        row.file = path;
        try {
            Formula f = read_dimacs_file(path);
            CoreResult core = simplify_fixed_point(f, max_passes);
            row.core_vars = active_var_count(core.core);
            row.core_clauses = core.core.num_clauses();
            row.core_stats = formula_stats(core.core);
            row.passes_used = core.passes_used;
            if (core.verdict_sat) row.verdict = *core.verdict_sat ? "SAT" : "UNSAT";
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string simplify_table_to_text(const std::vector<SimplifyRow>& rows) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-32s %10s %10s %8s %10s %8s %8s %7s %8s\n", "File",
                  "Variables", "Clauses", "Horn", "Anti-Horn", "Binary", "Other", "Passes",
                  "Verdict");
    out << buf;
    for (const SimplifyRow& r : rows) {
        if (!r.ok) {
            out << r.file << "  ERROR: " << r.error << '\n';
            continue;
        }
        std::snprintf(buf, sizeof(buf), "%-32s %10d %10zu %8s %10s %8s %8s %7d %8s\n",
                      r.file.c_str(), r.core_vars, r.core_clauses,
                      format_pct(r.core_stats.pct_horn).c_str(),
                      format_pct(r.core_stats.pct_anti_horn).c_str(),
                      format_pct(r.core_stats.pct_binary).c_str(),
                      format_pct(r.core_stats.pct_other).c_str(), r.passes_used,
                      r.verdict.empty() ? "-" : r.verdict.c_str());
        out << buf;
    }
    return out.str();
}

std::string simplify_table_to_csv(const std::vector<SimplifyRow>& rows) {
    std::ostringstream out;
    out << "file,variables,clauses,horn_pct,anti_horn_pct,binary_pct,other_pct,passes,verdict\n";
    for (const SimplifyRow& r : rows) {
        if (!r.ok) continue;
        out << r.file << ',' << r.core_vars << ',' << r.core_clauses << ','
            << format_pct(r.core_stats.pct_horn) << ',' << format_pct(r.core_stats.pct_anti_horn)
            << ',' << format_pct(r.core_stats.pct_binary) << ','
            << format_pct(r.core_stats.pct_other) << ',' << r.passes_used << ',' << r.verdict
            << '\n';
    }
    return out.str();
}

// --- Experiment drivers --------------------------------------------------------

ExperimentReport run_phase_transition(int n, const std::vector<double>& densities,
                                      int instances_per_cell, std::uint64_t seed, ExecMode mode,
                                      std::optional<std::uint64_t> conflict_limit) {
    ExperimentReport report;
    report.experiment = "phase";
    report.params = {{"n", std::to_string(n)},
                     {"instances_per_cell", std::to_string(instances_per_cell)}};
    report.seeds = {seed};

    std::vector<std::string> cell_names;
    for (double d : densities) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "density=%.2f", d);
        cell_names.emplace_back(buf);
    }

    std::size_t total = densities.size() * static_cast<std::size_t>(instances_per_cell);
    report.rows.resize(total);
    bool parallel = mode != ExecMode::Serial;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
        std::size_t cell = static_cast<std::size_t>(idx) / static_cast<std::size_t>(instances_per_cell);
        std::size_t inst = static_cast<std::size_t>(idx) % static_cast<std::size_t>(instances_per_cell);
        std::uint64_t inst_seed = derive_seed(seed, cell, inst);
        GenSpec spec;
        spec.n = n;
        spec.density = densities[cell];
        spec.k = 3;
        spec.seed = inst_seed;
        SolverConfig cfg;
        cfg.seed = inst_seed;
        cfg.conflict_limit = conflict_limit;
        report.rows[static_cast<std::size_t>(idx)] =
            timed_solve(random_ksat(spec), cfg, cell_names[cell], inst_seed);
    }
    compute_cells(report, cell_names);
    return report;
}

ExperimentReport run_horn_sweep(int n, int m, const std::vector<double>& fractions,
                                int instances_per_cell, std::uint64_t seed, ExecMode mode,
                                std::optional<std::uint64_t> conflict_limit) {
    ExperimentReport report;
    report.experiment = "horn";
    report.params = {{"n", std::to_string(n)},
                     {"m", std::to_string(m)},
                     {"instances_per_cell", std::to_string(instances_per_cell)}};
    report.seeds = {seed};

    std::vector<std::string> cell_names;
    for (double f : fractions) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "horn=%.2f", f);
        cell_names.emplace_back(buf);
    }

    std::size_t total = fractions.size() * static_cast<std::size_t>(instances_per_cell);
    report.rows.resize(total);
    bool parallel = mode != ExecMode::Serial;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
        std::size_t cell = static_cast<std::size_t>(idx) / static_cast<std::size_t>(instances_per_cell);
        std::size_t inst = static_cast<std::size_t>(idx) % static_cast<std::size_t>(instances_per_cell);
        std::uint64_t inst_seed = derive_seed(seed, cell, inst);
        GenSpec spec;
        spec.n = n;
        spec.m = m;
        spec.k = 3;
        spec.horn_fraction = fractions[cell];
        spec.seed = inst_seed;
        SolverConfig cfg;
        cfg.seed = inst_seed;
        cfg.conflict_limit = conflict_limit;
        report.rows[static_cast<std::size_t>(idx)] =
            timed_solve(random_ksat_horn_mix(spec), cfg, cell_names[cell], inst_seed);
    }
    compute_cells(report, cell_names);
    return report;
}

ExperimentReport run_toggle_ablation(const std::vector<std::pair<std::string, Formula>>& inputs,
                                     const std::vector<std::uint64_t>& seeds,
                                     std::optional<std::uint64_t> conflict_limit, ExecMode mode) {
    ExperimentReport report;
    report.experiment = "ablation";
    report.params = {{"inputs", std::to_string(inputs.size())}};
    report.seeds = seeds;

    auto configs = all_toggle_configs();
    std::vector<std::string> cell_names;
    for (const auto& [name, f] : inputs)
        for (const auto& [label, cfg] : configs) cell_names.push_back(name + ":" + label);

    std::size_t total = inputs.size() * configs.size() * seeds.size();
    report.rows.resize(total);
    bool parallel = mode != ExecMode::Serial;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
        std::size_t per_input = configs.size() * seeds.size();
        std::size_t input = static_cast<std::size_t>(idx) / per_input;
        std::size_t rest = static_cast<std::size_t>(idx) % per_input;
        std::size_t config = rest / seeds.size();
        std::size_t seed_idx = rest % seeds.size();

        SolverConfig cfg = configs[config].second;
        cfg.seed = seeds[seed_idx];
        cfg.conflict_limit = conflict_limit;
        report.rows[static_cast<std::size_t>(idx)] =
            timed_solve(inputs[input].second, cfg,
                        inputs[input].first + ":" + configs[config].first, seeds[seed_idx]);
    }
    compute_cells(report, cell_names);
    return report;
}

std::string audit_to_jsonl(const std::vector<std::pair<std::string, Formula>>& inputs) {
    std::ostringstream out;
    for (const auto& [name, f] : inputs) {
        ordered_json j;
        j["file"] = name;
        try {
            auto rec = backdoor_audit(f);
            if (!rec) {
                j["error"] = "unsatisfiable";
            } else {
                j["n"] = rec->n;
                j["restricted"] = rec->restricted;
                j["weak_min"] = rec->weak_min;
                j["strong_max"] = rec->strong_max;
                j["holds_leq"] = rec->holds_leq;
                j["holds_complement"] = rec->holds_complement;
                j["holds_iff"] = rec->holds_iff;
            }
        } catch (const std::exception& e) {
            j["error"] = e.what();
        }
        out << j.dump() << '\n';
    }
    return out.str();
}

// --- Trail serialization ---------------------------------------------------------

namespace {

ordered_json clause_to_json(const Clause& c) {
    ordered_json arr = ordered_json::array();
    for (Lit l : c.literals()) arr.push_back(l.code());
    return arr;
}

Clause clause_from_json(const ordered_json& arr) {
    std::vector<Lit> lits;
    for (const auto& v : arr) lits.emplace_back(v.get<int>());
    return Clause(std::move(lits));
}

}  // namespace

std::string trail_to_json(const std::vector<ReconstructionStep>& trail) {
    ordered_json arr = ordered_json::array();
    for (const ReconstructionStep& step : trail) {
        ordered_json j;
        if (const auto* sub = std::get_if<SubstitutionStep>(&step)) {
            j["kind"] = "substitution";
            j["var"] = sub->var;
            j["rep"] = sub->rep.code();
        } else if (const auto* elim = std::get_if<EliminationStep>(&step)) {
            j["kind"] = "eliminated";
            j["var"] = elim->var;
            ordered_json pos = ordered_json::array(), neg = ordered_json::array();
            for (const Clause& c : elim->pos) pos.push_back(clause_to_json(c));
            for (const Clause& c : elim->neg) neg.push_back(clause_to_json(c));
            j["pos"] = pos;
            j["neg"] = neg;
        } else if (const auto* forced = std::get_if<ForcedLiteralStep>(&step)) {
            j["kind"] = "forced";
            j["lit"] = forced->lit.code();
        }
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

std::vector<ReconstructionStep> trail_from_json(const std::string& text) {
    ordered_json arr = ordered_json::parse(text);
    std::vector<ReconstructionStep> trail;
    for (const auto& j : arr) {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "substitution") {
            trail.push_back(SubstitutionStep{j.at("var").get<int>(), Lit(j.at("rep").get<int>())});
        } else if (kind == "eliminated") {
            EliminationStep step;
            step.var = j.at("var").get<int>();
            for (const auto& c : j.at("pos")) step.pos.push_back(clause_from_json(c));
            for (const auto& c : j.at("neg")) step.neg.push_back(clause_from_json(c));
            trail.push_back(std::move(step));
        } else if (kind == "forced") {
            trail.push_back(ForcedLiteralStep{Lit(j.at("lit").get<int>())});
        } else {
            throw std::runtime_error("unknown trail step kind " + kind);
        }
    }
    return trail;
}

}  // namespace fmsat
