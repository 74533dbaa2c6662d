#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fmsat/backdoor.hpp"
#include "fmsat/dimacs.hpp"
#include "fmsat/experiment.hpp"
#include "fmsat/feature_model.hpp"
#include "fmsat/generate.hpp"
#include "fmsat/profile.hpp"
#include "fmsat/simplify.hpp"
#include "fmsat/solver.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

std::vector<std::string> expand_cnf_inputs(const std::vector<std::string>& inputs) {
    std::vector<std::string> paths;
    for (const std::string& in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::directory_iterator(in))
                if (entry.is_regular_file() && entry.path().extension() == ".cnf")
                    found.push_back(entry.path().string());
            std::sort(found.begin(), found.end());
            paths.insert(paths.end(), found.begin(), found.end());
        } else {
            paths.push_back(in);
        }
    }
    return paths;
}

ordered_json model_to_json(const fmsat::Assignment& model) {
    ordered_json arr = ordered_json::array();
    for (int v = 1; v <= model.num_vars(); ++v)
        arr.push_back(model.value(v) == fmsat::Value::True ? v : -v);
    return arr;
}

ordered_json result_to_json(const fmsat::SolveResult& res) {
    ordered_json j;
    j["verdict"] = fmsat::verdict_name(res.verdict);
    if (res.model) j["model"] = model_to_json(*res.model);
    j["metrics"] = {{"decisions", res.metrics.decisions},
                    {"conflicts", res.metrics.conflicts},
                    {"propagations", res.metrics.propagations},
                    {"restarts", res.metrics.restarts_done},
                    {"max_decision_level", res.metrics.max_decision_level}};
    return j;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fmsat: a SAT laboratory for feature-model analysis"};
    app.require_subcommand(1);

    int jobs = 0;
    app.add_option("--jobs", jobs, "worker threads for parallel kernels (0 = default)");

    // ---- stats ----
    auto* stats_cmd = app.add_subcommand("stats", "clause-class table for DIMACS inputs");
    std::vector<std::string> stats_in;
    bool stats_csv = false;
    std::string stats_out;
    stats_cmd->add_option("--in", stats_in, "DIMACS files or directories")->required();
    stats_cmd->add_flag("--csv", stats_csv, "emit CSV instead of a text table");
    stats_cmd->add_option("--out", stats_out, "output path (default stdout)");

    // ---- simplify ----
    auto* simp_cmd = app.add_subcommand("simplify", "fixed-point simplification to a core");
    std::string simp_in, simp_out, simp_trail;
    int simp_passes = 5;
    bool simp_json = false;
    simp_cmd->add_option("--in", simp_in, "input DIMACS file")->required();
    simp_cmd->add_option("--out", simp_out, "core DIMACS output");
    simp_cmd->add_option("--trail", simp_trail, "reconstruction trail JSON output");
    simp_cmd->add_option("--max-passes", simp_passes, "maximum simplification passes");
    simp_cmd->add_flag("--json", simp_json, "emit a JSON summary");

    // ---- solve ----
    auto* solve_cmd = app.add_subcommand("solve", "CDCL solve with toggleable features");
    std::string solve_in;
    bool no_learning = false, no_restarts = false, no_vsids = false, solve_json = false;
    bool phase_true = false, horn_only = false;
    std::uint64_t solve_seed = 0;
    std::uint64_t solve_climit = 0;
    solve_cmd->add_option("--in", solve_in, "input DIMACS file")->required();
    solve_cmd->add_flag("--no-learning", no_learning, "disable clause learning (plain DPLL)");
    solve_cmd->add_flag("--no-restarts", no_restarts, "disable Luby restarts");
    solve_cmd->add_flag("--no-vsids", no_vsids, "disable VSIDS (static branching order)");
    solve_cmd->add_flag("--phase-true", phase_true, "decide variables true first");
    solve_cmd->add_flag("--horn", horn_only, "use the polynomial Horn decider instead");
    solve_cmd->add_option("--seed", solve_seed, "branching seed");
    solve_cmd->add_option("--conflict-limit", solve_climit, "stop after this many conflicts");
    solve_cmd->add_flag("--json", solve_json, "emit JSON result");

    // ---- profile ----
    auto* prof_cmd = app.add_subcommand("profile", "restricted/unrestricted snapshot trace");
    std::string prof_in, prof_out;
    int prof_every = 1;
    std::uint64_t prof_climit = 100000;
    int prof_brute_below = 20;
    prof_cmd->add_option("--in", prof_in, "input DIMACS file")->required();
    prof_cmd->add_option("--out", prof_out, "trace CSV output (default stdout)");
    prof_cmd->add_option("--every", prof_every, "classify every N-th snapshot event");
    prof_cmd->add_option("--conflict-limit", prof_climit, "oracle conflict limit");
    prof_cmd->add_option("--brute-below", prof_brute_below,
                         "exhaustive oracle below this many variables");

    // ---- backdoor ----
    auto* bd_cmd = app.add_subcommand("backdoor", "weak/strong backdoor search and audits");
    std::vector<std::string> bd_in;
    std::string bd_mode;
    int bd_k = 0, bd_d = 0;
    bool bd_json = false;
    std::string bd_out;
    bd_cmd->add_option("--in", bd_in, "DIMACS file (audit mode: files or directories)")
        ->required();
    bd_cmd->add_option("--mode", bd_mode, "fpt | brute | strong | audit")->required();
    bd_cmd->add_option("--k", bd_k, "backdoor budget (fpt/brute)");
    bd_cmd->add_option("--d", bd_d, "clause-width bound for the FPT search (0 = derive)");
    bd_cmd->add_flag("--json", bd_json, "emit JSON");
    bd_cmd->add_option("--out", bd_out, "output path (default stdout)");

    // ---- gen ----
    auto* gen_cmd = app.add_subcommand("gen", "instance generators");
    gen_cmd->require_subcommand(1);
    auto* gen_ksat = gen_cmd->add_subcommand("ksat", "uniform random k-SAT");
    auto* gen_horn = gen_cmd->add_subcommand("hornmix", "3-SAT with a fixed Horn fraction");
    auto* gen_hard = gen_cmd->add_subcommand("hardfm", "hard artificial feature model");
    int g_n = 0, g_m = 0, g_k = 3, g_arity = 2;
    double g_density = -1.0, g_fraction = -1.0;
    std::uint64_t g_seed = 0;
    std::string g_out, g_cnf_out;
    for (CLI::App* sub : {gen_ksat, gen_horn, gen_hard}) {
        sub->add_option("--n", g_n, "variables")->required();
        sub->add_option("--m", g_m, "clauses");
        sub->add_option("--density", g_density, "clauses per variable (overrides --m)");
        sub->add_option("--seed", g_seed, "generator seed");
        sub->add_option("--out", g_out, "output path (default stdout)");
    }
    gen_ksat->add_option("--k", g_k, "clause width");
    gen_horn->add_option("--horn-fraction", g_fraction, "target Horn fraction")->required();
    gen_hard->add_option("--arity", g_arity, "tree arity");
    gen_hard->add_option("--emit-cnf", g_cnf_out, "also write the encoded CNF here");

    // ---- exp ----
    auto* exp_cmd = app.add_subcommand("exp", "experiment drivers");
    exp_cmd->require_subcommand(1);
    auto* exp_phase = exp_cmd->add_subcommand("phase", "random 3-SAT density sweep");
    auto* exp_horn = exp_cmd->add_subcommand("horn", "Horn-fraction sweep");
    auto* exp_abl = exp_cmd->add_subcommand("ablation", "solver feature-toggle ablation");
    auto* exp_audit = exp_cmd->add_subcommand("audit", "restricted/backdoor relation audit over a batch");
    int e_n = 75, e_m = 850, e_instances = 100;
    double e_dmin = 3.0, e_dmax = 5.5, e_dstep = 0.25;
    std::string e_fractions = "0,0.1,0.2,0.5,0.8,0.9,1";
    std::uint64_t e_seed = 1;
    std::string e_out, e_seeds = "1,2,3";
    std::vector<std::string> e_in;
    std::uint64_t e_climit = 0;
    bool e_csv = false, e_timings = false;
    exp_phase->add_option("--n", e_n, "variables");
    exp_phase->add_option("--density-min", e_dmin, "sweep start");
    exp_phase->add_option("--density-max", e_dmax, "sweep end (inclusive)");
    exp_phase->add_option("--density-step", e_dstep, "sweep step");
    exp_horn->add_option("--n", e_n, "variables")->default_val(200);
    exp_horn->add_option("--m", e_m, "clauses");
    exp_horn->add_option("--fractions", e_fractions, "comma-separated Horn fractions");
    exp_abl->add_option("--in", e_in, "DIMACS files or directories")->required();
    exp_abl->add_option("--seeds", e_seeds, "comma-separated solver seeds");
    exp_audit->add_option("--in", e_in, "DIMACS files or directories")->required();
    for (CLI::App* sub : {exp_phase, exp_horn, exp_abl}) {
        sub->add_option("--instances", e_instances, "instances per cell");
        sub->add_option("--seed", e_seed, "experiment seed");
        sub->add_option("--conflict-limit", e_climit, "per-solve conflict cap (0 = none)");
        sub->add_option("--out", e_out, "output path (default stdout)");
        sub->add_flag("--csv", e_csv, "emit per-instance CSV instead of JSON");
        sub->add_flag("--timings", e_timings, "include wall-clock columns (non-reproducible)");
    }
    exp_audit->add_option("--out", e_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }

#if defined(_OPENMP)
    if (jobs > 0) omp_set_num_threads(jobs);
#endif
    fmsat::ExecMode exec_mode = jobs == 1 ? fmsat::ExecMode::Serial : fmsat::ExecMode::Auto;

    try {
        if (stats_cmd->parsed()) {
            auto rows = fmsat::run_stats_table(expand_cnf_inputs(stats_in));
            write_text(stats_out,
                       stats_csv ? fmsat::stats_table_to_csv(rows) : fmsat::stats_table_to_text(rows));
            for (const auto& r : rows)
                if (!r.ok) {
                    std::cerr << "error: " << r.file << ": " << r.error << '\n';
                    return 1;
                }
            return 0;
        }

        if (simp_cmd->parsed()) {
            fmsat::Formula f = fmsat::read_dimacs_file(simp_in);
            fmsat::CoreResult core = fmsat::simplify_fixed_point(f, simp_passes);
            if (!simp_out.empty()) fmsat::write_dimacs_file(core.core, simp_out);
            if (!simp_trail.empty()) write_text(simp_trail, fmsat::trail_to_json(core.trail));
            ordered_json j;
            j["input_vars"] = f.num_vars();
            j["input_clauses"] = f.num_clauses();
            j["core_vars"] = fmsat::active_var_count(core.core);
            j["core_clauses"] = core.core.num_clauses();
            j["passes_used"] = core.passes_used;
            j["verdict"] =
                core.verdict_sat ? (*core.verdict_sat ? "SAT" : "UNSAT") : "UNDECIDED";
            if (simp_json)
                std::cout << j.dump(2) << '\n';
            else
                std::cout << "core: " << j["core_vars"] << " vars, " << j["core_clauses"]
                          << " clauses after " << core.passes_used
                          << " pass(es), verdict " << j["verdict"].get<std::string>() << '\n';
            return 0;
        }

        if (solve_cmd->parsed()) {
            fmsat::Formula f = fmsat::read_dimacs_file(solve_in);
            fmsat::SolveResult res;
            if (horn_only) {
                res = fmsat::solve_horn(f);
            } else {
                fmsat::SolverConfig cfg;
                cfg.clause_learning = !no_learning;
                cfg.restarts = !no_restarts;
                cfg.vsids = !no_vsids;
                cfg.phase_default = phase_true;
                cfg.seed = solve_seed;
                if (solve_climit > 0) cfg.conflict_limit = solve_climit;
                res = fmsat::solve(f, cfg);
            }
            if (solve_json) {
                std::cout << result_to_json(res).dump(2) << '\n';
            } else {
                std::cout << "s " << fmsat::verdict_name(res.verdict) << '\n';
                if (res.model) {
                    std::cout << "v";
                    for (int v = 1; v <= res.model->num_vars(); ++v)
                        std::cout << ' '
                                  << (res.model->value(v) == fmsat::Value::True ? v : -v);
                    std::cout << " 0\n";
                }
                std::cout << "c decisions " << res.metrics.decisions << " conflicts "
                          << res.metrics.conflicts << " propagations "
                          << res.metrics.propagations << " restarts "
                          << res.metrics.restarts_done << '\n';
            }
            return res.verdict == fmsat::Verdict::Limit ? 1 : 0;
        }

        if (prof_cmd->parsed()) {
            fmsat::Formula f = fmsat::read_dimacs_file(prof_in);
            fmsat::OracleConfig oracle;
            oracle.conflict_limit = prof_climit;
            oracle.brute_force_below = prof_brute_below;
            oracle.mode = jobs == 1 ? fmsat::ExecMode::Serial : fmsat::ExecMode::Parallel;
            fmsat::ProfileTrace trace = fmsat::snapshot_profile(f, {}, oracle, prof_every);
            write_text(prof_out, fmsat::trace_to_csv(trace));
            return 0;
        }

        if (bd_cmd->parsed()) {
            if (bd_mode == "audit") {
                std::vector<std::pair<std::string, fmsat::Formula>> inputs;
                for (const std::string& path : expand_cnf_inputs(bd_in))
                    inputs.emplace_back(path, fmsat::read_dimacs_file(path));
                write_text(bd_out, fmsat::audit_to_jsonl(inputs));
                return 0;
            }
            if (bd_in.size() != 1)
                throw CLI::ValidationError("--in", "exactly one input for this mode");
            fmsat::Formula f = fmsat::read_dimacs_file(bd_in[0]);
            ordered_json j;
            if (bd_mode == "fpt" || bd_mode == "brute") {
                int d = bd_d > 0 ? bd_d : std::max(1, fmsat::max_clause_width(f));
                std::optional<fmsat::WeakBackdoorWitness> w;
                fmsat::FptStats stats;
                if (bd_mode == "fpt")
                    w = fmsat::weak_e_backdoor_fpt(f, bd_k, d, &stats);
                else
                    w = fmsat::weak_e_backdoor_brute(f, bd_k);
                j["mode"] = bd_mode;
                j["k"] = bd_k;
                j["found"] = w.has_value();
                if (bd_mode == "fpt") j["branches"] = stats.branches;
                if (w) {
                    j["vars"] = w->vars;
                    ordered_json asg = ordered_json::array();
                    for (int v : w->vars)
                        asg.push_back(w->assignment.value(v) == fmsat::Value::True ? v : -v);
                    j["assignment"] = asg;
                }
            } else if (bd_mode == "strong") {
                fmsat::StrongBackdoorResult r = fmsat::max_strong_s_backdoor_brute(
                    f, jobs == 1 ? fmsat::ExecMode::Serial : fmsat::ExecMode::Auto);
                j["mode"] = "strong";
                j["size"] = r.size;
                j["vars"] = r.vars;
            } else {
                throw CLI::ValidationError("--mode", "expected fpt, brute, strong, or audit");
            }
            write_text(bd_out, (bd_json ? j.dump(2) : j.dump()) + "\n");
            return 0;
        }

        if (gen_cmd->parsed()) {
            fmsat::GenSpec spec;
            spec.n = g_n;
            spec.m = g_m;
            if (g_density >= 0.0) spec.density = g_density;
            spec.k = g_k;
            spec.seed = g_seed;
            if (gen_ksat->parsed()) {
                write_text(g_out, fmsat::write_dimacs(fmsat::random_ksat(spec)));
            } else if (gen_horn->parsed()) {
                spec.k = 3;
                spec.horn_fraction = g_fraction;
                write_text(g_out, fmsat::write_dimacs(fmsat::random_ksat_horn_mix(spec)));
            } else {
                fmsat::FeatureModel fm = fmsat::generate_hard_fm(spec, g_arity);
                write_text(g_out, fmsat::write_fm(fm));
                if (!g_cnf_out.empty()) {
                    auto [cnf, map] = fmsat::encode_fm(fm);
                    fmsat::write_dimacs_file(cnf, g_cnf_out);
                }
            }
            return 0;
        }

        if (exp_cmd->parsed()) {
            std::optional<std::uint64_t> climit;
            if (e_climit > 0) climit = e_climit;
            if (exp_audit->parsed()) {
                std::vector<std::pair<std::string, fmsat::Formula>> inputs;
                for (const std::string& path : expand_cnf_inputs(e_in))
                    inputs.emplace_back(path, fmsat::read_dimacs_file(path));
                write_text(e_out, fmsat::audit_to_jsonl(inputs));
                return 0;
            }
            fmsat::ExperimentReport report;
            if (exp_phase->parsed()) {
                std::vector<double> densities;
                for (double d = e_dmin; d <= e_dmax + 1e-9; d += e_dstep) densities.push_back(d);
                report = fmsat::run_phase_transition(e_n, densities, e_instances, e_seed,
                                                     exec_mode, climit);
            } else if (exp_horn->parsed()) {
                report = fmsat::run_horn_sweep(e_n, e_m, parse_double_list(e_fractions),
                                               e_instances, e_seed, exec_mode, climit);
            } else {
                std::vector<std::pair<std::string, fmsat::Formula>> inputs;
                for (const std::string& path : expand_cnf_inputs(e_in))
                    inputs.emplace_back(path, fmsat::read_dimacs_file(path));
                report = fmsat::run_toggle_ablation(inputs, parse_seed_list(e_seeds), climit,
                                                    exec_mode);
            }
            write_text(e_out, e_csv ? report.to_csv(e_timings) : report.to_json(e_timings));
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
