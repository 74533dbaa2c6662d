#include "fmsat/profile.hpp"

#include <sstream>
#include <stdexcept>

namespace fmsat {

namespace {

enum class OracleAnswer { Sat, Unsat, Unknown };

Formula with_units(const Formula& f, const Assignment& ctx, int extra_var, bool extra_value) {
    std::vector<Clause> clauses = f.clauses();
    for (int v = 1; v <= f.num_vars(); ++v) {
        Value val = ctx.num_vars() >= v ? ctx.value(v) : Value::Unassigned;
        if (val == Value::Unassigned) continue;
        clauses.push_back(make_clause({val == Value::True ? v : -v}));
    }
    if (extra_var != 0) clauses.push_back(make_clause({extra_value ? extra_var : -extra_var}));
    return Formula(f.num_vars(), std::move(clauses));
}

OracleAnswer oracle_sat(const Formula& f, const OracleConfig& oracle) {
    if (f.num_vars() < oracle.brute_force_below)
        return brute_force_solve(f, {}, ExecMode::Serial) ? OracleAnswer::Sat : OracleAnswer::Unsat;
    SolverConfig cfg = oracle.solver;
    cfg.conflict_limit = oracle.conflict_limit;
    switch (solve(f, cfg).verdict) {
        case Verdict::Sat: return OracleAnswer::Sat;
        case Verdict::Unsat: return OracleAnswer::Unsat;
        case Verdict::Limit: return OracleAnswer::Unknown;
    }
    return OracleAnswer::Unknown;
}

}  // namespace

VarStatus classify_variable(const Formula& f, const Assignment& ctx, int v,
                            const OracleConfig& oracle) {
    if (v < 1 || v > f.num_vars()) throw std::invalid_argument("variable out of range");
    if (ctx.num_vars() >= v && ctx.value(v) != Value::Unassigned)
        throw std::invalid_argument("classify_variable: variable already assigned");

    OracleAnswer pos = oracle_sat(with_units(f, ctx, v, true), oracle);
    OracleAnswer neg = oracle_sat(with_units(f, ctx, v, false), oracle);
    if (pos == OracleAnswer::Unknown || neg == OracleAnswer::Unknown) return VarStatus::Unknown;
    if (pos == OracleAnswer::Sat && neg == OracleAnswer::Sat) return VarStatus::Unrestricted;
    if (pos == OracleAnswer::Sat) return VarStatus::PosRestricted;
    if (neg == OracleAnswer::Sat) return VarStatus::NegRestricted;
    return VarStatus::ContextUnsat;
}

RestrictedReport restricted_count(const Formula& f, const OracleConfig& oracle) {
    RestrictedReport report;
    if (oracle_sat(f, oracle) != OracleAnswer::Sat) return report;  // UNSAT (or inconclusive)
    report.satisfiable = true;

    Assignment empty_ctx(f.num_vars());
    int n = f.num_vars();
    std::vector<VarStatus> status(static_cast<std::size_t>(n), VarStatus::Unknown);

#pragma omp parallel for schedule(dynamic) if (oracle.mode == ExecMode::Parallel)
    for (int v = 1; v <= n; ++v)
        status[static_cast<std::size_t>(v - 1)] = classify_variable(f, empty_ctx, v, oracle);

    for (int v = 1; v <= n; ++v) {
        switch (status[static_cast<std::size_t>(v - 1)]) {
            case VarStatus::Unrestricted: break;
            case VarStatus::PosRestricted: report.forced.emplace_back(v, true); break;
            case VarStatus::NegRestricted: report.forced.emplace_back(v, false); break;
            case VarStatus::ContextUnsat:
                throw std::logic_error("satisfiable formula classified context_unsat");
            case VarStatus::Unknown: report.unknown.push_back(v); break;
        }
    }
    return report;
}

ProfileTrace snapshot_profile(const Formula& f, const SolverConfig& cfg,
                              const OracleConfig& oracle, int every) {
    if (every < 1) throw std::invalid_argument("snapshot stride must be positive");
    ProfileTrace trace;
    std::uint64_t event = 0;

    StablePointHook hook = [&](std::uint64_t decisions, std::uint64_t conflicts,
                               const Assignment& ctx) {
        bool record = event % static_cast<std::uint64_t>(every) == 0;
        ++event;
        if (!record) return;

        Snapshot snap;
        snap.tick = decisions + conflicts;
        snap.decisions = decisions;
        snap.conflicts = conflicts;
        snap.assignment = ctx;

        std::vector<int> unassigned;
        for (int v = 1; v <= f.num_vars(); ++v)
            if (ctx.value(v) == Value::Unassigned) unassigned.push_back(v);
        snap.unassigned = static_cast<int>(unassigned.size());

        std::vector<VarStatus> status(unassigned.size());
        long long count = static_cast<long long>(unassigned.size());
#pragma omp parallel for schedule(dynamic) if (oracle.mode == ExecMode::Parallel)
        for (long long i = 0; i < count; ++i)
            status[static_cast<std::size_t>(i)] =
                classify_variable(f, ctx, unassigned[static_cast<std::size_t>(i)], oracle);

        for (VarStatus s : status) {
            switch (s) {
                case VarStatus::Unrestricted: ++snap.counts.unrestricted; break;
                case VarStatus::PosRestricted: ++snap.counts.pos_restricted; break;
                case VarStatus::NegRestricted: ++snap.counts.neg_restricted; break;
                case VarStatus::ContextUnsat: ++snap.counts.context_unsat; break;
                case VarStatus::Unknown: ++snap.counts.unknown; break;
            }
        }
        trace.snapshots.push_back(std::move(snap));
    };

    trace.result = solve_instrumented(f, cfg, hook);
    return trace;
}

std::string trace_to_csv(const ProfileTrace& trace) {
    std::ostringstream out;
    out << "tick,decisions,conflicts,unassigned,unrestricted,pos_restricted,neg_restricted,"
           "unknown,context_unsat\n";
    for (const Snapshot& s : trace.snapshots) {
        out << s.tick << ',' << s.decisions << ',' << s.conflicts << ',' << s.unassigned << ','
            << s.counts.unrestricted << ',' << s.counts.pos_restricted << ','
            << s.counts.neg_restricted << ',' << s.counts.unknown << ','
            << s.counts.context_unsat << '\n';
    }
    return out.str();
}

}  // namespace fmsat
