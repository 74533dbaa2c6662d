#include "fmsat/solver.hpp"

#include <algorithm>
#include <stdexcept>

namespace fmsat {

namespace {

// Internal literal encoding: 2*(var-1) + (negative ? 1 : 0).
inline int ilit(Lit l) { return 2 * (l.var() - 1) + (l.is_positive() ? 0 : 1); }
inline int ineg(int p) { return p ^ 1; }
inline int ivar(int p) { return p >> 1; }
inline Lit to_lit(int p) {
    int v = ivar(p) + 1;
    return (p & 1) ? Lit::negative(v) : Lit::positive(v);
}

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// luby(i) for i >= 1: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
std::uint64_t luby(std::uint64_t i) {
    for (;;) {
        std::uint64_t k = 1;
        while (((1ull << k) - 1) < i) ++k;
        if (i == (1ull << k) - 1) return 1ull << (k - 1);
        i -= (1ull << (k - 1)) - 1;
    }
}

constexpr signed char kUndef = -1;
constexpr int kNoClause = -1;

struct Cdcl {
    const Formula& input;
    SolverConfig cfg;
    int nv;

    std::vector<std::vector<int>> cls;   // clause database, input clauses first
    std::size_t num_input_clauses;
    std::vector<std::vector<int>> watches;  // per literal: clause indices
    std::vector<signed char> values;        // per var: 0/1/kUndef
    std::vector<int> levels;                // per var
    std::vector<int> reasons;               // per var: clause index or kNoClause
    std::vector<int> trail;
    std::vector<std::size_t> trail_lim;
    std::size_t qhead = 0;

    std::vector<double> activity;
    std::vector<char> seen;

    // DPLL mode: per decision level, whether the decision was already flipped.
    std::vector<char> flipped;

    SolveMetrics metrics;
    int empty_clause = kNoClause;
    bool root_conflict = false;

    Cdcl(const Formula& f, const SolverConfig& c) : input(f), cfg(c), nv(f.num_vars()) {
        values.assign(nv, kUndef);
        levels.assign(nv, 0);
        reasons.assign(nv, kNoClause);
        watches.assign(2 * static_cast<std::size_t>(nv), {});
        activity.assign(nv, 0.0);
        seen.assign(nv, 0);
        if (cfg.vsids) {
            // Seed only perturbs the initial branching order; ties thereafter
            // break toward the lowest index.
            for (int v = 0; v < nv; ++v)
                activity[static_cast<std::size_t>(v)] =
                    static_cast<double>(mix64(cfg.seed ^ mix64(static_cast<std::uint64_t>(v))) >> 11) *
                    (1.0 / 9007199254740992.0) * 1e-6;
        }

        cls.reserve(f.num_clauses());
        for (std::size_t i = 0; i < f.num_clauses(); ++i) {
            const Clause& c = f.clause(i);
            std::vector<int> lits;
            lits.reserve(c.size());
            for (Lit l : c.literals()) lits.push_back(ilit(l));
            cls.push_back(std::move(lits));
        }
        num_input_clauses = cls.size();
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (cls[i].empty()) {
                if (empty_clause == kNoClause) empty_clause = static_cast<int>(i);
                continue;
            }
            if (cls[i].size() >= 2) attach(static_cast<int>(i));
        }
    }

    void attach(int ci) {
        watches[static_cast<std::size_t>(cls[ci][0])].push_back(ci);
        watches[static_cast<std::size_t>(cls[ci][1])].push_back(ci);
    }

    int level() const { return static_cast<int>(trail_lim.size()); }

    signed char lit_value(int p) const {
        signed char v = values[static_cast<std::size_t>(ivar(p))];
        if (v == kUndef) return kUndef;
        return static_cast<signed char>(v ^ (p & 1));
    }

    void enqueue(int p, int reason) {
        values[static_cast<std::size_t>(ivar(p))] = static_cast<signed char>(1 ^ (p & 1));
        levels[static_cast<std::size_t>(ivar(p))] = level();
        reasons[static_cast<std::size_t>(ivar(p))] = reason;
        trail.push_back(p);
    }

    // Enqueue the root facts (unit clauses); returns a conflicting clause
    // index or kNoClause.
    int enqueue_units() {
        for (std::size_t i = 0; i < num_input_clauses; ++i) {
            if (cls[i].size() != 1) continue;
            int p = cls[i][0];
            signed char v = lit_value(p);
            if (v == 0) return static_cast<int>(i);
            if (v == kUndef) enqueue(p, static_cast<int>(i));
        }
        return kNoClause;
    }

    int propagate_all() {
        while (qhead < trail.size()) {
            int p = trail[qhead++];
            std::vector<int>& ws = watches[static_cast<std::size_t>(ineg(p))];
            std::size_t j = 0;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                int ci = ws[i];
                std::vector<int>& c = cls[static_cast<std::size_t>(ci)];
                int false_lit = ineg(p);
                if (c[0] == false_lit) std::swap(c[0], c[1]);
                if (lit_value(c[0]) == 1) {
                    ws[j++] = ci;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k) {
                    if (lit_value(c[k]) != 0) {
                        std::swap(c[1], c[k]);
                        watches[static_cast<std::size_t>(c[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[j++] = ci;
                if (lit_value(c[0]) == 0) {
                    // conflict: keep remaining watchers
                    for (++i; i < ws.size(); ++i) ws[j++] = ws[i];
                    ws.resize(j);
                    return ci;
                }
                enqueue(c[0], ci);
                ++metrics.propagations;
            }
            ws.resize(j);
        }
        return kNoClause;
    }

    void cancel_until(int lvl) {
        if (level() <= lvl) return;
        std::size_t bound = trail_lim[static_cast<std::size_t>(lvl)];
        for (std::size_t i = trail.size(); i-- > bound;) {
            int v = ivar(trail[i]);
            values[static_cast<std::size_t>(v)] = kUndef;
            reasons[static_cast<std::size_t>(v)] = kNoClause;
        }
        trail.resize(bound);
        trail_lim.resize(static_cast<std::size_t>(lvl));
        flipped.resize(static_cast<std::size_t>(lvl));
        qhead = trail.size();
    }

    void bump(int v) {
        if (cfg.vsids) activity[static_cast<std::size_t>(v)] += 1.0;
    }

    void decay_tick() {
        if (cfg.vsids && metrics.conflicts % 256 == 0)
            for (double& a : activity) a *= 0.95;
    }

    int pick_branch_var() const {
        if (cfg.vsids) {
            int best = -1;
            double best_act = -1.0;
            for (int v = 0; v < nv; ++v)
                if (values[static_cast<std::size_t>(v)] == kUndef &&
                    activity[static_cast<std::size_t>(v)] > best_act) {
                    best = v;
                    best_act = activity[static_cast<std::size_t>(v)];
                }
            return best;
        }
        for (int v = 0; v < nv; ++v)
            if (values[static_cast<std::size_t>(v)] == kUndef) return v;
        return -1;
    }

    bool all_clauses_satisfied() const {
        for (std::size_t i = 0; i < num_input_clauses; ++i) {
            bool sat = false;
            for (int p : cls[i])
                if (lit_value(p) == 1) {
                    sat = true;
                    break;
                }
            if (!sat) return false;
        }
        return true;
    }

    Assignment extract_model() const {
        Assignment a(nv);
        for (int v = 0; v < nv; ++v) {
            signed char val = values[static_cast<std::size_t>(v)];
            a.set(v + 1, val == kUndef ? cfg.phase_default : val == 1);
        }
        return a;
    }

    // First-UIP conflict analysis. Returns the learnt clause (asserting
    // literal first) and the backjump level.
    std::pair<std::vector<int>, int> analyze(int confl) {
        std::vector<int> learnt{0};
        int path = 0;
        int p = -1;  // trail literal whose reason clause is being expanded
        std::size_t index = trail.size();

        do {
            const std::vector<int>& c = cls[static_cast<std::size_t>(confl)];
            for (std::size_t k = 0; k < c.size(); ++k) {
                int q = c[k];
                if (q == p) continue;  // the literal this clause propagated
                int v = ivar(q);
                if (!seen[static_cast<std::size_t>(v)] && levels[static_cast<std::size_t>(v)] > 0) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    bump(v);
                    if (levels[static_cast<std::size_t>(v)] >= level())
                        ++path;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen[static_cast<std::size_t>(ivar(trail[--index]))]) {
            }
            p = trail[index];
            confl = reasons[static_cast<std::size_t>(ivar(p))];
            seen[static_cast<std::size_t>(ivar(p))] = 0;
            --path;
        } while (path > 0);
        learnt[0] = ineg(p);

        for (std::size_t i = 1; i < learnt.size(); ++i)
            seen[static_cast<std::size_t>(ivar(learnt[i]))] = 0;

        int bt = 0;
        if (learnt.size() > 1) {
            std::size_t max_i = 1;
            for (std::size_t i = 2; i < learnt.size(); ++i)
                if (levels[static_cast<std::size_t>(ivar(learnt[i]))] >
                    levels[static_cast<std::size_t>(ivar(learnt[max_i]))])
                    max_i = i;
            std::swap(learnt[1], learnt[max_i]);
            bt = levels[static_cast<std::size_t>(ivar(learnt[1]))];
        }
        return {std::move(learnt), bt};
    }

    SolveResult run(const StablePointHook& hook, std::vector<Clause>* learned_out) {
        SolveResult result;

        auto finish = [&](Verdict v, std::optional<Assignment> model) {
            result.verdict = v;
            result.model = std::move(model);
            result.metrics = metrics;
            return result;
        };

        if (empty_clause != kNoClause) return finish(Verdict::Unsat, std::nullopt);
        int confl = enqueue_units();
        if (confl == kNoClause) confl = propagate_all();
        if (confl != kNoClause) return finish(Verdict::Unsat, std::nullopt);

        std::uint64_t conflicts_since_restart = 0;
        std::uint64_t restart_budget = cfg.restarts && cfg.clause_learning ? 64 * luby(1) : 0;

        for (;;) {
            confl = propagate_all();
            if (confl != kNoClause) {
                ++metrics.conflicts;
                decay_tick();
                ++conflicts_since_restart;
                if (cfg.conflict_limit && metrics.conflicts >= *cfg.conflict_limit)
                    return finish(Verdict::Limit, std::nullopt);

                if (cfg.clause_learning) {
                    if (level() == 0) return finish(Verdict::Unsat, std::nullopt);
                    auto [learnt, bt] = analyze(confl);
                    cancel_until(bt);
                    if (learnt.size() == 1) {
                        enqueue(learnt[0], kNoClause);
                    } else {
                        cls.push_back(learnt);
                        attach(static_cast<int>(cls.size() - 1));
                        enqueue(learnt[0], static_cast<int>(cls.size() - 1));
                    }
                    if (learned_out) {
                        std::vector<Lit> lits;
                        for (int q : learnt) lits.push_back(to_lit(q));
                        learned_out->push_back(Clause(std::move(lits)));
                    }
                } else {
                    // Chronological backtracking: bump the conflict clause,
                    // then flip the most recent unflipped decision.
                    for (int q : cls[static_cast<std::size_t>(confl)]) bump(ivar(q));
                    int lvl = level();
                    while (lvl > 0 && flipped[static_cast<std::size_t>(lvl - 1)]) --lvl;
                    if (lvl == 0) return finish(Verdict::Unsat, std::nullopt);
                    int decision = trail[trail_lim[static_cast<std::size_t>(lvl - 1)]];
                    cancel_until(lvl - 1);
                    trail_lim.push_back(trail.size());
                    flipped.push_back(1);
                    enqueue(ineg(decision), kNoClause);
                }
                continue;
            }

            // Stable point: propagation quiesced without conflict.
            if (restart_budget && conflicts_since_restart >= restart_budget) {
                ++metrics.restarts_done;
                conflicts_since_restart = 0;
                restart_budget = 64 * luby(metrics.restarts_done + 1);
                cancel_until(0);
            }

            if (hook) hook(metrics.decisions, metrics.conflicts, extract_model_partial());
            if (all_clauses_satisfied()) return finish(Verdict::Sat, extract_model());

            int v = pick_branch_var();
            if (v < 0) {
                // Complete assignment that does not satisfy some clause would
                // have conflicted during propagation.
                return finish(Verdict::Sat, extract_model());
            }
            ++metrics.decisions;
            trail_lim.push_back(trail.size());
            flipped.push_back(0);
            metrics.max_decision_level = std::max(metrics.max_decision_level, level());
            enqueue(2 * v + (cfg.phase_default ? 0 : 1), kNoClause);
        }
    }

    Assignment extract_model_partial() const {
        Assignment a(nv);
        for (int v = 0; v < nv; ++v) {
            signed char val = values[static_cast<std::size_t>(v)];
            if (val != kUndef) a.set(v + 1, val == 1);
        }
        return a;
    }
};

}  // namespace

SolveResult solve(const Formula& f, const SolverConfig& cfg) {
    return solve_instrumented(f, cfg, nullptr);
}

SolveResult solve_instrumented(const Formula& f, const SolverConfig& cfg,
                               const StablePointHook& hook) {
    Cdcl solver(f, cfg);
    std::vector<Clause> learned;
    SolveResult r = solver.run(hook, cfg.collect_learned ? &learned : nullptr);
    r.learned = std::move(learned);
    if (r.verdict == Verdict::Sat && !r.model->satisfies(f))
        throw std::logic_error("solver returned a non-model");
    return r;
}

PropagateResult propagate(const Formula& f, const Assignment& a) {
    SolverConfig cfg;
    Cdcl solver(f, cfg);
    PropagateResult out;
    out.assignment = a;

    if (solver.empty_clause != kNoClause) {
        out.conflict_clause = static_cast<std::size_t>(solver.empty_clause) + 1;
        return out;
    }
    for (int v = 1; v <= f.num_vars(); ++v) {
        Value val = a.value(v);
        if (val == Value::Unassigned) continue;
        solver.enqueue(2 * (v - 1) + (val == Value::True ? 0 : 1), kNoClause);
    }
    int confl = solver.enqueue_units();
    if (confl == kNoClause) confl = solver.propagate_all();

    for (int v = 1; v <= f.num_vars(); ++v) {
        signed char val = solver.values[static_cast<std::size_t>(v - 1)];
        if (val != kUndef) out.assignment.set(v, val == 1);
    }
    if (confl != kNoClause) out.conflict_clause = static_cast<std::size_t>(confl) + 1;
    return out;
}

SolveResult solve_horn(const Formula& f) {
    for (const Clause& c : f.clauses()) {
        int pos = 0;
        for (Lit l : c.literals()) pos += l.is_positive();
        if (pos > 1) throw std::invalid_argument("solve_horn: clause is not Horn");
    }

    SolveResult result;
    int nv = f.num_vars();
    std::vector<signed char> values(static_cast<std::size_t>(nv) + 1, kUndef);
    std::vector<std::vector<std::size_t>> occ_pos(static_cast<std::size_t>(nv) + 1);
    std::vector<std::vector<std::size_t>> occ_neg(static_cast<std::size_t>(nv) + 1);
    std::vector<std::size_t> open_count(f.num_clauses());
    std::vector<char> satisfied(f.num_clauses(), 0);

    for (std::size_t i = 0; i < f.num_clauses(); ++i) {
        const Clause& c = f.clause(i);
        open_count[i] = c.size();
        for (Lit l : c.literals())
            (l.is_positive() ? occ_pos : occ_neg)[static_cast<std::size_t>(l.var())].push_back(i);
    }

    std::vector<Lit> queue;
    auto find_unit = [&](std::size_t ci) -> Lit {
        for (Lit l : f.clause(ci).literals())
            if (values[static_cast<std::size_t>(l.var())] == kUndef) return l;
        throw std::logic_error("no open literal in open clause");
    };

    for (std::size_t i = 0; i < f.num_clauses(); ++i) {
        if (open_count[i] == 0) {
            result.verdict = Verdict::Unsat;
            return result;
        }
        if (open_count[i] == 1) queue.push_back(find_unit(i));
    }

    std::size_t qh = 0;
    while (qh < queue.size()) {
        Lit l = queue[qh++];
        std::size_t v = static_cast<std::size_t>(l.var());
        if (values[v] != kUndef) {
            if ((values[v] == 1) != l.is_positive()) {
                result.verdict = Verdict::Unsat;
                return result;
            }
            continue;
        }
        values[v] = l.is_positive() ? 1 : 0;
        ++result.metrics.propagations;
        const auto& satisfied_occ = l.is_positive() ? occ_pos[v] : occ_neg[v];
        const auto& shrunk_occ = l.is_positive() ? occ_neg[v] : occ_pos[v];
        for (std::size_t ci : satisfied_occ) satisfied[ci] = 1;
        for (std::size_t ci : shrunk_occ) {
            if (satisfied[ci]) continue;
            if (--open_count[ci] == 0) {
                result.verdict = Verdict::Unsat;
                return result;
            }
            if (open_count[ci] == 1) queue.push_back(find_unit(ci));
        }
    }

    Assignment model(nv);
    for (int v = 1; v <= nv; ++v) model.set(v, values[static_cast<std::size_t>(v)] == 1);
    if (!model.satisfies(f)) throw std::logic_error("horn model check failed");
    result.verdict = Verdict::Sat;
    result.model = std::move(model);
    return result;
}

}  // namespace fmsat
