#include "fmsat/simplify.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fmsat {

namespace {

// Working literals are signed DIMACS codes ordered by (variable, polarity).
inline bool lit_less(int a, int b) {
    int va = a < 0 ? -a : a, vb = b < 0 ? -b : b;
    if (va != vb) return va < vb;
    return a > 0 && b < 0;
}

inline int lvar(int a) { return a < 0 ? -a : a; }

std::vector<int> normalize(std::vector<int> lits, bool* tautology) {
    std::sort(lits.begin(), lits.end(), lit_less);
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    *tautology = false;
    for (std::size_t i = 1; i < lits.size(); ++i)
        if (lvar(lits[i]) == lvar(lits[i - 1])) {
            *tautology = true;
            break;
        }
    return lits;
}

Clause to_clause(const std::vector<int>& lits) {
    std::vector<Lit> out;
    out.reserve(lits.size());
    for (int l : lits) out.emplace_back(l);
    return Clause(std::move(out));
}

struct Session {
    int nv = 0;
    std::vector<std::vector<int>> cls;  // sorted literal lists
    std::vector<char> alive;
    std::vector<ReconstructionStep> trail;
    bool unsat = false;

    explicit Session(const Formula& f) : nv(f.num_vars()) {
        cls.reserve(f.num_clauses());
        for (const Clause& c : f.clauses()) {
            if (c.is_tautology()) continue;  // never constrains anything
            std::vector<int> lits;
            lits.reserve(c.size());
            for (Lit l : c.literals()) lits.push_back(l.code());
            if (lits.empty()) unsat = true;
            cls.push_back(std::move(lits));
        }
        alive.assign(cls.size(), 1);
    }

    Formula to_formula() const {
        std::vector<Clause> out;
        for (std::size_t i = 0; i < cls.size(); ++i)
            if (alive[i]) out.push_back(to_clause(cls[i]));
        if (unsat) {
            bool has_empty = false;
            for (const Clause& c : out) has_empty |= c.empty();
            if (!has_empty) out.push_back(Clause());
        }
        return Formula(nv, std::move(out));
    }

    std::size_t live_count() const {
        std::size_t n = 0;
        for (char a : alive) n += a;
        return n;
    }

    // --- Equivalent variable substitution -------------------------------

    bool pass_substitution() {
        if (unsat) return false;
        // Implication graph over literal nodes 0..2nv-1
        // (var v: positive -> 2(v-1), negative -> 2(v-1)+1).
        auto node = [](int lit) { return 2 * (lvar(lit) - 1) + (lit < 0 ? 1 : 0); };
        std::size_t nodes = 2 * static_cast<std::size_t>(nv);
        std::vector<std::vector<int>> adj(nodes);
        bool any_binary = false;
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (!alive[i] || cls[i].size() != 2) continue;
            any_binary = true;
            int a = cls[i][0], b = cls[i][1];
            adj[static_cast<std::size_t>(node(-a))].push_back(node(b));
            adj[static_cast<std::size_t>(node(-b))].push_back(node(a));
        }
        if (!any_binary) return false;

        // Iterative Tarjan SCC.
        std::vector<int> comp(nodes, -1), low(nodes), num(nodes, -1), stk;
        std::vector<char> on_stack(nodes, 0);
        int counter = 0, comp_count = 0;
        struct Frame {
            int v;
            std::size_t edge;
        };
        std::vector<Frame> frames;
        for (std::size_t root = 0; root < nodes; ++root) {
            if (num[root] != -1) continue;
            frames.push_back({static_cast<int>(root), 0});
            while (!frames.empty()) {
                Frame& fr = frames.back();
                int v = fr.v;
                if (fr.edge == 0) {
                    num[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = counter++;
                    stk.push_back(v);
                    on_stack[static_cast<std::size_t>(v)] = 1;
                }
                bool descended = false;
                while (fr.edge < adj[static_cast<std::size_t>(v)].size()) {
                    int w = adj[static_cast<std::size_t>(v)][fr.edge++];
                    if (num[static_cast<std::size_t>(w)] == -1) {
                        frames.push_back({w, 0});
                        descended = true;
                        break;
                    }
                    if (on_stack[static_cast<std::size_t>(w)])
                        low[static_cast<std::size_t>(v)] =
                            std::min(low[static_cast<std::size_t>(v)], num[static_cast<std::size_t>(w)]);
                }
                if (descended) continue;
                if (low[static_cast<std::size_t>(v)] == num[static_cast<std::size_t>(v)]) {
                    for (;;) {
                        int w = stk.back();
                        stk.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = 0;
                        comp[static_cast<std::size_t>(w)] = comp_count;
                        if (w == v) break;
                    }
                    ++comp_count;
                }
                frames.pop_back();
                if (!frames.empty()) {
                    Frame& parent = frames.back();
                    low[static_cast<std::size_t>(parent.v)] =
                        std::min(low[static_cast<std::size_t>(parent.v)],
                                 low[static_cast<std::size_t>(v)]);
                }
            }
        }

        // Representative literal per component: the one with the smallest
        // variable (preferring positive on the impossible tie).
        std::vector<int> rep_lit(static_cast<std::size_t>(comp_count), 0);
        for (int v = 1; v <= nv; ++v) {
            for (int lit : {v, -v}) {
                int c = comp[static_cast<std::size_t>(node(lit))];
                int& r = rep_lit[static_cast<std::size_t>(c)];
                if (r == 0 || lvar(lit) < lvar(r) || (lvar(lit) == lvar(r) && lit > r)) r = lit;
            }
        }

        // A variable equivalent to its own negation is a contradiction.
        for (int v = 1; v <= nv; ++v)
            if (comp[static_cast<std::size_t>(node(v))] == comp[static_cast<std::size_t>(node(-v))]) {
                unsat = true;
                return true;
            }

        auto map_lit = [&](int lit) {
            int r = rep_lit[static_cast<std::size_t>(comp[static_cast<std::size_t>(node(lit))])];
            return r;
        };

        bool changed = false;
        std::vector<char> substituted(static_cast<std::size_t>(nv) + 1, 0);
        for (int v = 1; v <= nv; ++v) {
            int r = map_lit(v);
            if (lvar(r) != v) {
                trail.push_back(SubstitutionStep{v, Lit(r)});
                substituted[static_cast<std::size_t>(v)] = 1;
                changed = true;
            }
        }
        if (!changed) return false;

        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (!alive[i]) continue;
            bool touched = false;
            for (int l : cls[i])
                if (substituted[static_cast<std::size_t>(lvar(l))]) {
                    touched = true;
                    break;
                }
            if (!touched) continue;
            std::vector<int> lits;
            lits.reserve(cls[i].size());
            for (int l : cls[i]) lits.push_back(l > 0 ? map_lit(l) : -map_lit(-l));
            bool taut = false;
            lits = normalize(std::move(lits), &taut);
            if (taut)
                alive[i] = 0;
            else
                cls[i] = std::move(lits);
        }
        return true;
    }

    // --- Subsumption -----------------------------------------------------

    std::vector<std::vector<int>> build_occ() const {
        std::vector<std::vector<int>> occ(2 * static_cast<std::size_t>(nv) + 2);
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (!alive[i]) continue;
            for (int l : cls[i])
                occ[static_cast<std::size_t>(l > 0 ? 2 * l : -2 * l + 1)].push_back(
                    static_cast<int>(i));
        }
        return occ;
    }

    static std::size_t occ_slot(int lit) {
        return static_cast<std::size_t>(lit > 0 ? 2 * lit : -2 * lit + 1);
    }

    bool pass_subsumption() {
        if (unsat) return false;
        auto occ = build_occ();
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < cls.size(); ++i)
            if (alive[i]) order.push_back(i);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return cls[a].size() < cls[b].size();
        });

        bool changed = false;
        for (std::size_t ci : order) {
            if (!alive[ci]) continue;
            const std::vector<int>& c = cls[ci];
            if (c.empty()) continue;
            int best = c[0];
            for (int l : c)
                if (occ[occ_slot(l)].size() < occ[occ_slot(best)].size()) best = l;
            for (int di : occ[occ_slot(best)]) {
                std::size_t d = static_cast<std::size_t>(di);
                if (d == ci || !alive[d]) continue;
                const std::vector<int>& dc = cls[d];
                if (dc.size() < c.size()) continue;
                if (dc.size() == c.size() && d < ci) continue;  // equal: keep first
                if (std::includes(dc.begin(), dc.end(), c.begin(), c.end(), lit_less)) {
                    alive[d] = 0;
                    changed = true;
                }
            }
        }
        return changed;
    }

    // --- Self-subsuming resolution ----------------------------------------

    bool pass_self_subsumption() {
        if (unsat) return false;
        bool changed = false;
        bool progress = true;
        while (progress && !unsat) {
            progress = false;
            auto occ = build_occ();
            for (std::size_t ai = 0; ai < cls.size() && !unsat; ++ai) {
                if (!alive[ai]) continue;
                const std::vector<int> snapshot = cls[ai];
                for (int x : snapshot) {
                    // rest = A \ {x}
                    std::vector<int> rest;
                    rest.reserve(snapshot.size() - 1);
                    for (int l : cls[ai])
                        if (l != x) rest.push_back(l);
                    for (int di : occ[occ_slot(-x)]) {
                        std::size_t d = static_cast<std::size_t>(di);
                        if (d == ai || !alive[d]) continue;
                        std::vector<int>& dc = cls[d];
                        auto pos = std::lower_bound(dc.begin(), dc.end(), -x, lit_less);
                        if (pos == dc.end() || *pos != -x) continue;  // stale entry
                        if (!std::includes(dc.begin(), dc.end(), rest.begin(), rest.end(),
                                           lit_less))
                            continue;
                        dc.erase(pos);
                        progress = true;
                        changed = true;
                        if (dc.empty()) {
                            unsat = true;
                            break;
                        }
                    }
                    if (unsat) break;
                }
            }
        }
        return changed;
    }

    // --- Variable elimination ---------------------------------------------

    bool pass_variable_elimination() {
        if (unsat) return false;
        bool changed = false;
        // The sweep keeps going after an empty resolvent: elimination stays
        // sound on an unsatisfiable formula and later pure variables still
        // disappear within this pass.
        for (int v = 1; v <= nv; ++v) {
            std::vector<std::size_t> pos, neg;
            for (std::size_t i = 0; i < cls.size(); ++i) {
                if (!alive[i]) continue;
                for (int l : cls[i]) {
                    if (l == v) {
                        pos.push_back(i);
                        break;
                    }
                    if (l == -v) {
                        neg.push_back(i);
                        break;
                    }
                }
            }
            if (pos.empty() && neg.empty()) continue;

            std::vector<std::vector<int>> resolvents;
            for (std::size_t pi : pos) {
                for (std::size_t ni : neg) {
                    std::vector<int> r;
                    r.reserve(cls[pi].size() + cls[ni].size() - 2);
                    for (int l : cls[pi])
                        if (l != v) r.push_back(l);
                    for (int l : cls[ni])
                        if (l != -v) r.push_back(l);
                    bool taut = false;
                    r = normalize(std::move(r), &taut);
                    if (!taut) resolvents.push_back(std::move(r));
                }
            }
            std::sort(resolvents.begin(), resolvents.end(),
                      [](const std::vector<int>& a, const std::vector<int>& b) {
                          return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                                              b.end(), lit_less);
                      });
            resolvents.erase(std::unique(resolvents.begin(), resolvents.end()), resolvents.end());
            if (resolvents.size() > pos.size() + neg.size()) continue;  // budget rule

            EliminationStep step;
            step.var = v;
            for (std::size_t pi : pos) {
                step.pos.push_back(to_clause(cls[pi]));
                alive[pi] = 0;
            }
            for (std::size_t ni : neg) {
                step.neg.push_back(to_clause(cls[ni]));
                alive[ni] = 0;
            }
            trail.push_back(std::move(step));
            for (std::vector<int>& r : resolvents) {
                if (r.empty()) unsat = true;
                cls.push_back(std::move(r));
                alive.push_back(1);
            }
            changed = true;
        }
        return changed;
    }

    // --- BCP over the live clauses under temporary assumptions -------------

    // Returns true when propagation derives a conflict. `skip` is excluded
    // from propagation (the clause under test). `occ` may contain stale
    // entries; clause contents are always re-checked.
    bool probe_bcp(const std::vector<int>& assumptions, std::size_t skip,
                   const std::vector<std::vector<int>>& occ) const {
        std::vector<signed char> val(static_cast<std::size_t>(nv) + 1, -1);
        std::vector<int> queue;
        auto assign = [&](int lit) {
            std::size_t v = static_cast<std::size_t>(lvar(lit));
            signed char want = lit > 0 ? 1 : 0;
            if (val[v] != -1) return val[v] == want;
            val[v] = want;
            queue.push_back(lit);
            return true;
        };
        for (int a : assumptions)
            if (!assign(a)) return true;
        for (std::size_t i = 0; i < cls.size(); ++i)
            if (alive[i] && i != skip && cls[i].size() == 1)
                if (!assign(cls[i][0])) return true;

        // Queue-driven: recheck clauses containing the falsified literal.
        std::size_t qh = 0;
        while (qh < queue.size()) {
            int p = queue[qh++];
            for (int di : occ[occ_slot(-p)]) {
                std::size_t d = static_cast<std::size_t>(di);
                if (!alive[d] || d == skip) continue;
                int unassigned = 0, last = 0;
                bool sat = false;
                for (int l : cls[d]) {
                    signed char x = val[static_cast<std::size_t>(lvar(l))];
                    if (x == -1) {
                        ++unassigned;
                        last = l;
                    } else if ((x == 1) == (l > 0)) {
                        sat = true;
                        break;
                    }
                }
                if (sat) continue;
                if (unassigned == 0) return true;
                if (unassigned == 1 && !assign(last)) return true;
            }
        }
        return false;
    }

    // --- Asymmetric branching ----------------------------------------------

    bool pass_asymmetric_branching() {
        if (unsat) return false;
        bool changed = false;
        auto occ = build_occ();
        for (std::size_t ci = 0; ci < cls.size() && !unsat; ++ci) {
            if (!alive[ci]) continue;
            const std::vector<int> snapshot = cls[ci];
            for (int x : snapshot) {
                std::vector<int> assumptions;
                assumptions.reserve(cls[ci].size() - 1);
                for (int l : cls[ci])
                    if (l != x) assumptions.push_back(-l);
                if (!probe_bcp(assumptions, ci, occ)) continue;
                // The other clauses imply the clause minus x; shorten it.
                std::vector<int>& c = cls[ci];
                c.erase(std::find(c.begin(), c.end(), x));
                changed = true;
                if (c.empty()) {
                    unsat = true;
                    break;
                }
            }
        }
        return changed;
    }

    // --- RCheck -------------------------------------------------------------

    bool pass_rcheck() {
        if (unsat) return false;
        bool changed = false;
        auto occ = build_occ();
        for (std::size_t ci = 0; ci < cls.size(); ++ci) {
            if (!alive[ci] || cls[ci].size() < 2) continue;  // units are kept
            std::vector<int> assumptions;
            assumptions.reserve(cls[ci].size());
            for (int l : cls[ci]) assumptions.push_back(-l);
            if (probe_bcp(assumptions, ci, occ)) {
                alive[ci] = 0;
                changed = true;
            }
        }
        return changed;
    }

    // --- BCP simplification --------------------------------------------------

    bool pass_bcp(std::vector<Lit>* forced_out = nullptr) {
        if (unsat) return false;
        bool changed = false;
        for (;;) {
            int unit = 0;
            for (std::size_t i = 0; i < cls.size(); ++i)
                if (alive[i] && cls[i].size() == 1) {
                    unit = cls[i][0];
                    break;
                }
            if (unit == 0) break;
            changed = true;
            trail.push_back(ForcedLiteralStep{Lit(unit)});
            if (forced_out) forced_out->push_back(Lit(unit));
            for (std::size_t i = 0; i < cls.size(); ++i) {
                if (!alive[i]) continue;
                std::vector<int>& c = cls[i];
                if (std::find(c.begin(), c.end(), unit) != c.end()) {
                    alive[i] = 0;
                    continue;
                }
                auto it = std::find(c.begin(), c.end(), -unit);
                if (it != c.end()) {
                    c.erase(it);
                    if (c.empty()) {
                        unsat = true;
                        return true;
                    }
                }
            }
        }
        return changed;
    }
};

}  // namespace

std::pair<Formula, std::vector<ReconstructionStep>> equiv_var_substitution(const Formula& f) {
    Session s(f);
    s.pass_substitution();
    return {s.to_formula(), std::move(s.trail)};
}

Formula subsumption(const Formula& f) {
    Session s(f);
    s.pass_subsumption();
    return s.to_formula();
}

Formula self_subsuming_resolution(const Formula& f) {
    Session s(f);
    s.pass_self_subsumption();
    return s.to_formula();
}

std::pair<Formula, std::vector<ReconstructionStep>> variable_elimination(const Formula& f) {
    Session s(f);
    s.pass_variable_elimination();
    return {s.to_formula(), std::move(s.trail)};
}

Formula asymmetric_branching(const Formula& f) {
    Session s(f);
    s.pass_asymmetric_branching();
    return s.to_formula();
}

Formula rcheck(const Formula& f) {
    Session s(f);
    s.pass_rcheck();
    return s.to_formula();
}

BcpResult bcp_simplify(const Formula& f) {
    Session s(f);
    BcpResult r;
    s.pass_bcp(&r.forced);
    r.formula = s.to_formula();
    r.unsat = s.unsat;
    return r;
}

CoreResult simplify_fixed_point(const Formula& f, int max_passes) {
    Session s(f);
    CoreResult result;
    for (int pass = 1; pass <= max_passes; ++pass) {
        result.passes_used = pass;
        bool changed = false;
        changed |= s.pass_substitution();
        changed |= s.pass_subsumption();
        changed |= s.pass_self_subsumption();
        changed |= s.pass_variable_elimination();
        changed |= s.pass_asymmetric_branching();
        changed |= s.pass_rcheck();
        changed |= s.pass_bcp();
        if (s.unsat || !changed) break;
    }
    result.core = s.to_formula();
    result.trail = std::move(s.trail);
    if (s.unsat)
        result.verdict_sat = false;
    else if (result.core.num_clauses() == 0)
        result.verdict_sat = true;
    return result;
}

Assignment reconstruct_model(const Assignment& core_model,
                             const std::vector<ReconstructionStep>& trail,
                             const Formula& original) {
    Assignment full(original.num_vars());
    for (int v = 1; v <= original.num_vars(); ++v)
        full.set(v, core_model.num_vars() >= v && core_model.value(v) == Value::True);

    auto clause_satisfied_without = [&](const Clause& c, int var) {
        for (Lit l : c.literals()) {
            if (l.var() == var) continue;
            if (full.value_of(l) == Value::True) return true;
        }
        return false;
    };

    for (auto it = trail.rbegin(); it != trail.rend(); ++it) {
        if (const auto* forced = std::get_if<ForcedLiteralStep>(&*it)) {
            full.set(forced->lit.var(), forced->lit.is_positive());
        } else if (const auto* sub = std::get_if<SubstitutionStep>(&*it)) {
            bool rep_true = full.value_of(sub->rep) == Value::True;
            full.set(sub->var, rep_true);
        } else if (const auto* elim = std::get_if<EliminationStep>(&*it)) {
            // v = true satisfies every positive clause; it is safe exactly
            // when each negative clause is satisfied by its other literals.
            bool neg_ok = true;
            for (const Clause& c : elim->neg)
                if (!clause_satisfied_without(c, elim->var)) {
                    neg_ok = false;
                    break;
                }
            full.set(elim->var, neg_ok);
        }
    }

    if (!full.satisfies(original))
        throw std::logic_error("reconstructed model does not satisfy the original formula");
    return full;
}

}  // namespace fmsat
