#include "fmsat/formula.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace fmsat {

Lit::Lit(int dimacs_code) : code_(dimacs_code) {
    if (code_ == 0) throw std::invalid_argument("literal code must be non-zero");
}

Lit Lit::negated() const {
    Lit l;
    l.code_ = -code_;
    return l;
}

Clause::Clause(std::vector<Lit> lits) : lits_(std::move(lits)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
    for (std::size_t i = 1; i < lits_.size(); ++i)
        if (lits_[i].var() == lits_[i - 1].var()) {
            tautology_ = true;
            break;
        }
}

bool Clause::contains(Lit l) const {
    return std::binary_search(lits_.begin(), lits_.end(), l,
                              [](Lit a, Lit b) { return a < b; });
}

Formula::Formula(int num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
    if (num_vars_ < 0) throw std::invalid_argument("negative variable count");
    for (const Clause& c : clauses_)
        for (Lit l : c.literals())
            if (l.var() > num_vars_)
                throw std::invalid_argument("literal variable exceeds num_vars");
}

bool Assignment::is_complete() const {
    for (std::size_t v = 1; v < vals_.size(); ++v)
        if (vals_[v] == Value::Unassigned) return false;
    return true;
}

int Assignment::num_assigned() const {
    int n = 0;
    for (std::size_t v = 1; v < vals_.size(); ++v)
        if (vals_[v] != Value::Unassigned) ++n;
    return n;
}

Value Assignment::value_of(Lit l) const {
    Value v = value(l.var());
    if (v == Value::Unassigned) return v;
    bool t = (v == Value::True) == l.is_positive();
    return t ? Value::True : Value::False;
}

bool Assignment::satisfies(const Clause& c) const {
    for (Lit l : c.literals())
        if (value_of(l) == Value::True) return true;
    return false;
}

bool Assignment::satisfies(const Formula& f) const {
    for (const Clause& c : f.clauses())
        if (!satisfies(c)) return false;
    return true;
}

ClauseClass classify_clause(const Clause& c) {
    int pos = 0, neg = 0;
    for (Lit l : c.literals()) (l.is_positive() ? pos : neg)++;
    ClauseClass k;
    k.horn = pos <= 1;
    k.anti_horn = neg <= 1;
    k.binary = c.size() == 2;
    k.other = !k.horn && !k.anti_horn && !k.binary;
    return k;
}

StatsReport formula_stats(const Formula& f) {
    StatsReport r;
    r.num_vars = f.num_vars();
    r.num_clauses = f.num_clauses();

    if (r.num_clauses > 0) {
        std::size_t horn = 0, anti = 0, binary = 0, other = 0;
        for (const Clause& c : f.clauses()) {
            ClauseClass k = classify_clause(c);
            horn += k.horn;
            anti += k.anti_horn;
            binary += k.binary;
            other += k.other;
        }
        double m = static_cast<double>(r.num_clauses);
        r.pct_horn = 100.0 * static_cast<double>(horn) / m;
        r.pct_anti_horn = 100.0 * static_cast<double>(anti) / m;
        r.pct_binary = 100.0 * static_cast<double>(binary) / m;
        r.pct_other = 100.0 * static_cast<double>(other) / m;
    }

    if (r.num_vars > 0 && r.num_clauses > 0) {
        // Pure = occurs in exactly one polarity (unused variables are not pure).
        std::vector<std::uint8_t> seen(static_cast<std::size_t>(r.num_vars) + 1, 0);
        for (const Clause& c : f.clauses())
            for (Lit l : c.literals())
                seen[static_cast<std::size_t>(l.var())] |= l.is_positive() ? 1 : 2;
        int pure = 0;
        for (int v = 1; v <= r.num_vars; ++v)
            if (seen[static_cast<std::size_t>(v)] == 1 || seen[static_cast<std::size_t>(v)] == 2)
                ++pure;
        r.pct_pure_vars = 100.0 * pure / r.num_vars;
    }
    return r;
}

int active_var_count(const Formula& f) {
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(f.num_vars()) + 1, 0);
    for (const Clause& c : f.clauses())
        for (Lit l : c.literals()) seen[static_cast<std::size_t>(l.var())] = 1;
    int n = 0;
    for (int v = 1; v <= f.num_vars(); ++v) n += seen[static_cast<std::size_t>(v)];
    return n;
}

Clause make_clause(std::initializer_list<int> dimacs_lits) {
    std::vector<Lit> lits;
    lits.reserve(dimacs_lits.size());
    for (int c : dimacs_lits) lits.emplace_back(c);
    return Clause(std::move(lits));
}

Clause make_clause(const std::vector<int>& dimacs_lits) {
    std::vector<Lit> lits;
    lits.reserve(dimacs_lits.size());
    for (int c : dimacs_lits) lits.emplace_back(c);
    return Clause(std::move(lits));
}

Formula make_formula(int num_vars, std::initializer_list<std::vector<int>> clauses) {
    std::vector<Clause> cs;
    cs.reserve(clauses.size());
    for (const auto& c : clauses) cs.push_back(make_clause(c));
    return Formula(num_vars, std::move(cs));
}

std::string format_pct(const std::optional<double>& pct) {
    if (!pct) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *pct);
    return buf;
}

}  // namespace fmsat
