#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fmsat {

/// A propositional literal over a 1-based variable index, stored as its
/// signed DIMACS code (+v or -v, never 0).
class Lit {
  public:
    Lit() = default;
    explicit Lit(int dimacs_code);

    static Lit positive(int var) { return Lit(var); }
    static Lit negative(int var) { return Lit(-var); }

    int var() const { return code_ < 0 ? -code_ : code_; }
    bool is_positive() const { return code_ > 0; }
    int code() const { return code_; }
    Lit negated() const;

    bool operator==(const Lit&) const = default;
    // Sort order: by variable, positive polarity first.
    bool operator<(const Lit& o) const {
        if (var() != o.var()) return var() < o.var();
        return is_positive() && !o.is_positive();
    }

  private:
    int code_ = 0;
};

/// A normalized clause: literals sorted by (variable, polarity) with
/// duplicates removed. A clause that contains some variable in both
/// polarities is kept but flagged as a tautology.
class Clause {
  public:
    Clause() = default;
    explicit Clause(std::vector<Lit> lits);

    std::span<const Lit> literals() const { return lits_; }
    std::size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }
    bool is_tautology() const { return tautology_; }
    bool contains(Lit l) const;

    bool operator==(const Clause&) const = default;

  private:
    std::vector<Lit> lits_;
    bool tautology_ = false;
};

/// CNF clause database over variables 1..num_vars. Immutable after
/// construction and safe to share across threads.
class Formula {
  public:
    Formula() = default;
    Formula(int num_vars, std::vector<Clause> clauses);

    int num_vars() const { return num_vars_; }
    std::size_t num_clauses() const { return clauses_.size(); }
    const std::vector<Clause>& clauses() const { return clauses_; }
    const Clause& clause(std::size_t i) const { return clauses_[i]; }

    bool operator==(const Formula&) const = default;

  private:
    int num_vars_ = 0;
    std::vector<Clause> clauses_;
};

enum class Value : std::uint8_t { False = 0, True = 1, Unassigned = 2 };

/// Tri-state assignment over variables 1..num_vars.
class Assignment {
  public:
    Assignment() = default;
    explicit Assignment(int num_vars)
        : vals_(static_cast<std::size_t>(num_vars) + 1, Value::Unassigned) {}

    int num_vars() const { return static_cast<int>(vals_.size()) - 1; }
    Value value(int var) const { return vals_[static_cast<std::size_t>(var)]; }
    void set(int var, bool v) {
        vals_[static_cast<std::size_t>(var)] = v ? Value::True : Value::False;
    }
    void unset(int var) { vals_[static_cast<std::size_t>(var)] = Value::Unassigned; }

    bool is_assigned(int var) const { return value(var) != Value::Unassigned; }
    bool is_complete() const;
    int num_assigned() const;

    /// True/False when the literal's variable is assigned, Unassigned otherwise.
    Value value_of(Lit l) const;
    bool satisfies(Lit l) const { return value_of(l) == Value::True; }
    /// A clause is satisfied iff some literal evaluates to true.
    bool satisfies(const Clause& c) const;
    bool satisfies(const Formula& f) const;

    bool operator==(const Assignment&) const = default;

  private:
    std::vector<Value> vals_;
};

/// Clause classes per the standard definitions: Horn = at most one positive
/// literal, anti-Horn = at most one negative literal, binary = exactly two
/// literals. The classes overlap; "other" means none of the three.
struct ClauseClass {
    bool horn = false;
    bool anti_horn = false;
    bool binary = false;
    bool other = false;
};

ClauseClass classify_clause(const Clause& c);

/// Clause-class percentages over the clause list plus the pure-variable
/// percentage over 1..num_vars. Percentages are absent ("NA") when the
/// formula has no clauses (no variables, for purity).
struct StatsReport {
    int num_vars = 0;
    std::size_t num_clauses = 0;
    std::optional<double> pct_horn;
    std::optional<double> pct_anti_horn;
    std::optional<double> pct_binary;
    std::optional<double> pct_other;
    std::optional<double> pct_pure_vars;
};

StatsReport formula_stats(const Formula& f);

/// Number of variables that occur in at least one clause.
int active_var_count(const Formula& f);

// Construction helpers used heavily by tests and generators.
Clause make_clause(std::initializer_list<int> dimacs_lits);
Clause make_clause(const std::vector<int>& dimacs_lits);
Formula make_formula(int num_vars, std::initializer_list<std::vector<int>> clauses);

/// Formats an optional percentage with two decimals, or "NA".
std::string format_pct(const std::optional<double>& pct);

}  // namespace fmsat
