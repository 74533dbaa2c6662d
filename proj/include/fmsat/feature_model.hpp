#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fmsat/formula.hpp"

namespace fmsat {

class FmError : public std::runtime_error {
  public:
    explicit FmError(const std::string& what) : std::runtime_error(what) {}
};

enum class FeatureKind { Boolean, Tristate };
enum class ChildRelation { Mandatory, Optional };
enum class GroupKind { None, Or, Alternative };

struct Feature {
    std::string name;
    FeatureKind kind = FeatureKind::Boolean;
    ChildRelation relation = ChildRelation::Optional;  // ignored on the root
    GroupKind group = GroupKind::None;
    std::vector<Feature> children;
};

/// Cross-tree constraint expression. A Ref with primed=true names the static
/// variable of a tristate feature (written `Name'` in the text grammar).
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprOp { Ref, Not, And, Or, Implies, Iff };

struct Expr {
    ExprOp op;
    std::string name;  // Ref only
    bool primed = false;
    ExprPtr lhs, rhs;  // Not uses lhs only
};

ExprPtr make_ref(std::string name, bool primed = false);
ExprPtr make_not(ExprPtr e);
ExprPtr make_binary(ExprOp op, ExprPtr a, ExprPtr b);

/// Grammar (loosest binding first): `<=>` left-assoc, `=>` right-assoc,
/// `|`, `&`, then `!`, parentheses, and identifiers with an optional `'`.
ExprPtr parse_constraint(const std::string& text);
std::string constraint_to_string(const ExprPtr& e);

bool evaluate(const ExprPtr& e, const std::function<bool(const std::string&, bool)>& lookup);

struct FeatureModel {
    Feature root;
    std::vector<ExprPtr> constraints;
};

FeatureModel parse_fm(const std::string& json_text);
std::string write_fm(const FeatureModel& fm);

/// Feature-name to CNF-variable mapping produced by the encoder. Tristate
/// features occupy two variables: presence and static (presence first).
struct VarMap {
    std::map<std::string, int> presence;
    std::map<std::string, int> static_var;
    std::vector<int> aux;  // Tseitin auxiliaries
    int num_vars = 0;

    std::vector<int> feature_vars() const;
    int var_of(const std::string& name, bool primed) const;
};

/// Standard feature-model encoding: unit clause for the root, child->parent
/// implications, mandatory/or/alternative group clauses, (a v !a') for
/// tristate features, and Tseitin-transformed cross-tree constraints.
std::pair<Formula, VarMap> encode_fm(const FeatureModel& fm);

/// Cross-tree constraint ratio: fraction of features mentioned in constraints.
double ctcr(const FeatureModel& fm);

int feature_count(const Feature& root);

}  // namespace fmsat
