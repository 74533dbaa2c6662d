#include "fmsat/feature_model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "json.hpp"

namespace fmsat {

using nlohmann::ordered_json;

ExprPtr make_ref(std::string name, bool primed) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Ref;
    e->name = std::move(name);
    e->primed = primed;
    return e;
}

ExprPtr make_not(ExprPtr inner) {
    auto e = std::make_shared<Expr>();
    e->op = ExprOp::Not;
    e->lhs = std::move(inner);
    return e;
}

ExprPtr make_binary(ExprOp op, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

namespace {

struct ConstraintParser {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(const std::string& tok) {
        skip_ws();
        if (text.compare(pos, tok.size(), tok) == 0) {
            pos += tok.size();
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw FmError("constraint parse error at offset " + std::to_string(pos) + ": " + msg +
                      " in \"" + text + "\"");
    }

    ExprPtr parse() {
        ExprPtr e = parse_iff();
        skip_ws();
        if (pos != text.size()) fail("trailing input");
        return e;
    }

    ExprPtr parse_iff() {
        ExprPtr e = parse_implies();
        while (eat("<=>")) e = make_binary(ExprOp::Iff, e, parse_implies());
        return e;
    }

    ExprPtr parse_implies() {
        ExprPtr e = parse_or();
        if (eat("=>")) return make_binary(ExprOp::Implies, e, parse_implies());
        return e;
    }

    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        for (;;) {
            skip_ws();
            // '|' but not part of another token
            if (pos < text.size() && text[pos] == '|') {
                ++pos;
                e = make_binary(ExprOp::Or, e, parse_and());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_and() {
        ExprPtr e = parse_unary();
        for (;;) {
            skip_ws();
            if (pos < text.size() && text[pos] == '&') {
                ++pos;
                e = make_binary(ExprOp::And, e, parse_unary());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_unary() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        char c = text[pos];
        if (c == '!') {
            ++pos;
            return make_not(parse_unary());
        }
        if (c == '(') {
            ++pos;
            ExprPtr e = parse_iff();
            skip_ws();
            if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
            ++pos;
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            std::string name = text.substr(start, pos - start);
            bool primed = false;
            if (pos < text.size() && text[pos] == '\'') {
                primed = true;
                ++pos;
            }
            return make_ref(std::move(name), primed);
        }
        fail("unexpected character");
    }
};

int precedence(ExprOp op) {
    switch (op) {
        case ExprOp::Iff: return 0;
        case ExprOp::Implies: return 1;
        case ExprOp::Or: return 2;
        case ExprOp::And: return 3;
        case ExprOp::Not: return 4;
        case ExprOp::Ref: return 5;
    }
    return 5;
}

void print_expr(const ExprPtr& e, int parent_prec, std::string& out) {
    int prec = precedence(e->op);
    bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (e->op) {
        case ExprOp::Ref:
            out += e->name;
            if (e->primed) out += '\'';
            break;
        case ExprOp::Not:
            out += '!';
            print_expr(e->lhs, precedence(ExprOp::Not), out);
            break;
        case ExprOp::And:
            print_expr(e->lhs, prec, out);
            out += " & ";
            print_expr(e->rhs, prec + 1, out);
            break;
        case ExprOp::Or:
            print_expr(e->lhs, prec, out);
            out += " | ";
            print_expr(e->rhs, prec + 1, out);
            break;
        case ExprOp::Implies:
            print_expr(e->lhs, prec + 1, out);  // right-assoc
            out += " => ";
            print_expr(e->rhs, prec, out);
            break;
        case ExprOp::Iff:
            print_expr(e->lhs, prec, out);
            out += " <=> ";
            print_expr(e->rhs, prec + 1, out);
            break;
    }
    if (parens) out += ')';
}

}  // namespace

ExprPtr parse_constraint(const std::string& text) {
    ConstraintParser p{text};
    return p.parse();
}

std::string constraint_to_string(const ExprPtr& e) {
    std::string out;
    print_expr(e, 0, out);
    return out;
}

bool evaluate(const ExprPtr& e, const std::function<bool(const std::string&, bool)>& lookup) {
    switch (e->op) {
        case ExprOp::Ref: return lookup(e->name, e->primed);
        case ExprOp::Not: return !evaluate(e->lhs, lookup);
        case ExprOp::And: return evaluate(e->lhs, lookup) && evaluate(e->rhs, lookup);
        case ExprOp::Or: return evaluate(e->lhs, lookup) || evaluate(e->rhs, lookup);
        case ExprOp::Implies: return !evaluate(e->lhs, lookup) || evaluate(e->rhs, lookup);
        case ExprOp::Iff: return evaluate(e->lhs, lookup) == evaluate(e->rhs, lookup);
    }
    throw FmError("bad expression node");
}

namespace {

Feature parse_feature(const ordered_json& j, bool is_root) {
    if (!j.is_object()) throw FmError("feature must be a JSON object");
    Feature f;
    if (!j.contains("name") || !j["name"].is_string())
        throw FmError("feature is missing a string \"name\"");
    f.name = j["name"].get<std::string>();

    if (j.contains("kind")) {
        std::string k = j["kind"].get<std::string>();
        if (k == "boolean")
            f.kind = FeatureKind::Boolean;
        else if (k == "tristate")
            f.kind = FeatureKind::Tristate;
        else
            throw FmError("feature " + f.name + ": unknown kind \"" + k + "\"");
    }

    if (is_root) {
        if (j.contains("relation") && !j["relation"].is_null())
            throw FmError("root feature must not declare a relation");
    } else {
        if (!j.contains("relation") || !j["relation"].is_string())
            throw FmError("feature " + f.name + ": missing relation");
        std::string r = j["relation"].get<std::string>();
        if (r == "mandatory")
            f.relation = ChildRelation::Mandatory;
        else if (r == "optional")
            f.relation = ChildRelation::Optional;
        else
            throw FmError("feature " + f.name + ": unknown relation \"" + r + "\"");
    }

    if (j.contains("group") && !j["group"].is_null()) {
        std::string g = j["group"].get<std::string>();
        if (g == "or")
            f.group = GroupKind::Or;
        else if (g == "alternative")
            f.group = GroupKind::Alternative;
        else
            throw FmError("feature " + f.name + ": unknown group \"" + g + "\"");
    }

    if (j.contains("children")) {
        if (!j["children"].is_array()) throw FmError("children must be an array");
        for (const auto& cj : j["children"]) f.children.push_back(parse_feature(cj, false));
    }
    if (f.group != GroupKind::None && f.children.size() < 2)
        throw FmError("feature " + f.name + ": group requires at least 2 children");
    return f;
}

void walk(const Feature& f, const std::function<void(const Feature&)>& fn) {
    fn(f);
    for (const Feature& c : f.children) walk(c, fn);
}

void collect_refs(const ExprPtr& e, std::vector<const Expr*>& out) {
    if (e->op == ExprOp::Ref) {
        out.push_back(e.get());
        return;
    }
    if (e->lhs) collect_refs(e->lhs, out);
    if (e->rhs) collect_refs(e->rhs, out);
}

ordered_json feature_to_json(const Feature& f, bool is_root) {
    ordered_json j;
    j["name"] = f.name;
    j["kind"] = f.kind == FeatureKind::Tristate ? "tristate" : "boolean";
    if (!is_root) j["relation"] = f.relation == ChildRelation::Mandatory ? "mandatory" : "optional";
    if (f.group != GroupKind::None)
        j["group"] = f.group == GroupKind::Or ? "or" : "alternative";
    if (!f.children.empty()) {
        ordered_json arr = ordered_json::array();
        for (const Feature& c : f.children) arr.push_back(feature_to_json(c, false));
        j["children"] = arr;
    }
    return j;
}

}  // namespace

FeatureModel parse_fm(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        throw FmError(std::string("invalid JSON: ") + e.what());
    }

    FeatureModel fm;
    fm.root = parse_feature(j, true);

    std::map<std::string, FeatureKind> kinds;
    walk(fm.root, [&](const Feature& f) {
        if (kinds.count(f.name)) throw FmError("duplicate feature name " + f.name);
        kinds[f.name] = f.kind;
    });

    if (j.contains("constraints")) {
        if (!j["constraints"].is_array()) throw FmError("constraints must be an array");
        for (const auto& cj : j["constraints"]) {
            if (!cj.is_string()) throw FmError("constraints must be expression strings");
            fm.constraints.push_back(parse_constraint(cj.get<std::string>()));
        }
    }

    for (const ExprPtr& c : fm.constraints) {
        std::vector<const Expr*> refs;
        collect_refs(c, refs);
        for (const Expr* r : refs) {
            auto it = kinds.find(r->name);
            if (it == kinds.end())
                throw FmError("constraint references unknown feature " + r->name);
            if (r->primed && it->second != FeatureKind::Tristate)
                throw FmError("constraint references " + r->name +
                              "' but the feature is not tristate");
        }
    }
    return fm;
}

std::string write_fm(const FeatureModel& fm) {
    ordered_json j = feature_to_json(fm.root, true);
    ordered_json arr = ordered_json::array();
    for (const ExprPtr& c : fm.constraints) arr.push_back(constraint_to_string(c));
    j["constraints"] = arr;
    return j.dump(2) + "\n";
}

std::vector<int> VarMap::feature_vars() const {
    std::vector<int> vars;
    for (const auto& [name, v] : presence) vars.push_back(v);
    for (const auto& [name, v] : static_var) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    return vars;
}

int VarMap::var_of(const std::string& name, bool primed) const {
    const auto& m = primed ? static_var : presence;
    auto it = m.find(name);
    if (it == m.end()) throw FmError("no variable for feature " + name);
    return it->second;
}

namespace {

struct Encoder {
    VarMap map;
    std::vector<Clause> clauses;
    int next_var = 1;

    int fresh_aux() {
        int v = next_var++;
        map.aux.push_back(v);
        return v;
    }

    void assign_vars(const Feature& f) {
        if (map.presence.count(f.name)) throw FmError("duplicate feature name " + f.name);
        map.presence[f.name] = next_var++;
        if (f.kind == FeatureKind::Tristate) map.static_var[f.name] = next_var++;
        for (const Feature& c : f.children) assign_vars(c);
    }

    void emit(std::initializer_list<int> lits) {
        std::vector<Lit> v;
        v.reserve(lits.size());
        for (int l : lits) v.emplace_back(l);
        clauses.push_back(Clause(std::move(v)));
    }

    void structural(const Feature& f) {
        int p = map.presence.at(f.name);
        if (f.kind == FeatureKind::Tristate) {
            // The pair only admits static / module / absent.
            emit({p, -map.static_var.at(f.name)});
        }
        std::vector<int> group_lits{-p};
        for (const Feature& c : f.children) {
            int cv = map.presence.at(c.name);
            emit({-cv, p});
            if (c.relation == ChildRelation::Mandatory) emit({-p, cv});
            group_lits.push_back(cv);
        }
        if (f.group != GroupKind::None) {
            std::vector<Lit> lits;
            for (int l : group_lits) lits.emplace_back(l);
            clauses.push_back(Clause(std::move(lits)));
            if (f.group == GroupKind::Alternative) {
                for (std::size_t i = 0; i < f.children.size(); ++i)
                    for (std::size_t j = i + 1; j < f.children.size(); ++j)
                        emit({-map.presence.at(f.children[i].name),
                              -map.presence.at(f.children[j].name)});
            }
        }
        for (const Feature& c : f.children) structural(c);
    }

    int ref_lit(const Expr& e) const { return map.var_of(e.name, e.primed); }

    // Gathers the operands of a same-op chain (And/Or).
    void flatten(const ExprPtr& e, ExprOp op, std::vector<ExprPtr>& out) {
        if (e->op == op) {
            flatten(e->lhs, op, out);
            flatten(e->rhs, op, out);
        } else {
            out.push_back(e);
        }
    }

    bool is_literal(const ExprPtr& e) const {
        return e->op == ExprOp::Ref || (e->op == ExprOp::Not && e->lhs->op == ExprOp::Ref);
    }

    int literal_code(const ExprPtr& e) const {
        if (e->op == ExprOp::Ref) return ref_lit(*e);
        return -ref_lit(*e->lhs);
    }

    // Tseitin encoding with full biconditional definitions, so auxiliary
    // variables are functions of the feature variables and projected counts
    // are preserved.
    int encode_node(const ExprPtr& e) {
        switch (e->op) {
            case ExprOp::Ref: return ref_lit(*e);
            case ExprOp::Not: return -encode_node(e->lhs);
            case ExprOp::And:
            case ExprOp::Or: {
                std::vector<ExprPtr> parts;
                flatten(e, e->op, parts);
                std::vector<int> lits;
                lits.reserve(parts.size());
                for (const ExprPtr& p : parts) lits.push_back(encode_node(p));
                int t = fresh_aux();
                if (e->op == ExprOp::And) {
                    std::vector<int> big{t};
                    for (int l : lits) {
                        emit({-t, l});
                        big.push_back(-l);
                    }
                    emit_vec(big);
                } else {
                    std::vector<int> big{-t};
                    for (int l : lits) {
                        emit({t, -l});
                        big.push_back(l);
                    }
                    emit_vec(big);
                }
                return t;
            }
            case ExprOp::Implies: {
                int a = encode_node(e->lhs), b = encode_node(e->rhs);
                int t = fresh_aux();
                emit({-t, -a, b});
                emit({t, a});
                emit({t, -b});
                return t;
            }
            case ExprOp::Iff: {
                int a = encode_node(e->lhs), b = encode_node(e->rhs);
                int t = fresh_aux();
                emit({-t, -a, b});
                emit({-t, a, -b});
                emit({t, a, b});
                emit({t, -a, -b});
                return t;
            }
        }
        throw FmError("bad expression node");
    }

    void emit_vec(const std::vector<int>& lits) {
        std::vector<Lit> v;
        v.reserve(lits.size());
        for (int l : lits) v.emplace_back(l);
        clauses.push_back(Clause(std::move(v)));
    }

    // Asserts a constraint, flattening conjunctions and plain literal
    // disjunctions so that clause-shaped constraints stay clauses.
    void assert_expr(const ExprPtr& e) {
        if (e->op == ExprOp::And) {
            assert_expr(e->lhs);
            assert_expr(e->rhs);
            return;
        }
        if (is_literal(e)) {
            emit({literal_code(e)});
            return;
        }
        if (e->op == ExprOp::Or) {
            std::vector<ExprPtr> parts;
            flatten(e, ExprOp::Or, parts);
            bool all_literals = true;
            for (const ExprPtr& p : parts) all_literals &= is_literal(p);
            if (all_literals) {
                std::vector<int> lits;
                lits.reserve(parts.size());
                for (const ExprPtr& p : parts) lits.push_back(literal_code(p));
                emit_vec(lits);
                return;
            }
        }
        emit({encode_node(e)});
    }
};

}  // namespace

std::pair<Formula, VarMap> encode_fm(const FeatureModel& fm) {
    Encoder enc;
    enc.assign_vars(fm.root);

    enc.emit({enc.map.presence.at(fm.root.name)});
    enc.structural(fm.root);
    for (const ExprPtr& c : fm.constraints) enc.assert_expr(c);

    enc.map.num_vars = enc.next_var - 1;
    return {Formula(enc.map.num_vars, std::move(enc.clauses)), std::move(enc.map)};
}

double ctcr(const FeatureModel& fm) {
    std::set<std::string> mentioned;
    for (const ExprPtr& c : fm.constraints) {
        std::vector<const Expr*> refs;
        collect_refs(c, refs);
        for (const Expr* r : refs) mentioned.insert(r->name);
    }
    int total = feature_count(fm.root);
    if (total == 0) return 0.0;
    return static_cast<double>(mentioned.size()) / total;
}

int feature_count(const Feature& root) {
    int n = 0;
    walk(root, [&](const Feature&) { ++n; });
    return n;
}

}  // namespace fmsat
