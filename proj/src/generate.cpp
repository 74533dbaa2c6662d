#include "fmsat/generate.hpp"

#include <cmath>
#include <stdexcept>

namespace fmsat {

std::uint64_t split_mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return split_mix64(split_mix64(seed ^ split_mix64(a)) ^ split_mix64(~b));
}

int GenSpec::clause_count() const {
    if (density) return static_cast<int>(std::llround(*density * n));
    return m;
}

namespace {

std::vector<int> draw_clause(SplitMix64& rng, int n, int k) {
    std::vector<int> lits;
    lits.reserve(static_cast<std::size_t>(k));
    std::vector<int> vars;
    vars.reserve(static_cast<std::size_t>(k));
    while (static_cast<int>(vars.size()) < k) {
        int v = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        bool dup = false;
        for (int u : vars) dup |= u == v;
        if (dup) continue;
        vars.push_back(v);
        lits.push_back(rng.next_below(2) ? -v : v);
    }
    return lits;
}

bool is_horn_lits(const std::vector<int>& lits) {
    int pos = 0;
    for (int l : lits) pos += l > 0;
    return pos <= 1;
}

}  // namespace

Formula random_ksat(const GenSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("random_ksat: need at least one variable");
    if (spec.k < 1 || spec.k > spec.n)
        throw std::invalid_argument("random_ksat: clause width must satisfy 1 <= k <= n");
    int m = spec.clause_count();
    if (m < 0) throw std::invalid_argument("random_ksat: negative clause count");

    SplitMix64 rng(spec.seed);
    std::vector<Clause> clauses;
    clauses.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) clauses.push_back(make_clause(draw_clause(rng, spec.n, spec.k)));
    return Formula(spec.n, std::move(clauses));
}

Formula random_ksat_horn_mix(const GenSpec& spec) {
    if (spec.k != 3) throw std::invalid_argument("horn mix is defined for 3-SAT only");
    if (!spec.horn_fraction || *spec.horn_fraction < 0.0 || *spec.horn_fraction > 1.0)
        throw std::invalid_argument("horn_fraction must lie in [0,1]");
    if (spec.n < 3) throw std::invalid_argument("horn mix: need n >= 3");
    int m = spec.clause_count();
    int horn_slots = static_cast<int>(std::ceil(*spec.horn_fraction * m - 1e-9));

    SplitMix64 rng(spec.seed);
    std::vector<Clause> clauses;
    clauses.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        bool want_horn = i < horn_slots;
        std::vector<int> lits;
        do {
            lits = draw_clause(rng, spec.n, 3);
        } while (is_horn_lits(lits) != want_horn);
        clauses.push_back(make_clause(lits));
    }
    return Formula(spec.n, std::move(clauses));
}

FeatureModel generate_hard_fm(const GenSpec& spec, int tree_arity) {
    if (tree_arity < 2) throw std::invalid_argument("tree arity must be at least 2");
    Formula cnf = random_ksat(spec);

    std::vector<Feature> layer;
    layer.reserve(static_cast<std::size_t>(spec.n));
    for (int v = 1; v <= spec.n; ++v) {
        Feature leaf;
        leaf.name = "X" + std::to_string(v);
        leaf.relation = ChildRelation::Optional;
        layer.push_back(std::move(leaf));
    }

    int internal_counter = 0;
    auto make_internal = [&](std::vector<Feature> children) {
        Feature f;
        f.name = "N" + std::to_string(++internal_counter);
        f.relation = ChildRelation::Optional;
        f.children = std::move(children);
        return f;
    };

    while (static_cast<int>(layer.size()) > tree_arity) {
        std::vector<Feature> next;
        for (std::size_t i = 0; i < layer.size(); i += static_cast<std::size_t>(tree_arity)) {
            std::size_t end = std::min(layer.size(), i + static_cast<std::size_t>(tree_arity));
            std::vector<Feature> chunk(std::make_move_iterator(layer.begin() + static_cast<long>(i)),
                                       std::make_move_iterator(layer.begin() + static_cast<long>(end)));
            if (chunk.size() == 1)
                next.push_back(std::move(chunk[0]));  // odd remainder moves up a level
            else
                next.push_back(make_internal(std::move(chunk)));
        }
        layer = std::move(next);
    }

    FeatureModel fm;
    fm.root = make_internal(std::move(layer));

    for (const Clause& c : cnf.clauses()) {
        ExprPtr e;
        for (Lit l : c.literals()) {
            ExprPtr ref = make_ref("X" + std::to_string(l.var()));
            if (!l.is_positive()) ref = make_not(ref);
            e = e ? make_binary(ExprOp::Or, e, ref) : ref;
        }
        fm.constraints.push_back(e);
    }
    return fm;
}

}  // namespace fmsat
