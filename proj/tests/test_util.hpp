#pragma once

#include <vector>

#include "fmsat/formula.hpp"
#include "fmsat/generate.hpp"

namespace fmsat::testing {

/// Random formula with mixed clause widths 1..4, the shape used by the
/// simplifier and solver property tests.
inline Formula random_mixed_formula(std::uint64_t seed, int min_n = 3, int max_n = 12) {
    SplitMix64 rng(seed);
    int n = min_n + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_n - min_n + 1)));
    int m = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(3 * n)));
    std::vector<Clause> clauses;
    for (int i = 0; i < m; ++i) {
        int w = 1 + static_cast<int>(rng.next_below(4));
        if (w > n) w = n;
        std::vector<int> lits, vars;
        while (static_cast<int>(vars.size()) < w) {
            int v = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
            bool dup = false;
            for (int u : vars) dup |= u == v;
            if (dup) continue;
            vars.push_back(v);
            lits.push_back(rng.next_below(2) ? -v : v);
        }
        clauses.push_back(make_clause(lits));
    }
    return Formula(n, std::move(clauses));
}

inline Formula random_3sat(std::uint64_t seed, int n, double density) {
    GenSpec spec;
    spec.n = n;
    spec.density = density;
    spec.k = 3;
    spec.seed = seed;
    return random_ksat(spec);
}

}  // namespace fmsat::testing
