#include "fmsat/backdoor.hpp"

#include <algorithm>
#include <stdexcept>

#include "fmsat/profile.hpp"

namespace fmsat {

int max_clause_width(const Formula& f) {
    std::size_t w = 0;
    for (const Clause& c : f.clauses()) w = std::max(w, c.size());
    return static_cast<int>(w);
}

bool witness_satisfies_all(const Formula& f, const WeakBackdoorWitness& w) {
    for (const Clause& c : f.clauses())
        if (!w.assignment.satisfies(c)) return false;
    return true;
}

namespace {

struct FptSearch {
    const Formula& f;
    Assignment partial;
    std::vector<int> chosen;
    std::uint64_t leaves = 0;

    explicit FptSearch(const Formula& formula) : f(formula), partial(formula.num_vars()) {}

    const Clause* first_unsatisfied() const {
        for (const Clause& c : f.clauses())
            if (!partial.satisfies(c)) return &c;
        return nullptr;
    }

    std::optional<WeakBackdoorWitness> search(int k) {
        const Clause* open = first_unsatisfied();
        if (open == nullptr) {
            ++leaves;
            WeakBackdoorWitness w;
            w.vars = chosen;
            std::sort(w.vars.begin(), w.vars.end());
            w.assignment = partial;
            return w;
        }
        if (k == 0) {
            ++leaves;
            return std::nullopt;
        }
        bool branched = false;
        for (Lit l : open->literals()) {
            if (partial.is_assigned(l.var())) continue;  // would flip a chosen value
            branched = true;
            partial.set(l.var(), l.is_positive());
            chosen.push_back(l.var());
            auto found = search(k - 1);
            chosen.pop_back();
            partial.unset(l.var());
            if (found) return found;
        }
        if (!branched) ++leaves;  // dead end: clause fully falsified by choices
        return std::nullopt;
    }
};

}  // namespace

std::optional<WeakBackdoorWitness> weak_e_backdoor_fpt(const Formula& f, int k, int d,
                                                       FptStats* stats) {
    if (k < 0) throw std::invalid_argument("backdoor budget must be non-negative");
    if (max_clause_width(f) > d)
        throw std::invalid_argument("formula has a clause wider than d");
    FptSearch search(f);
    auto witness = search.search(k);
    if (stats) stats->branches = search.leaves;
    if (witness && !witness_satisfies_all(f, *witness))
        throw std::logic_error("fpt witness fails verification");
    return witness;
}

std::optional<std::pair<int, WeakBackdoorWitness>> min_weak_e_backdoor(const Formula& f, int d) {
    if (f.num_vars() <= 30 && !brute_force_solve(f)) return std::nullopt;
    for (int k = 0; k <= f.num_vars(); ++k)
        if (auto w = weak_e_backdoor_fpt(f, k, d)) return std::make_pair(k, *w);
    return std::nullopt;
}

std::optional<WeakBackdoorWitness> weak_e_backdoor_brute(const Formula& f, int k) {
    if (f.num_vars() > 20) throw LimitError("brute-force backdoor search limited to 20 variables");
    if (k > 6) throw LimitError("brute-force backdoor search limited to k <= 6");

    int n = f.num_vars();
    for (int size = 0; size <= std::min(k, n); ++size) {
        // Lexicographic subsets of the given size.
        std::vector<int> subset(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) subset[static_cast<std::size_t>(i)] = i + 1;
        for (;;) {
            for (std::uint64_t bits = 0; bits < (1ull << size); ++bits) {
                WeakBackdoorWitness w;
                w.vars = subset;
                w.assignment = Assignment(n);
                for (int i = 0; i < size; ++i)
                    w.assignment.set(subset[static_cast<std::size_t>(i)], (bits >> i) & 1ull);
                if (witness_satisfies_all(f, w)) return w;
            }
            // next combination
            int i = size - 1;
            while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - (size - 1 - i)) --i;
            if (i < 0) break;
            ++subset[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return std::nullopt;
}

namespace {

std::vector<std::vector<int>> combinations(int n, int size) {
    std::vector<std::vector<int>> out;
    if (size > n) return out;
    std::vector<int> subset(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) subset[static_cast<std::size_t>(i)] = i + 1;
    for (;;) {
        out.push_back(subset);
        int i = size - 1;
        while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - (size - 1 - i)) --i;
        if (i < 0) break;
        ++subset[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < size; ++j)
            subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

// B is a strong S backdoor iff the models project onto B completely
// (every assignment to B extends to a model).
bool subset_saturated(const std::vector<std::uint32_t>& models, const std::vector<int>& subset) {
    std::size_t want = 1ull << subset.size();
    std::vector<char> seen(want, 0);
    std::size_t distinct = 0;
    for (std::uint32_t m : models) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < subset.size(); ++i)
            idx |= static_cast<std::size_t>((m >> (subset[i] - 1)) & 1u) << i;
        if (!seen[idx]) {
            seen[idx] = 1;
            if (++distinct == want) return true;
        }
    }
    return distinct == want;
}

}  // namespace

StrongBackdoorResult max_strong_s_backdoor_brute(const Formula& f, ExecMode mode) {
    if (f.num_vars() > 14)
        throw LimitError("strong backdoor enumeration limited to 14 variables");
    StrongBackdoorResult result;

    std::vector<std::uint32_t> models = enumerate_models(f);
    if (models.empty()) return result;  // unsatisfiable: not even the empty set works

    int n = f.num_vars();
    for (int size = n; size >= 0; --size) {
        if ((1ull << size) > models.size()) continue;  // too few models to saturate
        auto subsets = combinations(n, size);
        long long found = -1;
        bool parallel = mode == ExecMode::Parallel ||
                        (mode == ExecMode::Auto &&
                         subsets.size() * models.size() > (1ull << 18));
        if (!parallel) {
            for (std::size_t i = 0; i < subsets.size(); ++i)
                if (subset_saturated(models, subsets[i])) {
                    found = static_cast<long long>(i);
                    break;
                }
        } else {
            long long best = static_cast<long long>(subsets.size());
#pragma omp parallel for schedule(dynamic) reduction(min : best)
            for (long long i = 0; i < static_cast<long long>(subsets.size()); ++i)
                if (i < best && subset_saturated(models, subsets[static_cast<std::size_t>(i)]))
                    best = i;
            if (best < static_cast<long long>(subsets.size())) found = best;
        }
        if (found >= 0) {
            result.size = size;
            result.vars = subsets[static_cast<std::size_t>(found)];
            return result;
        }
    }
    return result;
}

std::optional<AuditRecord> backdoor_audit(const Formula& f) {
    if (f.num_vars() > 14) throw LimitError("backdoor audit limited to 14 variables");

    OracleConfig exact;
    exact.brute_force_below = 31;  // always exhaustive at audit scale
    RestrictedReport restricted = restricted_count(f, exact);
    if (!restricted.satisfiable) return std::nullopt;

    auto weak = min_weak_e_backdoor(f, std::max(1, max_clause_width(f)));
    if (!weak) throw std::logic_error("satisfiable formula without a weak backdoor");
    StrongBackdoorResult strong = max_strong_s_backdoor_brute(f);

    AuditRecord rec;
    rec.n = f.num_vars();
    rec.restricted = restricted.count();
    rec.weak_min = weak->first;
    rec.strong_max = strong.size;
    rec.holds_leq = rec.restricted <= rec.weak_min;
    rec.holds_complement = rec.strong_max >= rec.n - rec.weak_min;
    rec.holds_iff = rec.restricted == rec.weak_min && rec.strong_max == rec.n - rec.restricted;
    return rec;
}

}  // namespace fmsat
