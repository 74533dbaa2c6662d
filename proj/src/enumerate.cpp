#include "fmsat/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

namespace fmsat {

namespace {

// Per-clause literal masks over <=30 variables: clause satisfied under mask m
// iff (m & pos) != 0 or (~m & neg) != 0.
struct MaskedFormula {
    std::vector<std::uint32_t> pos;
    std::vector<std::uint32_t> neg;
    int num_vars = 0;

    explicit MaskedFormula(const Formula& f) : num_vars(f.num_vars()) {
        pos.reserve(f.num_clauses());
        neg.reserve(f.num_clauses());
        for (const Clause& c : f.clauses()) {
            std::uint32_t p = 0, n = 0;
            for (Lit l : c.literals()) {
                std::uint32_t bit = 1u << (l.var() - 1);
                (l.is_positive() ? p : n) |= bit;
            }
            pos.push_back(p);
            neg.push_back(n);
        }
    }

    bool satisfied(std::uint32_t m) const {
        for (std::size_t i = 0; i < pos.size(); ++i)
            if ((m & pos[i]) == 0 && (~m & neg[i]) == 0) return false;
        return true;
    }
};

void check_limits(const Formula& f, const OracleLimits& limits) {
    if (f.num_vars() > limits.max_vars)
        throw LimitError("formula has " + std::to_string(f.num_vars()) +
                         " variables, oracle limit is " + std::to_string(limits.max_vars));
    if (f.num_vars() >= 0 && (1ull << f.num_vars()) > limits.max_steps)
        throw LimitError("enumeration would exceed the step cap");
}

bool pick_parallel(ExecMode mode, std::uint64_t work) {
    switch (mode) {
        case ExecMode::Serial: return false;
        case ExecMode::Parallel: return true;
        case ExecMode::Auto: return work > (1ull << 22);
    }
    return false;
}

Assignment mask_to_assignment(std::uint32_t mask, int num_vars) {
    Assignment a(num_vars);
    for (int v = 1; v <= num_vars; ++v) a.set(v, (mask >> (v - 1)) & 1u);
    return a;
}

constexpr std::uint64_t kNoModel = ~0ull;

std::uint64_t first_model_serial(const MaskedFormula& mf, std::uint64_t total) {
    for (std::uint64_t m = 0; m < total; ++m)
        if (mf.satisfied(static_cast<std::uint32_t>(m))) return m;
    return kNoModel;
}

std::uint64_t first_model_parallel(const MaskedFormula& mf, std::uint64_t total) {
    std::atomic<std::uint64_t> best{kNoModel};
    const std::uint64_t chunk = 1ull << 14;
    const std::uint64_t num_chunks = (total + chunk - 1) / chunk;
#pragma omp parallel for schedule(dynamic)
    for (long long ci = 0; ci < static_cast<long long>(num_chunks); ++ci) {
        std::uint64_t lo = static_cast<std::uint64_t>(ci) * chunk;
        if (lo >= best.load(std::memory_order_relaxed)) continue;
        std::uint64_t hi = std::min(total, lo + chunk);
        for (std::uint64_t m = lo; m < hi; ++m) {
            if (mf.satisfied(static_cast<std::uint32_t>(m))) {
                std::uint64_t cur = best.load(std::memory_order_relaxed);
                while (m < cur && !best.compare_exchange_weak(cur, m)) {
                }
                break;
            }
        }
    }
    return best.load();
}

}  // namespace

std::optional<Assignment> brute_force_solve(const Formula& f, OracleLimits limits,
                                            ExecMode mode) {
    check_limits(f, limits);
    MaskedFormula mf(f);
    std::uint64_t total = 1ull << f.num_vars();
    bool parallel = pick_parallel(mode, total * std::max<std::uint64_t>(1, f.num_clauses()));
    std::uint64_t m = parallel ? first_model_parallel(mf, total) : first_model_serial(mf, total);
    if (m == kNoModel) return std::nullopt;
    Assignment a = mask_to_assignment(static_cast<std::uint32_t>(m), f.num_vars());
    if (!a.satisfies(f)) throw std::logic_error("brute_force_solve produced a bad model");
    return a;
}

std::vector<int> all_vars(const Formula& f) {
    std::vector<int> vars(static_cast<std::size_t>(f.num_vars()));
    for (int v = 1; v <= f.num_vars(); ++v) vars[static_cast<std::size_t>(v - 1)] = v;
    return vars;
}

std::uint64_t brute_force_count(const Formula& f, const std::vector<int>& projection,
                                OracleLimits limits, ExecMode mode) {
    check_limits(f, limits);
    std::vector<int> proj = projection;
    std::sort(proj.begin(), proj.end());
    proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
    for (int v : proj)
        if (v < 1 || v > f.num_vars())
            throw std::invalid_argument("projection variable out of range");
    if (proj.size() > 25) throw LimitError("projection larger than 25 variables");

    std::vector<int> free_vars;
    {
        std::vector<std::uint8_t> in_proj(static_cast<std::size_t>(f.num_vars()) + 1, 0);
        for (int v : proj) in_proj[static_cast<std::size_t>(v)] = 1;
        for (int v = 1; v <= f.num_vars(); ++v)
            if (!in_proj[static_cast<std::size_t>(v)]) free_vars.push_back(v);
    }

    MaskedFormula mf(f);
    const std::uint64_t outer_total = 1ull << proj.size();
    const std::uint64_t inner_total = 1ull << free_vars.size();
    bool parallel =
        pick_parallel(mode, outer_total * inner_total * std::max<std::uint64_t>(1, f.num_clauses()));

    auto scatter = [](const std::vector<int>& vars, std::uint64_t bits) {
        std::uint32_t m = 0;
        for (std::size_t i = 0; i < vars.size(); ++i)
            if ((bits >> i) & 1ull) m |= 1u << (vars[i] - 1);
        return m;
    };

    std::uint64_t count = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : count) if (parallel)
    for (long long oi = 0; oi < static_cast<long long>(outer_total); ++oi) {
        std::uint32_t outer_mask = scatter(proj, static_cast<std::uint64_t>(oi));
        for (std::uint64_t ii = 0; ii < inner_total; ++ii) {
            if (mf.satisfied(outer_mask | scatter(free_vars, ii))) {
                ++count;
                break;
            }
        }
    }
    return count;
}

int BackboneResult::forced_count() const {
    int n = 0;
    for (BackboneStatus s : status) n += s != BackboneStatus::Free;
    return n;
}

BackboneResult backbone_brute(const Formula& f, OracleLimits limits, ExecMode mode) {
    check_limits(f, limits);
    MaskedFormula mf(f);
    const std::uint64_t total = 1ull << f.num_vars();
    const std::uint32_t full =
        f.num_vars() == 0 ? 0u : static_cast<std::uint32_t>((1ull << f.num_vars()) - 1);
    bool parallel = pick_parallel(mode, total * std::max<std::uint64_t>(1, f.num_clauses()));

    bool any = false;
    std::uint32_t and_mask = full, or_mask = 0;

    if (!parallel) {
        for (std::uint64_t m = 0; m < total; ++m) {
            if (!mf.satisfied(static_cast<std::uint32_t>(m))) continue;
            any = true;
            and_mask &= static_cast<std::uint32_t>(m);
            or_mask |= static_cast<std::uint32_t>(m);
            if (and_mask == 0 && or_mask == full) break;  // nothing forced
        }
    } else {
        std::uint64_t any_count = 0;
        std::uint64_t and_acc = full, or_acc = 0;
#pragma omp parallel for schedule(static) reduction(+ : any_count) reduction(& : and_acc) \
    reduction(| : or_acc)
        for (long long m = 0; m < static_cast<long long>(total); ++m) {
            if (mf.satisfied(static_cast<std::uint32_t>(m))) {
                ++any_count;
                and_acc &= static_cast<std::uint64_t>(m);
                or_acc |= static_cast<std::uint64_t>(m);
            }
        }
        any = any_count > 0;
        and_mask = static_cast<std::uint32_t>(and_acc);
        or_mask = static_cast<std::uint32_t>(or_acc);
    }

    BackboneResult r;
    r.satisfiable = any;
    if (!any) return r;
    r.status.resize(static_cast<std::size_t>(f.num_vars()), BackboneStatus::Free);
    for (int v = 1; v <= f.num_vars(); ++v) {
        std::uint32_t bit = 1u << (v - 1);
        if (and_mask & bit)
            r.status[static_cast<std::size_t>(v - 1)] = BackboneStatus::ForcedTrue;
        else if (!(or_mask & bit))
            r.status[static_cast<std::size_t>(v - 1)] = BackboneStatus::ForcedFalse;
    }
    return r;
}

bool mask_satisfies(const Formula& f, std::uint32_t mask) {
    return MaskedFormula(f).satisfied(mask);
}

std::vector<std::uint32_t> enumerate_models(const Formula& f, OracleLimits limits) {
    check_limits(f, limits);
    MaskedFormula mf(f);
    std::vector<std::uint32_t> models;
    std::uint64_t total = 1ull << f.num_vars();
    for (std::uint64_t m = 0; m < total; ++m)
        if (mf.satisfied(static_cast<std::uint32_t>(m)))
            models.push_back(static_cast<std::uint32_t>(m));
    return models;
}

}  // namespace fmsat
