#pragma once

#include <cstdint>
#include <optional>

#include "fmsat/feature_model.hpp"
#include "fmsat/formula.hpp"

namespace fmsat {

/// splitmix64 scramble step; also used standalone to derive child seeds.
std::uint64_t split_mix64(std::uint64_t x);

/// The project-wide PRNG: splitmix64 with bounded draws by modulo. Fixed and
/// documented so generated instances are reproducible bit-for-bit.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

  private:
    std::uint64_t state_;
};

/// Child-seed derivation for independent instances (cell, instance index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

struct GenSpec {
    int n = 0;
    int m = 0;                      // clause count; ignored when density given
    std::optional<double> density;  // m = round(density * n)
    int k = 3;
    std::optional<double> horn_fraction;
    std::uint64_t seed = 0;

    int clause_count() const;
};

/// Uniform random k-SAT: each clause draws k distinct variables (uniform,
/// rejecting repeats) and a uniform polarity per variable, in draw order.
Formula random_ksat(const GenSpec& spec);

/// Random 3-SAT with an exact Horn-clause budget: the first
/// ceil(horn_fraction*m) slots redraw until Horn (<=1 positive literal), the
/// rest until anti-Horn. For 3-literal clauses the two classes partition all
/// polarity patterns.
Formula random_ksat_horn_mix(const GenSpec& spec);

/// Hard artificial feature model: a balanced all-optional tree whose leaves
/// X1..Xn carry the clauses of random_ksat(spec) as cross-tree constraints.
/// The tree imposes nothing between leaves, so the encoded model is exactly
/// as hard as the embedded formula.
FeatureModel generate_hard_fm(const GenSpec& spec, int tree_arity);

}  // namespace fmsat
