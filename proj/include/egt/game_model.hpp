#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "egt/exact.hpp"

namespace egt {

/// A random symmetric game: n strategies, groups of d players.
struct GameSpec {
    int n;  // strategies, >= 2
    int d;  // players, >= 2

    GameSpec(int n_, int d_);

    /// Sharp bound (d-1)^(n-1) on the number of isolated internal equilibria.
    std::uint64_t max_equilibria() const;
};

/// Exponents (k_1, ..., k_{n-1}) of one monomial in the equilibrium system;
/// the count of strategy-n opponents k_n = d-1 - sum is implicit.
struct MultiIndex {
    std::vector<int> k;

    int sum() const {
        int s = 0;
        for (int v : k) s += v;
        return s;
    }
};

/// All multi-indices with sum <= d-1, in lexicographic order.
/// Cardinality C(d-1+n-1, n-1); the all-zeros index comes first.
std::vector<MultiIndex> enumerate_indices(const GameSpec& spec);

/// One sampled game, reduced to its n-1 payoff-difference polynomials.
/// rows[i][j] stores beta * multinomial for index j of polynomial i+1.
struct CoeffSystem {
    GameSpec spec;
    double sigma;
    std::uint64_t seed;
    std::vector<MultiIndex> indices;
    std::vector<double> weights;             // multinomial(d-1; k, k_n) per index
    std::vector<std::vector<double>> rows;   // (n-1) x indices.size()
};

/// Draw beta ~ N(0, sigma^2) i.i.d. from the counter RNG. Bit-identical
/// output for equal (spec, sigma, seed) regardless of threading.
CoeffSystem sample_system(const GameSpec& spec, double sigma, std::uint64_t seed);

/// Evaluate polynomial `row` (1-based, 1..n-1) at y > 0 with Kahan summation.
double eval_poly(const CoeffSystem& system, int row, std::span<const double> y);

}  // namespace egt
