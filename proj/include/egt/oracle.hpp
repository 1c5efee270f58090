#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace egt::oracle {

/// Empirical estimate of E(n,d) from root-counting random games.
struct McReport {
    int n = 0;
    int d = 0;
    long samples = 0;
    std::uint64_t seed = 0;
    double sigma = 1.0;

    double mean_count = 0.0;
    double std_err = 0.0;
    std::vector<long> histogram;  // games with exactly i equilibria, i = 0..(d-1)^(n-1)

    // n = 2 only (NaN / zero otherwise)
    double stable_fraction = 0.0;
    long stable_roots = 0;
    long unstable_roots = 0;
    long marginal_roots = 0;
    double split_low_mean = 0.0;   // mean roots in (0,1)
    double split_high_mean = 0.0;  // mean roots in (1,inf)

    // diagnostics
    long degenerate_chain_skips = 0;
    long near_singular_resamples = 0;
    long sturm_eigen_disagreements = 0;
    double wall_time_s = 0.0;
    int threads = 1;

    nlohmann::json to_json() const;
};

/// Number of distinct real roots in (0, inf) of sum c_k y^k, by a Sturm
/// chain on the max-normalized polynomial. Degree is reduced first when
/// |leading| / max|c| < 1e-12. Throws std::invalid_argument on the zero
/// polynomial and std::runtime_error if the chain degenerates even after
/// the extended-precision retry.
int count_positive_roots(std::span<const double> coeffs);

/// Distinct real roots in (a, b]; a = 0 uses the limit signs at 0+, pass
/// b = infinity for the leading-coefficient signs.
int count_roots_in(std::span<const double> coeffs, double a, double b);

/// Second opinion: companion-matrix eigenvalues, counting |Im| < 1e-7 and
/// Re > 1e-9. Near-multiple roots may disagree with the Sturm count.
int count_positive_roots_eigen(std::span<const double> coeffs);

/// The positive real roots themselves (companion matrix), ascending.
std::vector<double> positive_real_roots(std::span<const double> coeffs);

enum class Stability { stable, unstable, marginal };

/// Classify the replicator equilibrium at a positive root of the n = 2
/// fitness-difference polynomial: derivative < 0 in y means stable (the
/// y -> x change of variables has positive slope). |P'| < 1e-10 is
/// marginal. The root must satisfy the normalized residual tolerance 1e-8.
Stability stability_classify(std::span<const double> coeffs, double root);

/// Sample d-player two-strategy games and count equilibria per game.
McReport mc_e2d(int d, long samples, std::uint64_t seed, double sigma = 1.0,
                int threads = 0);

/// Sample two-player n-strategy games; the linear system has one candidate
/// equilibrium, counted when strictly positive. Systems with condition
/// number above 1e12 are resampled (diagnostics field).
McReport mc_en2(int n, long samples, std::uint64_t seed, double sigma = 1.0,
                int threads = 0);

}  // namespace egt::oracle
