#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "egt/game_model.hpp"
#include "egt/quad.hpp"
#include "egt/report.hpp"

namespace egt::kostlan {

/// The diagonal Gaussian kernel of the equilibrium system: canonical index
/// list plus the squared multinomial weight of every monomial.
struct KernelContext {
    GameSpec spec;
    std::vector<MultiIndex> indices;
    std::vector<BigInt> multinomials;  // exact values, squared lazily
    std::vector<double> weights;       // multinomial^2
    std::vector<double> log_weights;   // 2 log multinomial
    std::vector<int> flat_k;           // indices flattened, row-major (card x (n-1))
    double max_log_weight = 0.0;

    static KernelContext make(const GameSpec& spec);
};

/// Second derivatives of log v(x)^T C v(y) on the diagonal x = y = t.
struct LMatrix {
    int order = 0;
    std::vector<double> entries;  // row-major (order x order)
    std::vector<double> point;

    double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * order + j]; }
    double& at(int i, int j) { return entries[static_cast<std::size_t>(i) * order + j]; }
};

/// v(x)^T C v(y) = sum multinomial^2 prod x^k y^k, scaled by the largest
/// term in log space. Components of x, y may be zero (only the surviving
/// monomials contribute).
double kernel(const KernelContext& ctx, std::span<const double> x, std::span<const double> y);

/// The (n-1)x(n-1) matrix L at t, from three moment sums over the index
/// list sharing one scaling. Zero components are handled at their analytic
/// limit, so the closure of the positive orthant is accepted.
LMatrix l_matrix(const KernelContext& ctx, std::span<const double> t);

/// sqrt(max(det L, 0)) with det via pivoted LU after row max-scaling.
/// A det below -1e-9 (after scaling) bumps the quality-warning counter.
double integrand(const KernelContext& ctx, std::span<const double> t);

/// Closed form det L = (1 + sum t_k^2)^(-n) for two-player games; the
/// oracle for `integrand` at d = 2.
double det_l_closed_d2(int n, std::span<const double> t);

/// E(n,2) = 2^(1-n).
double e_n2_closed(int n);

/// E(n,d) for 2 <= n <= 4: closed form at d = 2, otherwise the Kostlan
/// integral evaluated by tensor cubature on the transformed cube.
EstimateReport e_nd(int n, int d, const quad::QuadConfig& cfg = {});

/// Always integrates (no closed-form dispatch); exposed so the d = 2
/// quadrature chain can be checked against 2^(1-n).
EstimateReport e_nd_quadrature(int n, int d, const quad::QuadConfig& cfg = {});

std::uint64_t negative_det_warnings();
void reset_negative_det_warnings();

}  // namespace egt::kostlan
