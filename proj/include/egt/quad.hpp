#pragma once

#include <functional>
#include <span>
#include <vector>

namespace egt::quad {

struct QuadConfig {
    // 1D adaptive Gauss-Kronrod
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int max_depth = 30;
    // tensor-product cubature over the transformed cube
    int nodes_per_dim = 80;
    int verify_nodes_per_dim = 60;  // must stay below nodes_per_dim
    double nd_rel_tol = 1e-3;       // two-level convergence gate
    double nd_abs_tol = 1e-4;
    int threads = 0;                // 0 = hardware concurrency
};

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    bool converged = false;
    long evals = 0;
    double coarse_value = 0.0;  // cubature verify-level value (0 for 1D)
};

/// Deterministic pairwise-tree sum; result is independent of how the
/// entries were produced (fixed reduction order).
double pairwise_sum(std::span<const double> v);

/// Gauss-Legendre nodes and weights on (-1, 1), symmetric to machine precision.
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights);

/// Adaptive G7/K15 bisection on [a, b]. Succeeds once the summed error
/// estimate falls under max(rel_tol*|value|, abs_tol); on depth exhaustion
/// returns converged = false with the best value and achieved error.
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadConfig& cfg = {});

/// Integral of f over [0, inf)^dims, dims in 1..3, via the map t = u/(1-u)
/// and tensor Gauss-Legendre on (0,1)^dims. err_estimate is the difference
/// between the nodes_per_dim and verify_nodes_per_dim levels. Node
/// evaluations run in parallel; the reduction order is fixed, so results
/// do not depend on the thread count. A non-finite integrand sample throws
/// std::domain_error naming the node.
QuadResult integrate_semiinf_nd(const std::function<double(std::span<const double>)>& f,
                                int dims, const QuadConfig& cfg = {});

}  // namespace egt::quad
