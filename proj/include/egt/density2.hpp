#pragma once

#include <utility>
#include <vector>

#include "egt/exact.hpp"
#include "egt/quad.hpp"
#include "egt/report.hpp"

namespace egt::density2 {

/// Precomputed data for the two-strategy root density at a fixed player
/// count d: squared binomials C(d-1,k)^2 driving M_d, the squared binomials
/// of the d-1 game driving A_d, and the integer coefficients a_k of the
/// numerator polynomial. Log-values accompany everything so evaluation can
/// scale by the largest term and stay finite for large d and t.
struct DensityContext {
    int d;
    std::vector<double> binom_sq;          // C(d-1,k)^2, k = 0..d-1
    std::vector<double> log_binom_sq;
    std::vector<double> binom_sq_dm1;      // C(d-2,k)^2, k = 0..d-2
    std::vector<double> log_binom_sq_dm1;
    std::vector<double> a_coeffs;          // a_0..a_{2d-4}
    std::vector<double> log_a;

    static DensityContext make(int d);
};

/// The a_k numerator coefficients, exact. Palindromic with a_0 = 1 and
/// every entry >= 1; length max(1, 2d-3).
std::vector<BigInt> a_coefficients_exact(int d);
std::vector<double> a_coefficients(int d);

double m_poly(const DensityContext& ctx, double t);  // sum C(d-1,k)^2 t^{2k}
double a_poly(const DensityContext& ctx, double t);  // (d-1)^2 M_{d-1}(t)
double b_poly(const DensityContext& ctx, double t);  // (1/2) M_d'(t)

/// Expected density of positive roots at y = t, evaluated through the
/// all-positive a_k representation (no cancellation).
double density_f(const DensityContext& ctx, double t);

/// E(2,d) as 2 * integral of f over [0,1] (half-interval identity).
EstimateReport e2d(int d, const quad::QuadConfig& cfg = {});

/// Lower/upper bounds on E(2,d): (d-1)/(pi sqrt(2d-3)) and
/// sqrt(d-1) sqrt(1 + (pi/2) sqrt(d-1)) / pi.
std::pair<double, double> bounds_e2d(int d);

/// Expected number of stable equilibria lies in half the E(2,d) bounds.
std::pair<double, double> stable_e2d_interval(int d);

/// Bound on the probability of observing exactly m equilibria, 1 <= m <= d-1.
double p_max_bound(int d, int m);

/// The d-1 roots r_i > 0 with M_d(t) = prod(t^2 + r_i), via companion-matrix
/// eigenvalues in s = t^2. Verification helper; supported for d <= 12.
std::vector<double> m_poly_roots(int d);

}  // namespace egt::density2
