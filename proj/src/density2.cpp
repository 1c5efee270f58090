#include "egt/density2.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace egt::density2 {

namespace {

// log sum_k exp(logc[k] + k*log_t2), scaled by the largest term.
double log_even_poly(std::span<const double> logc, double log_t2) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < logc.size(); ++k)
        m = std::max(m, logc[k] + static_cast<double>(k) * log_t2);
    double s = 0.0;
    for (std::size_t k = 0; k < logc.size(); ++k)
        s += std::exp(logc[k] + static_cast<double>(k) * log_t2 - m);
    return m + std::log(s);
}

}  // namespace

std::vector<BigInt> a_coefficients_exact(int d) {
    if (d < 2) throw std::invalid_argument("a_coefficients: need d >= 2");
    const int len = std::max(1, 2 * d - 3);
    std::vector<BigInt> binom_d(d + 1), binom_dm1(d);
    for (int i = 0; i <= d - 1; ++i) binom_d[i] = binomial_exact(d - 1, i);
    for (int i = 0; i <= d - 2; ++i) binom_dm1[i] = binomial_exact(d - 2, i);

    std::vector<BigInt> a(len);
    for (int k = 0; k < len; ++k) {
        BigInt plus = 0;
        for (int i = std::max(0, k - (d - 2)); i <= std::min(d - 1, k); ++i) {
            const int j = k - i;
            plus += binom_d[i] * binom_d[i] * binom_dm1[j] * binom_dm1[j];
        }
        BigInt minus = 0;
        for (int i = std::max(0, k - 1 - (d - 2)); i <= std::min(d - 2, k - 1); ++i) {
            const int j = k - 1 - i;
            minus += binom_dm1[i] * binom_d[i + 1] * binom_dm1[j] * binom_d[j + 1];
        }
        a[k] = plus - minus;
    }
    return a;
}

std::vector<double> a_coefficients(int d) {
    const std::vector<BigInt> exact = a_coefficients_exact(d);
    std::vector<double> out(exact.size());
    for (std::size_t k = 0; k < exact.size(); ++k) out[k] = exact[k].convert_to<double>();
    return out;
}

DensityContext DensityContext::make(int d) {
    if (d < 2) throw std::invalid_argument("DensityContext: need d >= 2");
    DensityContext ctx;
    ctx.d = d;
    ctx.binom_sq.resize(d);
    ctx.log_binom_sq.resize(d);
    for (int k = 0; k <= d - 1; ++k) {
        const BigInt b = binomial_exact(d - 1, k);
        ctx.binom_sq[k] = (b * b).convert_to<double>();
        ctx.log_binom_sq[k] = 2.0 * log_exact(b);
    }
    ctx.binom_sq_dm1.resize(d - 1);
    ctx.log_binom_sq_dm1.resize(d - 1);
    for (int k = 0; k <= d - 2; ++k) {
        const BigInt b = binomial_exact(d - 2, k);
        ctx.binom_sq_dm1[k] = (b * b).convert_to<double>();
        ctx.log_binom_sq_dm1[k] = 2.0 * log_exact(b);
    }
    const std::vector<BigInt> a = a_coefficients_exact(d);
    ctx.a_coeffs.resize(a.size());
    ctx.log_a.resize(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        ctx.a_coeffs[k] = a[k].convert_to<double>();
        ctx.log_a[k] = log_exact(a[k]);
    }
    return ctx;
}

double m_poly(const DensityContext& ctx, double t) {
    if (t < 0) throw std::invalid_argument("m_poly: need t >= 0");
    if (t == 0.0) return 1.0;
    return std::exp(log_even_poly(ctx.log_binom_sq, 2.0 * std::log(t)));
}

double a_poly(const DensityContext& ctx, double t) {
    if (t < 0) throw std::invalid_argument("a_poly: need t >= 0");
    const double dm1 = ctx.d - 1;
    if (t == 0.0) return dm1 * dm1;
    return dm1 * dm1 * std::exp(log_even_poly(ctx.log_binom_sq_dm1, 2.0 * std::log(t)));
}

double b_poly(const DensityContext& ctx, double t) {
    if (t < 0) throw std::invalid_argument("b_poly: need t >= 0");
    if (t == 0.0) return 0.0;
    const double lt = std::log(t);
    double m = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= ctx.d - 1; ++k)
        m = std::max(m, std::log(static_cast<double>(k)) + ctx.log_binom_sq[k] +
                            (2.0 * k - 1.0) * lt);
    double s = 0.0;
    for (int k = 1; k <= ctx.d - 1; ++k)
        s += std::exp(std::log(static_cast<double>(k)) + ctx.log_binom_sq[k] +
                      (2.0 * k - 1.0) * lt - m);
    return std::exp(m + std::log(s));
}

double density_f(const DensityContext& ctx, double t) {
    if (t < 0) throw std::invalid_argument("density_f: need t >= 0");
    const double pref = (ctx.d - 1) / M_PI;
    if (t == 0.0) return pref;
    const double log_t2 = 2.0 * std::log(t);
    const double log_num = log_even_poly(ctx.log_a, log_t2);
    const double log_den = log_even_poly(ctx.log_binom_sq, log_t2);
    return pref * std::exp(0.5 * log_num - log_den);
}

EstimateReport e2d(int d, const quad::QuadConfig& cfg) {
    const DensityContext ctx = DensityContext::make(d);
    const quad::QuadResult qr = quad::integrate_1d(
        [&ctx](double t) { return 2.0 * density_f(ctx, t); }, 0.0, 1.0, cfg);

    EstimateReport rep;
    rep.value = qr.value;
    rep.err_estimate = qr.err_estimate;
    rep.method = "quadrature";
    rep.converged = qr.converged;
    rep.evals = qr.evals;
    rep.detail = "2 * int_0^1 f(t) dt, adaptive G7/K15";
    if (!rep.converged) rep.detail += " (tolerance not reached; best estimate)";
    return rep;
}

std::pair<double, double> bounds_e2d(int d) {
    if (d < 2) throw std::invalid_argument("bounds_e2d: need d >= 2");
    const double dm1 = d - 1;
    const double lower = dm1 / (M_PI * std::sqrt(2.0 * d - 3.0));
    const double upper = std::sqrt(dm1) * std::sqrt(1.0 + 0.5 * M_PI * std::sqrt(dm1)) / M_PI;
    return {lower, upper};
}

std::pair<double, double> stable_e2d_interval(int d) {
    auto [lo, hi] = bounds_e2d(d);
    return {0.5 * lo, 0.5 * hi};
}

double p_max_bound(int d, int m) {
    if (d < 2) throw std::invalid_argument("p_max_bound: need d >= 2");
    if (m < 1 || m > d - 1) throw std::invalid_argument("p_max_bound: need 1 <= m <= d-1");
    return bounds_e2d(d).second / m;
}

std::vector<double> m_poly_roots(int d) {
    if (d < 2) throw std::invalid_argument("m_poly_roots: need d >= 2");
    if (d > 12) throw std::invalid_argument("m_poly_roots: companion form supported for d <= 12");
    const int deg = d - 1;
    if (deg == 1) return {1.0};  // M_2 = 1 + t^2

    // M_d as a monic polynomial in s = t^2 (leading coefficient is 1).
    std::vector<double> c(deg + 1);
    for (int k = 0; k <= deg; ++k) {
        const BigInt b = binomial_exact(d - 1, k);
        c[k] = (b * b).convert_to<double>();
    }
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i];

    const Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
    std::vector<double> roots;
    roots.reserve(deg);
    for (int i = 0; i < deg; ++i) {
        const std::complex<double> s = es.eigenvalues()[i];
        if (std::abs(s.imag()) > 1e-6 * std::max(1.0, std::abs(s.real())))
            throw std::runtime_error("m_poly_roots: unexpected complex root of M_d");
        roots.push_back(-s.real());
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace egt::density2
