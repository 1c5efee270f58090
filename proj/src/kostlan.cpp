#include "egt/kostlan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace egt::kostlan {

namespace {

std::atomic<std::uint64_t> g_negative_det_warnings{0};

constexpr double kNegativeDetTolerance = -1e-9;

// Online log-sum-exp of positive terms.
struct LogAcc {
    double m = -std::numeric_limits<double>::infinity();
    double s = 0.0;

    void add(double lg) {
        if (lg == -std::numeric_limits<double>::infinity()) return;
        if (lg <= m) {
            s += std::exp(lg - m);
        } else {
            s = s * std::exp(m - lg) + 1.0;
            m = lg;
        }
    }
    double value() const {
        return s == 0.0 ? -std::numeric_limits<double>::infinity() : m + std::log(s);
    }
};

double exp_or_zero(double lg) {
    return lg == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(lg);
}

/// det of a symmetric near-PSD matrix: rows scaled to unit max-entry,
/// then LU with partial pivoting; round-off negativity clamped to zero.
double det_clamped(std::vector<double>& a, int n) {
    double scale_product = 1.0;
    for (int i = 0; i < n; ++i) {
        double mx = 0.0;
        for (int j = 0; j < n; ++j) mx = std::max(mx, std::abs(a[i * n + j]));
        if (mx == 0.0) return 0.0;
        for (int j = 0; j < n; ++j) a[i * n + j] /= mx;
        scale_product *= mx;
    }
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int i = col + 1; i < n; ++i)
            if (std::abs(a[i * n + col]) > std::abs(a[piv * n + col])) piv = i;
        if (a[piv * n + col] == 0.0) return 0.0;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
            det = -det;
        }
        det *= a[col * n + col];
        for (int i = col + 1; i < n; ++i) {
            const double f = a[i * n + col] / a[col * n + col];
            for (int j = col; j < n; ++j) a[i * n + j] -= f * a[col * n + j];
        }
    }
    if (det < kNegativeDetTolerance)
        g_negative_det_warnings.fetch_add(1, std::memory_order_relaxed);
    return std::max(det, 0.0) * scale_product;
}

struct Workspace {
    std::vector<double> pow;  // dims x d table of t_l^{2e}
    std::vector<double> lbuf;
};

// Fast path: plain products, valid only when the largest moment-sum term
// provably stays inside double range. All t components must be positive.
double integrand_fast(const KernelContext& ctx, const double* t, int dims, Workspace& ws) {
    const int d = ctx.spec.d;
    ws.pow.resize(static_cast<std::size_t>(dims) * d);
    for (int l = 0; l < dims; ++l) {
        const double t2 = t[l] * t[l];
        double* pw = ws.pow.data() + static_cast<std::size_t>(l) * d;
        pw[0] = 1.0;
        for (int e = 1; e < d; ++e) pw[e] = pw[e - 1] * t2;
    }

    double S0 = 0.0;
    double S1[3] = {0.0, 0.0, 0.0};
    double S2[3][3] = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};

    const std::size_t card = ctx.weights.size();
    const int* fk = ctx.flat_k.data();
    for (std::size_t idx = 0; idx < card; ++idx) {
        const int* k = fk + idx * dims;
        double base = ctx.weights[idx];
        for (int l = 0; l < dims; ++l) base *= ws.pow[static_cast<std::size_t>(l) * d + k[l]];
        S0 += base;
        for (int i = 0; i < dims; ++i) {
            const double bi = base * k[i];
            S1[i] += bi;
            for (int j = i; j < dims; ++j) S2[i][j] += bi * k[j];
        }
    }

    ws.lbuf.assign(static_cast<std::size_t>(dims) * dims, 0.0);
    for (int i = 0; i < dims; ++i) {
        const double ri = S1[i] / S0;
        for (int j = i; j < dims; ++j) {
            const double v = (S2[i][j] / S0 - ri * (S1[j] / S0)) / (t[i] * t[j]);
            ws.lbuf[static_cast<std::size_t>(i) * dims + j] = v;
            ws.lbuf[static_cast<std::size_t>(j) * dims + i] = v;
        }
    }
    return std::sqrt(det_clamped(ws.lbuf, dims));
}

bool fast_path_safe(const KernelContext& ctx, const double* t, int dims) {
    double max_abs_log = 0.0;
    for (int l = 0; l < dims; ++l) {
        if (!(t[l] > 0.0)) return false;
        max_abs_log = std::max(max_abs_log, std::abs(std::log(t[l])));
    }
    const int d = ctx.spec.d;
    // keeps every monomial of S0/S1/S2 clear of both overflow and underflow
    const double bound = ctx.max_log_weight + 2.0 * (d - 1) * max_abs_log +
                         2.0 * std::log(static_cast<double>(d));
    return bound < 660.0;
}

}  // namespace

KernelContext KernelContext::make(const GameSpec& spec) {
    KernelContext ctx{spec, enumerate_indices(spec), {}, {}, {}, {}, 0.0};
    const std::size_t card = ctx.indices.size();
    ctx.multinomials.reserve(card);
    ctx.weights.reserve(card);
    ctx.log_weights.reserve(card);
    ctx.flat_k.reserve(card * (spec.n - 1));

    std::vector<int> parts(spec.n);
    for (const MultiIndex& mi : ctx.indices) {
        for (int i = 0; i < spec.n - 1; ++i) {
            parts[i] = mi.k[i];
            ctx.flat_k.push_back(mi.k[i]);
        }
        parts[spec.n - 1] = spec.d - 1 - mi.sum();
        BigInt m = multinomial_exact(spec.d - 1, parts);
        const double lw = 2.0 * log_exact(m);
        ctx.weights.push_back((m * m).convert_to<double>());
        ctx.log_weights.push_back(lw);
        ctx.max_log_weight = std::max(ctx.max_log_weight, lw);
        ctx.multinomials.push_back(std::move(m));
    }
    return ctx;
}

double kernel(const KernelContext& ctx, std::span<const double> x, std::span<const double> y) {
    const int dims = ctx.spec.n - 1;
    if (static_cast<int>(x.size()) != dims || static_cast<int>(y.size()) != dims)
        throw std::invalid_argument("kernel: point has wrong dimension");
    for (int l = 0; l < dims; ++l)
        if (x[l] < 0.0 || y[l] < 0.0) throw std::invalid_argument("kernel: need x, y >= 0");

    LogAcc acc;
    const std::size_t card = ctx.weights.size();
    for (std::size_t idx = 0; idx < card; ++idx) {
        const int* k = ctx.flat_k.data() + idx * dims;
        double lg = ctx.log_weights[idx];
        bool alive = true;
        for (int l = 0; l < dims; ++l) {
            if (k[l] == 0) continue;
            if (x[l] == 0.0 || y[l] == 0.0) {
                alive = false;
                break;
            }
            lg += k[l] * (std::log(x[l]) + std::log(y[l]));
        }
        if (alive) acc.add(lg);
    }
    return exp_or_zero(acc.value());
}

LMatrix l_matrix(const KernelContext& ctx, std::span<const double> t) {
    const int dims = ctx.spec.n - 1;
    if (static_cast<int>(t.size()) != dims)
        throw std::invalid_argument("l_matrix: point has wrong dimension");
    for (double v : t)
        if (v < 0.0) throw std::invalid_argument("l_matrix: need t >= 0");

    // Moment sums S0 = sum w prod t^{2k}, S1[i] = sum k_i w t_i^{2k_i-1} ...,
    // S2[i][j] with both exponents lowered; one shared pass, log-scaled.
    // Exponents are carried term by term so zero components take their
    // analytic limit exactly.
    LogAcc acc0;
    LogAcc acc1[3];
    LogAcc acc2[3][3];
    std::vector<LogAcc> acc1v, acc2v;  // spill for order > 3
    const bool small = dims <= 3;
    if (!small) {
        acc1v.resize(dims);
        acc2v.resize(static_cast<std::size_t>(dims) * dims);
    }
    auto a1 = [&](int i) -> LogAcc& { return small ? acc1[i] : acc1v[i]; };
    auto a2 = [&](int i, int j) -> LogAcc& {
        return small ? acc2[i][j] : acc2v[static_cast<std::size_t>(i) * dims + j];
    };

    std::vector<double> lt(dims);
    for (int l = 0; l < dims; ++l) lt[l] = t[l] > 0.0 ? std::log(t[l]) : 0.0;

    const std::size_t card = ctx.weights.size();
    for (std::size_t idx = 0; idx < card; ++idx) {
        const int* k = ctx.flat_k.data() + idx * dims;
        double partial = ctx.log_weights[idx];
        int blocked = -1, n_blocked = 0;
        for (int l = 0; l < dims; ++l) {
            if (k[l] == 0) continue;
            if (t[l] == 0.0) {
                blocked = l;
                ++n_blocked;
            } else {
                partial += 2.0 * k[l] * lt[l];
            }
        }
        if (n_blocked == 0) {
            acc0.add(partial);
            for (int i = 0; i < dims; ++i) {
                if (k[i] == 0) continue;
                const double li = partial + std::log(static_cast<double>(k[i])) - lt[i];
                a1(i).add(li);
                a2(i, i).add(partial + 2.0 * std::log(static_cast<double>(k[i])) - 2.0 * lt[i]);
                for (int j = i + 1; j < dims; ++j) {
                    if (k[j] == 0) continue;
                    a2(i, j).add(li + std::log(static_cast<double>(k[j])) - lt[j]);
                }
            }
        } else if (n_blocked == 1 && k[blocked] == 1) {
            // only the diagonal sum at the blocked axis survives: exponent
            // 2k_i - 2 vanishes there
            a2(blocked, blocked).add(partial);
        }
    }

    const double l0 = acc0.value();
    LMatrix L;
    L.order = dims;
    L.point.assign(t.begin(), t.end());
    L.entries.assign(static_cast<std::size_t>(dims) * dims, 0.0);
    for (int i = 0; i < dims; ++i) {
        for (int j = i; j < dims; ++j) {
            const double ratio2 = exp_or_zero(a2(i, j).value() - l0);
            const double ratio11 = exp_or_zero(a1(i).value() + a1(j).value() - 2.0 * l0);
            L.at(i, j) = ratio2 - ratio11;
            L.at(j, i) = L.at(i, j);
        }
    }
    return L;
}

double integrand(const KernelContext& ctx, std::span<const double> t) {
    const int dims = ctx.spec.n - 1;
    if (dims <= 3 && fast_path_safe(ctx, t.data(), dims)) {
        thread_local Workspace ws;
        return integrand_fast(ctx, t.data(), dims, ws);
    }
    LMatrix L = l_matrix(ctx, t);
    std::vector<double> buf = L.entries;
    return std::sqrt(det_clamped(buf, dims));
}

double det_l_closed_d2(int n, std::span<const double> t) {
    if (n < 2) throw std::invalid_argument("det_l_closed_d2: need n >= 2");
    if (static_cast<int>(t.size()) != n - 1)
        throw std::invalid_argument("det_l_closed_d2: point has wrong dimension");
    double sigma = 1.0;
    for (double v : t) {
        if (v < 0.0) throw std::invalid_argument("det_l_closed_d2: need t >= 0");
        sigma += v * v;
    }
    return std::pow(sigma, -n);
}

double e_n2_closed(int n) {
    if (n < 2) throw std::invalid_argument("e_n2_closed: need n >= 2");
    return std::ldexp(1.0, 1 - n);  // 2^(1-n), exact
}

EstimateReport e_nd_quadrature(int n, int d, const quad::QuadConfig& cfg) {
    if (n < 2 || n > 4)
        throw std::invalid_argument("e_nd: unsupported dimension, need 2 <= n <= 4");
    const GameSpec spec(n, d);
    const KernelContext ctx = KernelContext::make(spec);
    const int dims = n - 1;

    const quad::QuadResult qr = quad::integrate_semiinf_nd(
        [&ctx](std::span<const double> t) { return integrand(ctx, t); }, dims, cfg);

    const double prefactor = std::pow(M_PI, -0.5 * n) * std::tgamma(0.5 * n);
    EstimateReport rep;
    rep.value = prefactor * qr.value;
    rep.err_estimate = prefactor * qr.err_estimate;
    rep.method = "quadrature";
    rep.converged = qr.converged;
    rep.evals = qr.evals;
    rep.nodes_per_dim = cfg.nodes_per_dim;
    rep.verify_nodes_per_dim = cfg.verify_nodes_per_dim;
    rep.detail = "Kostlan integral, tensor Gauss-Legendre on the u/(1-u) cube";
    if (!rep.converged) rep.detail += " (two-level estimate above tolerance)";
    return rep;
}

EstimateReport e_nd(int n, int d, const quad::QuadConfig& cfg) {
    if (n < 2 || n > 4)
        throw std::invalid_argument("e_nd: unsupported dimension, need 2 <= n <= 4");
    if (d < 2) throw std::invalid_argument("e_nd: need d >= 2");
    if (d == 2) {
        EstimateReport rep;
        rep.value = e_n2_closed(n);
        rep.err_estimate = 0.0;
        rep.method = "closed-form";
        rep.converged = true;
        rep.detail = "E(n,2) = 2^(1-n)";
        return rep;
    }
    return e_nd_quadrature(n, d, cfg);
}

std::uint64_t negative_det_warnings() {
    return g_negative_det_warnings.load(std::memory_order_relaxed);
}

void reset_negative_det_warnings() {
    g_negative_det_warnings.store(0, std::memory_order_relaxed);
}

}  // namespace egt::kostlan
