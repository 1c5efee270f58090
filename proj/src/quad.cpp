#include "egt/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace egt::quad {

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
    if (m < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    nodes.assign(m, 0.0);
    weights.assign(m, 0.0);
    // Newton on P_m with Chebyshev-like initial guesses; compute one half,
    // mirror the other.
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one clean-up iteration after convergence
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= m; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if (m % 2 == 1) nodes[m / 2] = 0.0;
}

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct RuleResult {
    double value;      // K15
    double err;        // QUADPACK-style estimate
};

RuleResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    double fv[15];
    const double fc = f(c);
    fv[7] = fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        fv[i] = f(c - dx);
        fv[14 - i] = f(c + dx);
    }

    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    double resabs = std::abs(resk);
    for (int i = 0; i < 7; ++i) {
        const double sum = fv[i] + fv[14 - i];
        resk += kWgk[i] * sum;
        resabs += kWgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
        if (i % 2 == 1) resg += kWg[i / 2] * sum;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));

    const double value = resk * h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(err, 50.0 * eps * resabs);
    return {value, err};
}

struct Interval {
    double a, b, value, err;
    int depth;
    bool operator<(const Interval& o) const { return err < o.err; }
};

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadConfig& cfg) {
    if (!(a < b)) throw std::invalid_argument("integrate_1d: need a < b");

    std::priority_queue<Interval> open;
    const RuleResult first = gk15(f, a, b);
    open.push({a, b, first.value, first.err, 0});

    QuadResult res;
    res.evals = 15;
    double open_value = first.value, open_err = first.err;

    const long max_intervals = 200000;
    long n_intervals = 1;
    while (!open.empty()) {
        if (open_err <= std::max(cfg.rel_tol * std::abs(open_value), cfg.abs_tol)) break;
        if (n_intervals >= max_intervals) break;

        const Interval worst = open.top();
        if (worst.depth >= cfg.max_depth) break;  // the dominant error can no longer shrink
        open.pop();
        open_value -= worst.value;
        open_err -= worst.err;

        const double mid = 0.5 * (worst.a + worst.b);
        const RuleResult left = gk15(f, worst.a, mid);
        const RuleResult right = gk15(f, mid, worst.b);
        res.evals += 30;
        ++n_intervals;
        for (const auto& part : {Interval{worst.a, mid, left.value, left.err, worst.depth + 1},
                                 Interval{mid, worst.b, right.value, right.err, worst.depth + 1}}) {
            open.push(part);
            open_value += part.value;
            open_err += part.err;
        }
    }

    res.value = open_value;
    res.err_estimate = open_err;
    res.converged =
        res.err_estimate <= std::max(cfg.rel_tol * std::abs(res.value), cfg.abs_tol);
    return res;
}

namespace {

double tensor_level(const std::function<double(std::span<const double>)>& f, int dims,
                    int m, int threads) {
    std::vector<double> x01, w01;
    gauss_legendre(m, x01, w01);
    for (int i = 0; i < m; ++i) {
        x01[i] = 0.5 * (x01[i] + 1.0);
        w01[i] *= 0.5;
    }
    std::vector<double> t(m), jw(m);  // node image and weight*jacobian per axis
    for (int i = 0; i < m; ++i) {
        const double u = x01[i];
        t[i] = u / (1.0 - u);
        jw[i] = w01[i] / ((1.0 - u) * (1.0 - u));
    }

    long total = 1;
    for (int k = 0; k < dims; ++k) total *= m;
    std::vector<double> contrib(static_cast<std::size_t>(total));

    auto worker = [&](long begin, long end) {
        std::vector<double> point(dims);
        for (long id = begin; id < end; ++id) {
            long rem = id;
            double wt = 1.0;
            for (int k = 0; k < dims; ++k) {
                const int ik = static_cast<int>(rem % m);
                rem /= m;
                point[k] = t[ik];
                wt *= jw[ik];
            }
            const double fv = f(point);
            if (!std::isfinite(fv)) {
                std::ostringstream os;
                os << "integrate_semiinf_nd: non-finite integrand at t = (";
                for (int k = 0; k < dims; ++k) os << (k ? ", " : "") << point[k];
                os << ")";
                throw std::domain_error(os.str());
            }
            contrib[static_cast<std::size_t>(id)] = wt * fv;
        }
    };

    const int nthreads = std::min<long>(resolve_threads(threads), total);
    if (nthreads <= 1) {
        worker(0, total);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mutex;
        const long chunk = (total + nthreads - 1) / nthreads;
        for (int ti = 0; ti < nthreads; ++ti) {
            const long begin = ti * chunk;
            const long end = std::min(total, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                try {
                    worker(begin, end);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }
    return pairwise_sum(contrib);
}

}  // namespace

QuadResult integrate_semiinf_nd(const std::function<double(std::span<const double>)>& f,
                                int dims, const QuadConfig& cfg) {
    if (dims < 1 || dims > 3)
        throw std::invalid_argument("integrate_semiinf_nd: dims must be 1..3");
    if (cfg.verify_nodes_per_dim >= cfg.nodes_per_dim || cfg.verify_nodes_per_dim < 1)
        throw std::invalid_argument("integrate_semiinf_nd: need 1 <= verify_nodes < nodes");

    QuadResult res;
    res.coarse_value = tensor_level(f, dims, cfg.verify_nodes_per_dim, cfg.threads);
    res.value = tensor_level(f, dims, cfg.nodes_per_dim, cfg.threads);
    long fine = 1, coarse = 1;
    for (int k = 0; k < dims; ++k) {
        fine *= cfg.nodes_per_dim;
        coarse *= cfg.verify_nodes_per_dim;
    }
    res.evals = fine + coarse;
    res.err_estimate = std::abs(res.value - res.coarse_value);
    res.converged =
        res.err_estimate <= std::max(cfg.nd_rel_tol * std::abs(res.value), cfg.nd_abs_tol);
    return res;
}

}  // namespace egt::quad
