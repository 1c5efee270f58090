#include "egt/game_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "egt/rng.hpp"

namespace egt {

GameSpec::GameSpec(int n_, int d_) : n(n_), d(d_) {
    if (n < 2) throw std::invalid_argument("GameSpec: need n >= 2 strategies");
    if (d < 2) throw std::invalid_argument("GameSpec: need d >= 2 players");
}

std::uint64_t GameSpec::max_equilibria() const {
    std::uint64_t r = 1;
    const std::uint64_t base = static_cast<std::uint64_t>(d - 1);
    for (int i = 0; i < n - 1; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
            throw std::overflow_error("max_equilibria overflows 64 bits");
        r *= base;
    }
    return r;
}

std::vector<MultiIndex> enumerate_indices(const GameSpec& spec) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(spec.n - 1, 0);
    // depth-first with the leftmost exponent outermost => lexicographic order
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == spec.n - 1) {
            out.push_back(MultiIndex{cur});
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            cur[pos] = k;
            self(self, pos + 1, remaining - k);
        }
        cur[pos] = 0;
    };
    rec(rec, 0, spec.d - 1);
    return out;
}

CoeffSystem sample_system(const GameSpec& spec, double sigma, std::uint64_t seed) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sample_system: sigma must be positive");
    CoeffSystem sys{spec, sigma, seed, enumerate_indices(spec), {}, {}};

    sys.weights.reserve(sys.indices.size());
    std::vector<int> parts(spec.n);
    for (const MultiIndex& mi : sys.indices) {
        for (int i = 0; i < spec.n - 1; ++i) parts[i] = mi.k[i];
        parts[spec.n - 1] = spec.d - 1 - mi.sum();
        sys.weights.push_back(multinomial(spec.d - 1, parts));
    }

    sys.rows.assign(spec.n - 1, std::vector<double>(sys.indices.size()));
    for (int i = 0; i < spec.n - 1; ++i)
        for (std::size_t j = 0; j < sys.indices.size(); ++j)
            sys.rows[i][j] = sigma * gaussian_at(seed, static_cast<std::uint64_t>(i), j) *
                             sys.weights[j];
    return sys;
}

double eval_poly(const CoeffSystem& system, int row, std::span<const double> y) {
    const int m = system.spec.n - 1;
    if (row < 1 || row > m) throw std::invalid_argument("eval_poly: row out of range");
    if (static_cast<int>(y.size()) != m)
        throw std::invalid_argument("eval_poly: y has wrong dimension");

    const std::vector<double>& coeffs = system.rows[row - 1];
    double sum = 0.0, comp = 0.0;  // Kahan
    for (std::size_t j = 0; j < system.indices.size(); ++j) {
        double term = coeffs[j];
        for (int l = 0; l < m; ++l)
            for (int e = 0; e < system.indices[j].k[l]; ++e) term *= y[l];
        const double adj = term - comp;
        const double t = sum + adj;
        comp = (t - sum) - adj;
        sum = t;
    }
    return sum;
}

}  // namespace egt
