#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace tsa {

/// Deterministic standard-normal generator: mt19937_64 plus an explicit
/// Box-Muller transform. std::normal_distribution is implementation-defined,
/// which would make fixtures differ across standard libraries; this one is
/// reproducible everywhere.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in (0, 1), 53-bit resolution.
    double uniform() {
        const std::uint64_t bits = gen_() >> 11;
        return (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t next_raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct ArmaSimSpec {
    std::vector<double> phi;
    std::vector<double> theta;
    double constant = 0.0;
    double sigma = 1.0;
    std::size_t burnin = 200;
};

/// Simulate n values of the ARMA recursion
///   x_t = c + sum phi_i x_{t-i} + eps_t + sum theta_j eps_{t-j}
/// discarding a burn-in prefix so the start-up transient dies out.
inline std::vector<double> simulate_arma(const ArmaSimSpec& spec, std::size_t n, NormalRng& rng) {
    const std::size_t p = spec.phi.size(), q = spec.theta.size();
    const std::size_t total = n + spec.burnin + std::max(p, q);
    std::vector<double> x(total, 0.0), eps(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        eps[t] = spec.sigma * rng.normal();
        double v = spec.constant + eps[t];
        for (std::size_t i = 1; i <= p && i <= t; ++i) v += spec.phi[i - 1] * x[t - i];
        for (std::size_t j = 1; j <= q && j <= t; ++j) v += spec.theta[j - 1] * eps[t - j];
        x[t] = v;
    }
    return {x.end() - static_cast<std::ptrdiff_t>(n), x.end()};
}

/// Simulate an ARIMA(p,d,q) level series of length n: ARMA innovations of
/// length n-d integrated d times, anchored at start_value.
inline std::vector<double> simulate_arima(const ArmaSimSpec& spec, std::size_t d, std::size_t n,
                                          NormalRng& rng, double start_value = 0.0) {
    if (n <= d) throw std::invalid_argument("series length must exceed differencing order");
    std::vector<double> cur = simulate_arma(spec, n - d, rng);
    for (std::size_t round = 0; round < d; ++round) {
        std::vector<double> up(cur.size() + 1);
        up[0] = (round + 1 == d) ? start_value : 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) up[i + 1] = up[i] + cur[i];
        cur = std::move(up);
    }
    return cur;
}

/// Choose which grid slots stay present when thinning a series to
/// `keep_count` observations; the first and last slots always survive.
/// Returns sorted indices.
inline std::vector<std::size_t> sample_present_indices(std::size_t n, std::size_t keep_count,
                                                       NormalRng& rng) {
    if (keep_count < 2 || keep_count > n)
        throw std::invalid_argument("keep_count must be in [2, n]");
    std::vector<std::size_t> interior(n >= 2 ? n - 2 : 0);
    for (std::size_t i = 0; i < interior.size(); ++i) interior[i] = i + 1;
    // Fisher-Yates driven by the deterministic generator
    for (std::size_t i = interior.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_raw() % i);
        std::swap(interior[i - 1], interior[j]);
    }
    std::vector<std::size_t> keep;
    keep.reserve(keep_count);
    keep.push_back(0);
    for (std::size_t i = 0; i + 2 < keep_count && i < interior.size(); ++i)
        keep.push_back(interior[i]);
    keep.push_back(n - 1);
    std::sort(keep.begin(), keep.end());
    return keep;
}

}  // namespace tsa
