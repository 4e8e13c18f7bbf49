// Deterministic random streams for replica-parallel Monte Carlo.
//
// Every replica gets its own stream derived from (seed, stream index), so
// results are bit-identical regardless of how replicas are scheduled across
// threads. All samplers are implemented in-repo: the distributions in
// <random> are not guaranteed to produce the same sequences across standard
// library implementations, which would break reproducibility of reports.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace hawkeslab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// xoshiro256++ stream with small distribution samplers attached.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : state_) w = splitmix64(sm);
    }

    /// Stream `stream` of a master seed; used for per-replica streams.
    static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed;
        splitmix64(sm);
        sm ^= (stream + 1) * 0xd1b54a32d192ed03ull;
        return Rng(splitmix64(sm));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0,1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0,1); never returns 0, safe under log() and pow(.,-c).
    double uniform_pos() {
        double u;
        do {
            u = uniform01();
        } while (u == 0.0);
        return u;
    }

    /// Exp(1).
    double exponential() { return -std::log(uniform_pos()); }

    /// Standard normal (Marsaglia polar, one value cached).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double x, y, s;
        do {
            x = 2.0 * uniform01() - 1.0;
            y = 2.0 * uniform01() - 1.0;
            s = x * x + y * y;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = y * f;
        have_cached_ = true;
        return x * f;
    }

    /// Poisson(mean). Product-of-uniforms inversion for small means,
    /// Hormann's PTRD transformed rejection for large ones.
    std::uint64_t poisson(double mean) {
        if (mean < 0.0 || !std::isfinite(mean)) throw std::invalid_argument("poisson: bad mean");
        if (mean == 0.0) return 0;
        if (mean <= 10.0) {
            const double limit = std::exp(-mean);
            std::uint64_t k = 0;
            double prod = uniform01();
            while (prod > limit) {
                ++k;
                prod *= uniform01();
            }
            return k;
        }
        return poisson_ptrd(mean);
    }

    /// Gamma(shape, scale=1), Marsaglia-Tsang.
    double gamma(double shape) {
        if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be positive");
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t poisson_ptrd(double mu) {
        const double smu = std::sqrt(mu);
        const double b = 0.931 + 2.53 * smu;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        while (true) {
            double u = uniform01() - 0.5;
            double v = uniform01();
            const double us = 0.5 - std::abs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                kf * std::log(mu) - mu - std::lgamma(kf + 1.0))
                return static_cast<std::uint64_t>(kf);
        }
    }

    std::uint64_t state_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace hawkeslab
