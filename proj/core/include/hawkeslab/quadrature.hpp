// Double-exponential quadrature rules. tanh-sinh handles integrable endpoint
// singularities on a finite interval; exp-sinh covers (0, inf) for integrands
// with exponential-ish decay.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

namespace hawkeslab {

namespace detail {
constexpr double kPiHalf = 1.5707963267948966;
}

/// Integral of f over (a,b). f may blow up at the endpoints as long as the
/// singularity is integrable; non-finite evaluations are skipped (their
/// weights are double-exponentially small).
template <class F>
double tanh_sinh(F&& f, double a, double b, double tol = 1e-12, int max_level = 12) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double t_max = 6.11;  // tanh saturates to 1 ulp well before this

    auto node_sum = [&](double h, bool odd_only) {
        double sum = 0.0;
        for (double t = odd_only ? h : 0.0; t <= t_max; t += odd_only ? 2.0 * h : h) {
            const double cs = std::cosh(t);
            const double sn = detail::kPiHalf * std::sinh(t);
            const double w = detail::kPiHalf * cs / (std::cosh(sn) * std::cosh(sn));
            const double u = std::tanh(sn);
            for (int sign : {-1, 1}) {
                const double x = mid + sign * half * u;
                if (x <= a || x >= b) continue;
                const double fx = f(x);
                if (std::isfinite(fx)) sum += w * fx;
                if (t == 0.0) break;  // centre node counted once
            }
            if (t == 0.0 && odd_only) break;
        }
        return sum;
    };

    double h = 1.0;
    double acc = node_sum(h, false);
    double result = half * h * acc;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        acc += node_sum(h, true);
        const double next = half * h * acc;
        if (level >= 3 && std::abs(next - result) <= tol * (std::abs(next) + 1e-300)) {
            return next;
        }
        result = next;
    }
    return result;
}

/// Integral of f over (0, inf). `scale` sets where the bulk of the mass is.
template <class F>
double exp_sinh(F&& f, double tol = 1e-12, double scale = 1.0, int max_level = 12) {
    const double t_max = 4.8;  // exp(pi/2 sinh t) spans ~1e-300..1e300 here

    auto node_sum = [&](double h, bool odd_only) {
        double sum = 0.0;
        const double start = odd_only ? h : 0.0;
        const double step = odd_only ? 2.0 * h : h;
        for (double t = start; t <= t_max; t += step) {
            for (int sign : {-1, 1}) {
                const double ts = sign * t;
                const double x = scale * std::exp(detail::kPiHalf * std::sinh(ts));
                if (x <= 0.0 || !std::isfinite(x)) continue;
                const double w = x * detail::kPiHalf * std::cosh(ts);
                const double fx = f(x);
                if (std::isfinite(fx)) sum += w * fx;
                if (t == 0.0) break;
            }
            if (t == 0.0 && odd_only) break;
        }
        return sum;
    };

    double h = 1.0;
    double acc = node_sum(h, false);
    double result = h * acc;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        acc += node_sum(h, true);
        const double next = h * acc;
        if (level >= 3 && std::abs(next - result) <= tol * (std::abs(next) + 1e-300)) {
            return next;
        }
        result = next;
    }
    return result;
}

}  // namespace hawkeslab
