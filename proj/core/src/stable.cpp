#include "hawkeslab/stable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkeslab/special.hpp"

namespace hawkeslab {

double sample_positive_stable(double alpha, Rng& rng) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("sample_positive_stable: need alpha in (0,1)");
    const double u = M_PI * rng.uniform_pos();
    const double w = rng.exponential();
    const double a = stable_zolotarev_a(alpha, u);
    return std::pow(a / w, (1.0 - alpha) / alpha);
}

double sample_skewed_stable(double a, Rng& rng) {
    if (!(a > 1.0 && a < 2.0))
        throw std::invalid_argument("sample_skewed_stable: need index in (1,2)");
    // CMS for S_a(sigma, beta=1, 0) with sigma^a = -cos(pi a/2); the sigma
    // cancels the (cos(a theta0))^{-1/a} prefactor, leaving:
    const double theta0 = M_PI_2 - M_PI / a;
    const double theta = M_PI * (rng.uniform_pos() - 0.5);  // (-pi/2, pi/2)
    const double w = rng.exponential();
    const double s = std::sin(a * (theta0 + theta)) / std::pow(std::cos(theta), 1.0 / a);
    const double tail = std::pow(std::cos(a * theta0 + (a - 1.0) * theta) / w, (1.0 - a) / a);
    return s * tail;
}

double sample_stable(const StableParams& params, Rng& rng) {
    if (params.normalization == StableNormalization::LaplaceNegExp)
        return sample_positive_stable(params.index, rng);
    return sample_skewed_stable(params.index, rng);
}

double LimitModel::self_similarity_index() const {
    if (gaussian) return (1.0 + 3.0 * alpha) / 2.0;
    return (1.0 + alpha * (2.0 + beta)) / (1.0 + beta);
}

double LimitModel::norming(double T) const { return std::pow(T, ft_exponent()); }

double LimitModel::laplace_target_indicator01() const {
    const double bexp = gaussian ? 1.0 : beta;
    return mu * K * std::pow(alpha, -(1.0 + bexp)) *
           beta_fn(1.0 + alpha, 1.0 + alpha * (1.0 + bexp));
}

double LimitModel::limit_prefactor() const {
    if (gaussian) return std::sqrt(2.0 * mu * K) / alpha;
    return std::pow(mu * K, 1.0 / (1.0 + beta)) / alpha;
}

double c_alpha_closed_form(double alpha, double c_phi) {
    return 1.0 / (c_phi * std::tgamma(1.0 + alpha) * std::tgamma(1.0 - alpha));
}

LimitModel LimitModel::heavy(double alpha, double beta, double h_const, double c_alpha,
                             double mu) {
    if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("LimitModel::heavy: need alpha, beta in (0,1)");
    LimitModel m;
    m.alpha = alpha;
    m.beta = beta;
    m.mu = mu;
    m.c_alpha = c_alpha;
    m.gaussian = false;
    m.K = h_const * std::pow(c_alpha, 2.0 + beta) * std::pow(alpha, 1.0 + beta);
    return m;
}

LimitModel LimitModel::finite_variance(double alpha, double second_moment, double c_alpha,
                                       double mu) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("LimitModel::finite_variance: need alpha in (0,1)");
    LimitModel m;
    m.alpha = alpha;
    m.beta = 1.0;
    m.mu = mu;
    m.c_alpha = c_alpha;
    m.gaussian = true;
    m.K = 0.5 * second_moment * std::pow(c_alpha, 3.0) * alpha * alpha;
    return m;
}

namespace {

template <class DrawIncrement>
std::vector<double> limit_path(double u_exponent, double alpha, double dt,
                               std::span<const double> times, DrawIncrement&& draw) {
    if (!(dt > 0.0)) throw std::invalid_argument("limit path: need dt > 0");
    double t_max = 0.0;
    for (double t : times) t_max = std::max(t_max, t);
    const std::size_t cells = static_cast<std::size_t>(std::ceil(t_max / dt));
    std::vector<double> increments(cells);
    for (auto& dl : increments) dl = draw();
    std::vector<double> out(times.size(), 0.0);
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        double acc = 0.0;
        for (std::size_t i = 0; i < cells; ++i) {
            const double u = (static_cast<double>(i) + 0.5) * dt;  // midpoint cell
            if (u >= t) break;
            acc += std::pow(u, u_exponent) * std::pow(t - u, alpha) * increments[i];
        }
        out[j] = acc;
    }
    return out;
}

}  // namespace

std::vector<double> simulate_limit_process(double alpha, double beta, double dt,
                                           std::span<const double> times, Rng& rng) {
    const double scale = std::pow(dt, 1.0 / (1.0 + beta));
    return limit_path(alpha / (1.0 + beta), alpha, dt, times,
                      [&] { return scale * sample_skewed_stable(1.0 + beta, rng); });
}

std::vector<double> simulate_gaussian_limit(double alpha, double dt,
                                            std::span<const double> times, Rng& rng) {
    const double scale = std::sqrt(dt);
    return limit_path(alpha / 2.0, alpha, dt, times, [&] { return scale * rng.normal(); });
}

}  // namespace hawkeslab
