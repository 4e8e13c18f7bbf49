#include "hawkeslab/marks.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hawkeslab/quadrature.hpp"
#include "hawkeslab/special.hpp"

namespace hawkeslab {

MarkDistribution MarkDistribution::dirac_one() {
    MarkDistribution m;
    m.variant_ = MarkVariant::DiracOne;
    m.second_moment_ = 1.0;
    return m;
}

MarkDistribution MarkDistribution::pareto_mean1(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("pareto_mean1: need beta in (0,1)");
    MarkDistribution m;
    m.variant_ = MarkVariant::ParetoMean1;
    m.beta_ = beta;
    m.x_m_ = beta / (1.0 + beta);  // pins the mean to 1 at shape 1+beta
    m.c_nu_ = std::pow(m.x_m_, 1.0 + beta);
    return m;
}

MarkDistribution MarkDistribution::exponential_mean1() {
    MarkDistribution m;
    m.variant_ = MarkVariant::ExponentialMean1;
    m.second_moment_ = 2.0;
    return m;
}

MarkDistribution MarkDistribution::gamma_mean1(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma_mean1: need shape > 0");
    MarkDistribution m;
    m.variant_ = MarkVariant::GammaMean1;
    m.shape_ = shape;
    m.second_moment_ = 1.0 + 1.0 / shape;  // mean 1, variance 1/shape
    return m;
}

double MarkDistribution::sample(Rng& rng) const {
    switch (variant_) {
        case MarkVariant::DiracOne:
            return 1.0;
        case MarkVariant::ParetoMean1:
            return x_m_ * std::pow(rng.uniform_pos(), -1.0 / (1.0 + beta_));
        case MarkVariant::ExponentialMean1:
            return rng.exponential();
        case MarkVariant::GammaMean1:
            return rng.gamma(shape_) / shape_;
    }
    return 1.0;
}

double MarkDistribution::tail(double x) const {
    if (x < 0.0) throw std::invalid_argument("mark tail: x must be >= 0");
    switch (variant_) {
        case MarkVariant::DiracOne:
            return x < 1.0 ? 1.0 : 0.0;
        case MarkVariant::ParetoMean1:
            return x <= x_m_ ? 1.0 : std::pow(x_m_ / x, 1.0 + beta_);
        case MarkVariant::ExponentialMean1:
            return std::exp(-x);
        case MarkVariant::GammaMean1:
            return reg_gamma_upper(shape_, shape_ * x);
    }
    return 0.0;
}

namespace {

// Pareto(shape p = 1+beta, scale xm) Laplace transform by the exact expansion
//   L(z) = 1 - z + p c_nu Gamma(-p) z^p - p c_nu sum_{k>=2} (-1)^k xm^{k-p} z^k / (k! (k-p)),
// where p c_nu Gamma(-p) = (c_nu/beta) Gamma(1-beta). Terms decay factorially;
// the alternating sum is well conditioned for y = xm z <= 12.
double pareto_laplace_series(double beta, double xm, double z) {
    const double p = 1.0 + beta;
    const double c_nu = std::pow(xm, p);
    const double lead = c_nu / beta * std::tgamma(1.0 - beta) * std::pow(z, p);
    double sum = 0.0;
    double pow_term = xm * xm * z * z / 2.0;  // xm^k z^k / k! at k = 2
    double sign = 1.0;
    for (int k = 2; k < 120; ++k) {
        const double term = sign * pow_term / (static_cast<double>(k) - p);
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30) && k > 4) break;
        pow_term *= xm * z / static_cast<double>(k + 1);
        sign = -sign;
    }
    return 1.0 - z + lead - p * std::pow(xm, -p) * c_nu * sum;
}

double pareto_laplace_quadrature(double beta, double xm, double z) {
    const double p = 1.0 + beta;
    // Int_{xm}^inf e^{-zu} p xm^p u^{-p-1} du, shifted to w = u - xm.
    auto integrand = [&](double w) { return std::exp(-z * w) * std::pow(xm + w, -p - 1.0); };
    const double integral = exp_sinh(integrand, 1e-13, 1.0 / z);
    return p * std::pow(xm, p) * std::exp(-z * xm) * integral;
}

}  // namespace

double MarkDistribution::laplace(double z) const {
    if (z < 0.0) throw std::invalid_argument("mark laplace: z must be >= 0");
    if (z == 0.0) return 1.0;
    switch (variant_) {
        case MarkVariant::DiracOne:
            return std::exp(-z);
        case MarkVariant::ExponentialMean1:
            return 1.0 / (1.0 + z);
        case MarkVariant::GammaMean1:
            return std::pow(1.0 + z / shape_, -shape_);
        case MarkVariant::ParetoMean1:
            if (x_m_ * z <= 12.0) return pareto_laplace_series(beta_, x_m_, z);
            return pareto_laplace_quadrature(beta_, x_m_, z);
    }
    return 0.0;
}

double MarkDistribution::H(double x) const {
    if (x < 0.0) throw std::invalid_argument("mark H: x must be >= 0");
    if (x == 0.0) return 0.0;
    switch (variant_) {
        case MarkVariant::DiracOne:
            return std::expm1(-x) + x;
        case MarkVariant::ExponentialMean1:
            return x * x / (1.0 + x);  // 1/(1+x) - 1 + x, exactly
        case MarkVariant::GammaMean1: {
            if (x < 1e-4) {
                const double k = shape_;
                const double m2 = (k + 1.0) / k;
                const double m3 = (k + 1.0) * (k + 2.0) / (k * k);
                const double m4 = (k + 1.0) * (k + 2.0) * (k + 3.0) / (k * k * k);
                return x * x * (m2 / 2.0 - x * (m3 / 6.0 - x * m4 / 24.0));
            }
            return laplace(x) - 1.0 + x;
        }
        case MarkVariant::ParetoMean1: {
            const double y = x_m_ * x;
            if (y <= 12.0) {
                // Same expansion as the Laplace series with the 1 - z cancelled
                // analytically; exact at small x, no catastrophic subtraction.
                const double p = 1.0 + beta_;
                const double lead = h_tail_constant() * std::pow(x, p);
                double sum = 0.0;
                double pow_term = y * y / 2.0;
                double sign = 1.0;
                for (int k = 2; k < 120; ++k) {
                    const double term = sign * pow_term / (static_cast<double>(k) - p);
                    sum += term;
                    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30) && k > 4) break;
                    pow_term *= y / static_cast<double>(k + 1);
                    sign = -sign;
                }
                return lead - p * sum;
            }
            return laplace(x) - 1.0 + x;
        }
    }
    return 0.0;
}

double MarkDistribution::h_tail_constant() const {
    if (!heavy_tailed()) throw std::logic_error("h_tail_constant: marks are not heavy tailed");
    return *c_nu_ / beta_ * std::tgamma(1.0 - beta_);
}

std::string MarkDistribution::describe() const {
    char buf[96];
    switch (variant_) {
        case MarkVariant::DiracOne:
            return "dirac";
        case MarkVariant::ParetoMean1:
            std::snprintf(buf, sizeof buf, "pareto_mean1(beta=%g)", beta_);
            return buf;
        case MarkVariant::ExponentialMean1:
            return "exponential_mean1";
        case MarkVariant::GammaMean1:
            std::snprintf(buf, sizeof buf, "gamma_mean1(shape=%g)", shape_);
            return buf;
    }
    return "";
}

}  // namespace hawkeslab
