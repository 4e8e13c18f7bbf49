// Totally skewed stable laws and the limit processes.
//
// Laplace conventions used everywhere (characteristic functions are avoided
// on purpose, they carry sign/skewness pitfalls):
//   index a in (0,1):  E exp(-l X) = exp(-l^a), X > 0
//   index a in (1,2):  E exp(-l X) = exp(+l^a), E X = 0, skewness +1
#pragma once

#include <span>
#include <vector>

#include "hawkeslab/rng.hpp"

namespace hawkeslab {

enum class StableNormalization { LaplaceNegExp, LaplacePosExp };

struct StableParams {
    double index = 0.5;  // (0,1) for LaplaceNegExp, (1,2) for LaplacePosExp
    StableNormalization normalization = StableNormalization::LaplaceNegExp;
};

/// One-sided stable draw (Kanter construction), index alpha in (0,1),
/// normalized so E exp(-l X) = exp(-l^alpha).
double sample_positive_stable(double alpha, Rng& rng);

/// Totally skewed stable draw, index a in (1,2), mean zero, normalized so
/// E exp(-l X) = exp(+l^a). Chambers-Mallows-Stuck with the scale folded in.
double sample_skewed_stable(double a, Rng& rng);

double sample_stable(const StableParams& params, Rng& rng);

/// c_alpha = 1/(c_phi Gamma(1+alpha) Gamma(1-alpha)), the I_R(T)/T^alpha limit.
double c_alpha_closed_form(double alpha, double c_phi);

/// Limit model constants for the normalized counting process.
///
/// Heavy tail: K = h_const c_alpha^{2+beta} alpha^{1+beta} with h_const the
/// small-x constant of the branching nonlinearity H(x) ~ h_const x^{1+beta}:
/// (c_nu/beta) Gamma(1-beta) for Poisson-of-mark branching, 1/(1+beta) for
/// the beta-offspring system. F_T = T^H, H = (1+alpha(2+beta))/(1+beta).
/// Finite variance: K = (m2/2) c_alpha^3 alpha^2, F_T = T^{(1+3 alpha)/2}.
struct LimitModel {
    double alpha = 0.3;
    double beta = 0.6;          // 1 for the Gaussian branch
    double mu = 1.0;
    double c_alpha = 0.0;
    double K = 0.0;
    bool gaussian = false;

    /// Self-similarity index of the limit path; equals the F_T exponent.
    double self_similarity_index() const;
    double ft_exponent() const { return self_similarity_index(); }
    double norming(double T) const;

    /// Laplace exponent coefficient of the limit of <X_T, f> for f = 1_{[0,u]}:
    /// mu K alpha^{-(1+beta)} B(1+alpha, 1+alpha(1+beta)) u^{...}; evaluated at u=1.
    double laplace_target_indicator01() const;

    /// Prefactor c such that X_T(t) -> c * zeta(t) in law (zeta in the module's
    /// Laplace normalization): (mu K)^{1/(1+beta)}/alpha, or sqrt(2 mu K)/alpha
    /// in the Gaussian branch.
    double limit_prefactor() const;

    static LimitModel heavy(double alpha, double beta, double h_const, double c_alpha, double mu);
    static LimitModel finite_variance(double alpha, double second_moment, double c_alpha,
                                      double mu);
};

/// Path of zeta_t = Int_{[0,t]} u^{alpha/(1+beta)} (t-u)^alpha dL_{1+beta}(u)
/// on the requested output times: midpoint Riemann cells of width dt, cell
/// increments dt^{1/(1+beta)} S_i with S_i i.i.d. skewed stable. O(cells) per
/// output time.
std::vector<double> simulate_limit_process(double alpha, double beta, double dt,
                                           std::span<const double> times, Rng& rng);

/// Gaussian analogue zeta_t = Int u^{alpha/2} (t-u)^alpha dB(u); cell
/// increments are N(0, dt).
std::vector<double> simulate_gaussian_limit(double alpha, double dt,
                                            std::span<const double> times, Rng& rng);

}  // namespace hawkeslab
