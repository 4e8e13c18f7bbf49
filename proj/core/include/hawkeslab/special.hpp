// Special functions needed by the kernel and mark laws: Mittag-Leffler
// E_{a,b} on the negative half-line, one-sided stable density/CDF in the
// exp(-lambda^alpha) Laplace normalization, and a few small helpers.
#pragma once

namespace hawkeslab {

double lbeta(double a, double b);
double beta_fn(double a, double b);

/// exp(x^2) * erfc(x) for x >= 0 without overflow.
double erfcx_positive(double x);

/// Regularized upper incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a).
double reg_gamma_upper(double a, double x);

/// Mittag-Leffler E_{a,b}(z) for a in (0,1], b in (0, 1+a], z <= 0.
///
/// Branches: power series for small |z|, spectral integral representation in
/// the mid range, terminated asymptotic series for large |z|. Absolute error
/// is bounded by ml_eps() over the supported parameter range.
double mittag_leffler(double a, double b, double z);

/// Documented accuracy bound for mittag_leffler().
constexpr double ml_eps() { return 1e-9; }

/// Switch points of mittag_leffler(): series for |z| <= first, asymptotic
/// series for |z| >= second, spectral integral in between.
constexpr double ml_series_cut() { return 1.0; }
constexpr double ml_asymptotic_cut() { return 1e8; }

/// Zolotarev's A-function on (0, pi); the Kanter sampler and the one-sided
/// stable density/CDF below are all built from it.
double stable_zolotarev_a(double alpha, double u);

/// Density of the one-sided alpha-stable law with E exp(-l X) = exp(-l^alpha),
/// alpha in (0,1), x >= 0.
double positive_stable_density(double alpha, double x);

/// CDF of the same law.
double positive_stable_cdf(double alpha, double x);

}  // namespace hawkeslab
