// Mark laws nu on (0,inf) with mean exactly 1, their tails, Laplace
// transforms, and the nonlinearity H(x) = Int (e^{-ux} - 1 + ux) nu(du) that
// sets the limit constant.
//
// ParetoMean1{beta} is the canonical heavy-tailed law: support [x_m, inf)
// with x_m = beta/(1+beta) and shape 1+beta, so the mean is pinned to 1 and
// the tail constant c_nu = x_m^{1+beta} carries no free parameter.
//
// Immutable after construction; samplers take an external per-worker stream.
#pragma once

#include <optional>
#include <string>

#include "hawkeslab/rng.hpp"

namespace hawkeslab {

enum class MarkVariant { DiracOne, ParetoMean1, ExponentialMean1, GammaMean1 };

class MarkDistribution {
  public:
    static MarkDistribution dirac_one();
    static MarkDistribution pareto_mean1(double beta);
    static MarkDistribution exponential_mean1();
    static MarkDistribution gamma_mean1(double shape);

    MarkVariant variant() const { return variant_; }
    double beta() const { return beta_; }
    double shape() const { return shape_; }
    /// Support left edge of the Pareto variant, beta/(1+beta).
    double x_m() const { return x_m_; }
    /// Tail constant lim x^{1+beta} nu((x,inf)); only the heavy variant has one.
    std::optional<double> c_nu() const { return c_nu_; }
    /// Int x^2 nu(dx); present iff finite.
    std::optional<double> second_moment() const { return second_moment_; }
    bool heavy_tailed() const { return variant_ == MarkVariant::ParetoMean1; }

    double sample(Rng& rng) const;

    /// nu((x,inf)), exact for every variant.
    double tail(double x) const;

    /// L_nu(z) = Int e^{-uz} nu(du), z >= 0. Closed form except for Pareto,
    /// which uses an exact series for x_m z <= 12 and quadrature beyond;
    /// absolute error <= 1e-10.
    double laplace(double z) const;

    /// H(x) = laplace(x) - 1 + x (mean 1 makes this identity exact).
    /// Nonnegative and nondecreasing; small-x branches avoid cancellation.
    double H(double x) const;

    /// (c_nu/beta) Gamma(1-beta): the constant in H(x) ~ const * x^{1+beta}.
    double h_tail_constant() const;

    std::string describe() const;

  private:
    MarkDistribution() = default;
    MarkVariant variant_ = MarkVariant::DiracOne;
    double beta_ = 0.0;
    double shape_ = 1.0;
    double x_m_ = 0.0;
    std::optional<double> c_nu_;
    std::optional<double> second_moment_;
};

}  // namespace hawkeslab
