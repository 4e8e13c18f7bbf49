// Displacement kernels: critical densities phi on (0,inf) with a power tail
// t^alpha * Phi(t) -> c_phi, where Phi(t) = Int_t^inf phi.
//
// Three variants:
//   ParetoTail     phi(t) = alpha (1+t)^{-1-alpha}; closed-form everything,
//                  c_phi = 1 exactly. The canonical test kernel.
//   MittagLeffler  phi(t) = theta t^{alpha-1} E_{alpha,alpha}(-theta t^alpha);
//                  Phi(t) = E_{alpha,1}(-theta t^alpha), c_phi = 1/(theta Gamma(1-alpha)).
//   StableDensity  density of the one-sided alpha-stable law with Laplace
//                  transform exp(-lambda^alpha); c_phi = 1/Gamma(1-alpha).
//
// KernelSpec values are immutable after construction (including the sampling
// tabulation) and safe to share across worker threads.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hawkeslab/rng.hpp"

namespace hawkeslab {

enum class KernelVariant { ParetoTail, MittagLeffler, StableDensity };

/// Monotone-cubic tabulation of a decreasing tail function on a geometric
/// grid, used for Mittag-Leffler inverse-CDF sampling.
class TailTable {
  public:
    // y must be strictly decreasing; knots are geometric on [t_lo, t_hi].
    TailTable(double t_lo, double t_hi, std::vector<double> y);

    double value(double t) const;            // interpolated tail
    double invert(double target) const;      // t with tail(t) = target, target in (y_last, y_first)
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }
    std::size_t size() const { return y_.size(); }
    const std::vector<double>& knots() const { return y_; }

    // Versioned binary cache, keyed by the builder's parameter hash.
    // Round-trips bit-exactly.
    void save(const std::string& path, std::uint64_t param_hash) const;
    static std::shared_ptr<const TailTable> load(const std::string& path,
                                                 std::uint64_t param_hash);

  private:
    double x_of(double t) const;  // log t
    double t_lo_, t_hi_;
    std::vector<double> x_;   // log-spaced abscissas
    std::vector<double> y_;   // tail values, decreasing
    std::vector<double> m_;   // PCHIP slopes dy/dx
};

class KernelSpec {
  public:
    static KernelSpec pareto_tail(double alpha);
    static KernelSpec mittag_leffler(double alpha, double theta = 1.0,
                                     const std::string& cache_dir = "");
    static KernelSpec stable_density(double alpha);

    KernelVariant variant() const { return variant_; }
    double alpha() const { return alpha_; }
    double theta() const { return theta_; }
    /// Tail constant: lim t^alpha Phi(t).
    double c_phi() const { return c_phi_; }

    /// phi(t). Rejects t < 0. The Mittag-Leffler density diverges at 0; t == 0
    /// returns +infinity as the documented sentinel.
    double density(double t) const;

    /// Phi(t) = Int_t^inf phi. Exact for ParetoTail; for the other variants
    /// evaluated through the special-function layer (error ~ml_eps()).
    double tail(double t) const;

    /// One draw from phi.
    double sample_displacement(Rng& rng) const;

    /// Kernel behind an Ogata thinning bound must have nonincreasing, finite
    /// density; only ParetoTail qualifies.
    bool monotone_density() const { return variant_ == KernelVariant::ParetoTail; }

    std::string describe() const;

  private:
    KernelSpec() = default;
    KernelVariant variant_ = KernelVariant::ParetoTail;
    double alpha_ = 0.5;
    double theta_ = 1.0;
    double c_phi_ = 1.0;
    std::shared_ptr<const TailTable> table_;  // MittagLeffler sampling only
};

/// Numerical estimate of lim t^alpha Phi(t): t^alpha Phi(t) evaluated at the
/// top of a logarithmic grid. Tests use it to validate the c_phi field.
double estimate_tail_constant(const KernelSpec& kernel, double t_top = 1e6);

/// Parameter hash for tabulation caches.
std::uint64_t kernel_param_hash(double alpha, double theta);

}  // namespace hawkeslab
