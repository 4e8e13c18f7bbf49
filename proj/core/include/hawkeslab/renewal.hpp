// Deterministic numerics for the critical self-exciting system.
//
// Everything is mass-based on a uniform grid: cell k carries the exact kernel
// mass m_k = Phi(k dt) - Phi((k+1) dt), so criticality Sum m + Phi(horizon) = 1
// holds by telescoping and the integrable Mittag-Leffler singularity at 0
// costs nothing. Convolutions couple cell j to cells j+k with the same-cell
// contribution running through m_0 (m_0 < 1 keeps every per-cell equation a
// contraction).
//
//   resolvent      r = m + m * r        (forward recursion)
//   mean           h = f + m * h        (backward, h = 0 beyond supp f)
//   Laplace        g = 1 - e^{-f} G(m * g)
//   centered       w = h - g,   log E e^{-(<N,f> - E<N,f>)} = mu Int w
//
// G is the offspring functional: the mark Laplace transform L_nu for
// Poisson-of-mark branching, or G(1-u) = 1 - u + u^{1+beta}/(1+beta) for the
// beta-offspring system.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hawkeslab/kernels.hpp"
#include "hawkeslab/marks.hpp"

namespace hawkeslab {

struct Grid {
    double dt = 1.0;
    std::size_t n = 0;
    double horizon() const { return dt * static_cast<double>(n); }
    double midpoint(std::size_t j) const { return (static_cast<double>(j) + 0.5) * dt; }
};

/// Piecewise-constant test function with compact support: value vals[i] on
/// [breaks[i], breaks[i+1]), zero outside [breaks.front(), breaks.back()).
class TestFunction {
  public:
    TestFunction(std::vector<double> breaks, std::vector<double> vals);

    /// c * 1_{[t0,t1)}.
    static TestFunction indicator(double t0, double t1, double c = 1.0);
    /// sum_k a_k 1_{[0,t_k)}.
    static TestFunction indicator_combination(std::span<const double> a,
                                              std::span<const double> t);

    double operator()(double t) const;
    double support_end() const { return breaks_.back(); }
    bool nonnegative() const;
    /// f(./T)/F_T.
    TestFunction scaled(double T, double F_T) const;

    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<double>& values() const { return vals_; }

  private:
    std::vector<double> breaks_;
    std::vector<double> vals_;
};

/// G^{(alpha)} f(t) = Int_0^inf f(t+s) s^{alpha-1} ds, closed form for
/// piecewise-constant f. Rejects alpha outside (0,1).
double g_alpha(const TestFunction& f, double t, double alpha);

struct ResolventTable {
    Grid grid;
    double kernel_alpha = 0.0;
    std::vector<double> mass;       // m_k, kernel mass in cell k
    std::vector<double> resolvent;  // r_k, resolvent mass in cell k
    std::vector<double> ir;         // ir[k] = I_R(k dt), size n+1, nondecreasing
    double tail_at_horizon = 0.0;   // Phi(n dt)
    double c_alpha_estimate = 0.0;  // I_R(horizon)/horizon^alpha

    double i_r(double t) const;  // linear interpolation of the cumulative array
};

/// Rejects grids with m_0 >= 1 (too coarse for the renewal recursion).
ResolventTable build_resolvent(const KernelSpec& kernel, const Grid& grid);

/// Exact E N([0,u]) = mu (u + Int_0^u I_R); trapezoid on the cumulative array.
double exact_mean_n(const ResolventTable& table, double mu, double u);

struct TightnessReport {
    double sup_ratio = 0.0;
    double arg_s = 0.0, arg_t = 0.0;
    double T = 0.0, M = 0.0, eps = 0.0;
};

/// sup over grid pairs s < t <= M of (I_R(Tt) - I_R(Ts)) / (T^alpha (t-s)^eps).
/// Pairs closer than one table cell are skipped (0/0 guard). Needs T*M within
/// the table horizon.
TightnessReport check_tightness(const ResolventTable& table, double T, double M, double eps,
                                std::size_t check_points = 256);

/// Offspring generating functional evaluated at 1-u: E (1-u)^{#children}.
class OffspringTransform {
  public:
    static OffspringTransform poisson_marked(MarkDistribution marks);
    static OffspringTransform beta_sibuya(double beta);

    double operator()(double u) const;
    /// The H nonlinearity of this branching law: G(1-u) - 1 + u.
    double nonlinearity(double u) const;
    /// Constant in H(u) ~ const u^{1+beta} as u -> 0.
    double h_tail_constant() const;
    bool is_beta_sibuya() const { return sibuya_; }
    double beta() const;
    const MarkDistribution& marks() const { return marks_; }

  private:
    OffspringTransform() = default;
    bool sibuya_ = false;
    double beta_ = 0.0;
    MarkDistribution marks_ = MarkDistribution::dirac_one();
};

struct SolverState {
    Grid grid;
    std::vector<double> g, h, w;  // values at cell midpoints; w = h - g
    double mu = 1.0;
    double exact_mean = 0.0;         // mu Sum h dt = E <N, f>
    double exact_log_laplace = 0.0;  // mu Sum w dt; E e^{-(<N,f>-E<N,f>)} = exp(+this)
    double g_integral = 0.0;         // Sum g dt;    E e^{-<N,f>} = exp(-mu * this)
    double w_integral = 0.0;         // Sum w dt
};

/// Backward-marching solver. Requires f >= 0 with support inside the grid
/// horizon; g = h = 0 to the right of the support because displacements are
/// positive.
SolverState solve_g(const TestFunction& f, const ResolventTable& table,
                    const OffspringTransform& offspring, double mu = 1.0);

struct ScaledSolveResult {
    double T = 0.0, F_T = 0.0;
    double w_integral = 0.0;      // Int w_{f_T}; log-Laplace exponent / mu
    double g_integral = 0.0;
    double exact_mean = 0.0;      // at mu
    Grid grid;
};

/// solve_g applied to f_T(t) = f(t/T)/F_T on a grid of `cells` cells covering
/// [0, supp(f) * T].
ScaledSolveResult scaled_w_integral(const TestFunction& f, const KernelSpec& kernel,
                                    const OffspringTransform& offspring, double T, double F_T,
                                    std::size_t cells, double mu = 1.0);

}  // namespace hawkeslab
