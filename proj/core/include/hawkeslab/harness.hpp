// Experiment orchestration: estimators, the CLT verification runs, and
// machine-readable reports. Every check record carries its config echo and
// seed; re-running a report reproduces the measured values bit-exactly.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hawkeslab/renewal.hpp"
#include "hawkeslab/simulator.hpp"
#include "hawkeslab/stable.hpp"

namespace hawkeslab {

// ---------------------------------------------------------------------------
// estimators

/// Hill estimator of the tail index from the top-k order statistics of the
/// positive part: 1 / mean(log(x_(n-i+1)/x_(n-k))). Throws when fewer than
/// k+1 positive samples exist or the top block is constant.
double hill_estimator(std::span<const double> samples, std::size_t k);

struct LaplacePoint {
    double lambda = 0.0;
    double value = 0.0;
    double stderr_ = 0.0;
};

/// Mean and standard error of exp(-lambda x) per lambda.
std::vector<LaplacePoint> empirical_laplace(std::span<const double> samples,
                                            std::span<const double> lambdas);

/// p-quantile (linear interpolation); sorts a copy.
double quantile(std::span<const double> samples, double p);
double interquartile_range(std::span<const double> samples);

/// Least-squares slope of y against x.
double regression_slope(std::span<const double> x, std::span<const double> y);

/// Kolmogorov-Smirnov distance against a CDF, and the two-sample statistic.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// ---------------------------------------------------------------------------
// reports

struct CheckRecord {
    std::string name;
    double measured = 0.0;
    double target = 0.0;
    double tol = 0.0;  // |measured - target| <= tol required
    bool pass = false;
    double seconds = 0.0;
};

struct Report {
    std::string version = "1";
    std::string config_json = "{}";  // echo of the driving configuration
    std::vector<CheckRecord> checks;

    bool all_pass() const;
    CheckRecord& add(const std::string& name, double measured, double target, double tol,
                     double seconds = 0.0);
    std::string to_json() const;
    static Report from_json(const std::string& text);
    /// One line per check: "[ok|FAIL] name measured=... target=... tol=..."
    std::string render_text() const;
};

// ---------------------------------------------------------------------------
// experiment configuration

enum class TailMode { Heavy, FiniteVariance };

struct ExperimentConfig {
    TailMode mode = TailMode::Heavy;
    double mu = 1.0;
    KernelSpec kernel = KernelSpec::pareto_tail(0.3);
    MarkDistribution marks = MarkDistribution::pareto_mean1(0.6);
    OffspringLaw offspring = OffspringLaw::poisson_of_mark();
    bool beta_offspring_system = false;  // BetaSibuya branching, marks ignored

    std::vector<double> t_grid = {100.0, 1000.0};
    std::vector<TestFunction> test_functions = {TestFunction::indicator(0.0, 1.0)};
    std::vector<std::string> test_function_names = {"indicator:0:1"};

    std::uint64_t replicas = 2000;
    std::uint64_t seed = 20240614;
    unsigned threads = 0;
    std::size_t solver_cells = 10000;

    double limit_dt = 1.0 / 256.0;
    double limit_tmax = 2.0;
    std::uint64_t limit_paths = 4000;

    double clt_rel_tol = 0.15;   // deterministic w-integral vs the T->inf target
    double qq_rel_tol = 0.15;    // limit comparison of median/IQR
    double hill_tol = 0.15;
    double slope_tol = 0.10;

    std::string config_echo = "{}";

    /// Heavy mode needs alpha < beta; Gaussian mode needs a finite second
    /// moment. Throws on violations.
    void validate() const;
    double beta() const;  // tail index of the offspring/mark heavy tail
    LimitModel limit_model() const;
    OffspringTransform transform() const;
    double ft(double T) const { return limit_model().norming(T); }
};

// ---------------------------------------------------------------------------
// experiment runners

/// Laplace-functional verification per (T, f): (1) deterministic w-integral
/// against the T->inf target, (2) Monte Carlo Laplace transform against the
/// exact finite-T law exp(mu Int w) within 3 SE and against the target,
/// (3) Hill tail estimate with the n^{0.5,0.6,0.7} sensitivity.
Report run_clt_experiment(const ExperimentConfig& cfg);

/// Quantile comparison of simulated X_T(1) against the prefactor-scaled
/// simulated limit process, the self-similarity check of the limit path, and
/// the variance check in the Gaussian branch.
Report run_limit_comparison(const ExperimentConfig& cfg);

struct ExponentSweep {
    std::vector<double> t_grid;
    std::vector<double> iqr;  // of N(T) - E N(T), per T
    double slope = 0.0;
};

/// Regression of log IQR(N(T) - EN(T)) on log T.
ExponentSweep exponent_sweep(const ExperimentConfig& cfg);

/// <N, f_T> per replica: counts at the scaled breakpoints of f, weighted by
/// the cell values, divided by F_T.
std::vector<double> sample_scaled_functionals(const ExperimentConfig& cfg, const TestFunction& f,
                                              double T, double F_T);

}  // namespace hawkeslab
