#include "hawkeslab/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkeslab {

TestFunction::TestFunction(std::vector<double> breaks, std::vector<double> vals)
    : breaks_(std::move(breaks)), vals_(std::move(vals)) {
    if (breaks_.size() != vals_.size() + 1 || vals_.empty())
        throw std::invalid_argument("TestFunction: need one more breakpoint than values");
    if (!std::is_sorted(breaks_.begin(), breaks_.end()))
        throw std::invalid_argument("TestFunction: breakpoints must be sorted");
    if (breaks_.front() < 0.0) throw std::invalid_argument("TestFunction: support must be in R+");
}

TestFunction TestFunction::indicator(double t0, double t1, double c) {
    return TestFunction({t0, t1}, {c});
}

TestFunction TestFunction::indicator_combination(std::span<const double> a,
                                                 std::span<const double> t) {
    if (a.size() != t.size() || a.empty())
        throw std::invalid_argument("indicator_combination: size mismatch");
    std::vector<double> breaks(t.begin(), t.end());
    breaks.push_back(0.0);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<double> vals(breaks.size() - 1, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k)
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
            if (breaks[i] < t[k]) vals[i] += a[k];
    return TestFunction(std::move(breaks), std::move(vals));
}

double TestFunction::operator()(double t) const {
    if (t < breaks_.front() || t >= breaks_.back()) return 0.0;
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    return vals_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

bool TestFunction::nonnegative() const {
    return std::all_of(vals_.begin(), vals_.end(), [](double v) { return v >= 0.0; });
}

TestFunction TestFunction::scaled(double T, double F_T) const {
    std::vector<double> breaks(breaks_), vals(vals_);
    for (auto& b : breaks) b *= T;
    for (auto& v : vals) v /= F_T;
    return TestFunction(std::move(breaks), std::move(vals));
}

double g_alpha(const TestFunction& f, double t, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("g_alpha: need alpha in (0,1)");
    if (t < 0.0) throw std::invalid_argument("g_alpha: t must be >= 0");
    const auto& b = f.breaks();
    const auto& v = f.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) continue;
        const double hi = std::max(b[i + 1] - t, 0.0);
        const double lo = std::max(b[i] - t, 0.0);
        if (hi > 0.0) acc += v[i] * (std::pow(hi, alpha) - std::pow(lo, alpha));
    }
    return acc / alpha;
}

double ResolventTable::i_r(double t) const {
    if (t <= 0.0) return 0.0;
    const double pos = t / grid.dt;
    const auto k = static_cast<std::size_t>(pos);
    if (k >= grid.n) return ir.back();
    const double frac = pos - static_cast<double>(k);
    return ir[k] + frac * (ir[k + 1] - ir[k]);
}

ResolventTable build_resolvent(const KernelSpec& kernel, const Grid& grid) {
    if (!(grid.dt > 0.0) || grid.n == 0) throw std::invalid_argument("build_resolvent: bad grid");
    const std::size_t n = grid.n;
    ResolventTable table;
    table.grid = grid;
    table.kernel_alpha = kernel.alpha();
    table.mass.resize(n);
    double tail_left = kernel.tail(0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double tail_right = kernel.tail(static_cast<double>(k + 1) * grid.dt);
        table.mass[k] = tail_left - tail_right;
        tail_left = tail_right;
    }
    table.tail_at_horizon = tail_left;
    if (table.mass[0] >= 1.0 - 1e-12)
        throw std::invalid_argument("build_resolvent: grid too coarse, m_0 >= 1");

    // r_k (1 - m_0) = m_k + sum_{j=1..k} m_j r_{k-j}
    table.resolvent.resize(n);
    const auto* m = table.mass.data();
    auto* r = table.resolvent.data();
    const double self = 1.0 / (1.0 - m[0]);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = m[k];
        for (std::size_t j = 1; j <= k; ++j) acc += m[j] * r[k - j];
        r[k] = acc * self;
    }

    table.ir.resize(n + 1);
    table.ir[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) table.ir[k + 1] = table.ir[k] + r[k];
    table.c_alpha_estimate = table.ir[n] / std::pow(grid.horizon(), kernel.alpha());
    return table;
}

double exact_mean_n(const ResolventTable& table, double mu, double u) {
    if (u < 0.0) throw std::invalid_argument("exact_mean_n: u must be >= 0");
    if (u > table.grid.horizon() * (1.0 + 1e-12))
        throw std::out_of_range("exact_mean_n: u exceeds table horizon");
    const double dt = table.grid.dt;
    const std::size_t full = std::min(static_cast<std::size_t>(u / dt), table.grid.n);
    double integral = 0.0;
    for (std::size_t k = 0; k < full; ++k)
        integral += 0.5 * (table.ir[k] + table.ir[k + 1]) * dt;
    const double rest = u - static_cast<double>(full) * dt;
    if (rest > 0.0)
        integral += 0.5 * (table.ir[full] + table.i_r(u)) * rest;
    return mu * (u + integral);
}

TightnessReport check_tightness(const ResolventTable& table, double T, double M, double eps,
                                std::size_t check_points) {
    if (!(T > 0.0) || !(M > 0.0)) throw std::invalid_argument("check_tightness: bad T or M");
    if (T * M > table.grid.horizon() * (1.0 + 1e-12))
        throw std::out_of_range("check_tightness: T*M exceeds table horizon");
    if (!(eps > 0.0 && eps <= table.kernel_alpha + 1e-12))
        throw std::invalid_argument("check_tightness: need eps in (0, alpha]");
    TightnessReport rep;
    rep.T = T;
    rep.M = M;
    rep.eps = eps;
    const double ta = std::pow(T, table.kernel_alpha);
    const double step = M / static_cast<double>(check_points);
    const double min_gap = table.grid.dt / T;  // 0/0 guard: below one table cell
    for (std::size_t i = 0; i < check_points; ++i) {
        const double s = static_cast<double>(i) * step;
        const double irs = table.i_r(T * s);
        for (std::size_t j = i + 1; j <= check_points; ++j) {
            const double t = static_cast<double>(j) * step;
            if (t - s < min_gap) continue;
            const double ratio = (table.i_r(T * t) - irs) / (ta * std::pow(t - s, eps));
            if (ratio > rep.sup_ratio) {
                rep.sup_ratio = ratio;
                rep.arg_s = s;
                rep.arg_t = t;
            }
        }
    }
    return rep;
}

OffspringTransform OffspringTransform::poisson_marked(MarkDistribution marks) {
    OffspringTransform g;
    g.sibuya_ = false;
    g.marks_ = std::move(marks);
    return g;
}

OffspringTransform OffspringTransform::beta_sibuya(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("beta_sibuya transform: need beta in (0,1)");
    OffspringTransform g;
    g.sibuya_ = true;
    g.beta_ = beta;
    return g;
}

double OffspringTransform::operator()(double u) const {
    // E (1-u)^theta: Int G_x(1-u) nu(dx) = L_nu(u) for Poisson-of-mark,
    // G(1-u) = 1 - u + u^{1+beta}/(1+beta) for the beta-offspring law.
    if (sibuya_) return 1.0 - u + std::pow(u, 1.0 + beta_) / (1.0 + beta_);
    return marks_.laplace(u);
}

double OffspringTransform::nonlinearity(double u) const {
    if (sibuya_) return std::pow(u, 1.0 + beta_) / (1.0 + beta_);
    return marks_.H(u);
}

double OffspringTransform::h_tail_constant() const {
    if (sibuya_) return 1.0 / (1.0 + beta_);
    return marks_.h_tail_constant();
}

double OffspringTransform::beta() const {
    if (sibuya_) return beta_;
    if (!marks_.heavy_tailed())
        throw std::logic_error("OffspringTransform::beta: law is not heavy tailed");
    return marks_.beta();
}

SolverState solve_g(const TestFunction& f, const ResolventTable& table,
                    const OffspringTransform& offspring, double mu) {
    if (!f.nonnegative()) throw std::invalid_argument("solve_g: f must be nonnegative");
    const Grid grid = table.grid;
    if (f.support_end() > grid.horizon() * (1.0 + 1e-12))
        throw std::out_of_range("solve_g: support of f exceeds grid horizon");

    const std::size_t n = grid.n;
    SolverState st;
    st.grid = grid;
    st.mu = mu;
    st.g.assign(n, 0.0);
    st.h.assign(n, 0.0);
    st.w.assign(n, 0.0);

    std::vector<double> fj(n);
    std::size_t top = 0;  // first cell with midpoint past the support
    for (std::size_t j = 0; j < n; ++j) {
        fj[j] = f(grid.midpoint(j));
        if (grid.midpoint(j) < f.support_end()) top = j + 1;
    }

    const auto* m = table.mass.data();
    const double m0 = m[0];
    auto* g = st.g.data();
    auto* h = st.h.data();

    // March right to left; cells at and beyond the support stay 0.
    for (std::size_t jj = top; jj-- > 0;) {
        const std::size_t reach = std::min(n - jj, top - jj + 1);
        double sg = 0.0, sh = 0.0;
        for (std::size_t k = 1; k < reach; ++k) {
            sg += m[k] * g[jj + k];
            sh += m[k] * h[jj + k];
        }
        h[jj] = (fj[jj] + sh) / (1.0 - m0);

        // Scalar fixed point for the same-cell coupling; contraction factor
        // <= m_0 < 1, warm-started from the neighbour.
        const double ef = std::exp(-fj[jj]);
        double x = (jj + 1 < n) ? g[jj + 1] : 0.0;
        for (int it = 0; it < 100; ++it) {
            const double next = 1.0 - ef * offspring(m0 * x + sg);
            const double delta = std::abs(next - x);
            x = next;
            if (delta <= 1e-15 * (std::abs(x) + 1e-12)) break;
        }
        g[jj] = x;
    }

    double sum_g = 0.0, sum_h = 0.0, sum_w = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        st.w[j] = h[j] - g[j];
        sum_g += g[j];
        sum_h += h[j];
        sum_w += st.w[j];  // differences first, then the sum
    }
    st.g_integral = sum_g * grid.dt;
    st.w_integral = sum_w * grid.dt;
    st.exact_mean = mu * sum_h * grid.dt;
    st.exact_log_laplace = mu * st.w_integral;
    return st;
}

ScaledSolveResult scaled_w_integral(const TestFunction& f, const KernelSpec& kernel,
                                    const OffspringTransform& offspring, double T, double F_T,
                                    std::size_t cells, double mu) {
    if (!(T > 0.0) || !(F_T > 0.0))
        throw std::invalid_argument("scaled_w_integral: need T > 0 and F_T > 0");
    const TestFunction f_T = f.scaled(T, F_T);
    Grid grid{f_T.support_end() / static_cast<double>(cells), cells};
    const ResolventTable table = build_resolvent(kernel, grid);
    const SolverState st = solve_g(f_T, table, offspring, mu);
    ScaledSolveResult res;
    res.T = T;
    res.F_T = F_T;
    res.w_integral = st.w_integral;
    res.g_integral = st.g_integral;
    res.exact_mean = st.exact_mean;
    res.grid = grid;
    return res;
}

}  // namespace hawkeslab
