#include "hawkeslab/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "hawkeslab/special.hpp"
#include "hawkeslab/stable.hpp"

namespace hawkeslab {

namespace {
constexpr std::size_t kMlKnots = 2048;
constexpr double kMlGridLo = 1e-6;
constexpr double kMlGridHi = 1e6;
constexpr std::uint32_t kTableMagic = 0x484c5454u;  // "HLTT"
constexpr std::uint32_t kTableVersion = 1u;
}  // namespace

TailTable::TailTable(double t_lo, double t_hi, std::vector<double> y)
    : t_lo_(t_lo), t_hi_(t_hi), y_(std::move(y)) {
    const std::size_t n = y_.size();
    if (n < 4) throw std::invalid_argument("TailTable: too few knots");
    x_.resize(n);
    const double x0 = std::log(t_lo_), x1 = std::log(t_hi_);
    for (std::size_t i = 0; i < n; ++i)
        x_[i] = x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(n - 1);

    // Fritsch-Carlson slopes: interpolant stays monotone.
    m_.assign(n, 0.0);
    std::vector<double> d(n - 1), h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        d[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
}

double TailTable::x_of(double t) const { return std::log(t); }

double TailTable::value(double t) const {
    if (t < t_lo_ || t > t_hi_) throw std::out_of_range("TailTable::value: t outside grid");
    const double x = x_of(t);
    const std::size_t n = x_.size();
    const double x0 = x_[0], xn = x_[n - 1];
    std::size_t i = static_cast<std::size_t>((x - x0) / (xn - x0) * static_cast<double>(n - 1));
    if (i >= n - 1) i = n - 2;
    const double h = x_[i + 1] - x_[i];
    const double s = (x - x_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return y_[i] * (2 * s3 - 3 * s2 + 1) + h * m_[i] * (s3 - 2 * s2 + s) +
           y_[i + 1] * (-2 * s3 + 3 * s2) + h * m_[i + 1] * (s3 - s2);
}

double TailTable::invert(double target) const {
    const std::size_t n = y_.size();
    if (target >= y_[0]) return t_lo_;
    if (target <= y_[n - 1]) return t_hi_;
    // Knot bracket by binary search; y_ is decreasing.
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (y_[mid] >= target ? lo : hi) = mid;
    }
    const double h = x_[lo + 1] - x_[lo];
    double sa = 0.0, sb = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double s = 0.5 * (sa + sb);
        const double s2 = s * s, s3 = s2 * s;
        const double v = y_[lo] * (2 * s3 - 3 * s2 + 1) + h * m_[lo] * (s3 - 2 * s2 + s) +
                         y_[lo + 1] * (-2 * s3 + 3 * s2) + h * m_[lo + 1] * (s3 - s2);
        (v >= target ? sa : sb) = s;
    }
    return std::exp(x_[lo] + 0.5 * (sa + sb) * h);
}

void TailTable::save(const std::string& path, std::uint64_t param_hash) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("TailTable::save: cannot open " + path);
    const std::uint64_t n = y_.size();
    out.write(reinterpret_cast<const char*>(&kTableMagic), sizeof kTableMagic);
    out.write(reinterpret_cast<const char*>(&kTableVersion), sizeof kTableVersion);
    out.write(reinterpret_cast<const char*>(&param_hash), sizeof param_hash);
    out.write(reinterpret_cast<const char*>(&t_lo_), sizeof t_lo_);
    out.write(reinterpret_cast<const char*>(&t_hi_), sizeof t_hi_);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(y_.data()), static_cast<std::streamsize>(n * 8));
}

std::shared_ptr<const TailTable> TailTable::load(const std::string& path,
                                                 std::uint64_t param_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return nullptr;
    std::uint32_t magic = 0, version = 0;
    std::uint64_t hash = 0, n = 0;
    double lo = 0, hi = 0;
    in.read(reinterpret_cast<char*>(&magic), sizeof magic);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&hash), sizeof hash);
    in.read(reinterpret_cast<char*>(&lo), sizeof lo);
    in.read(reinterpret_cast<char*>(&hi), sizeof hi);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in || magic != kTableMagic || version != kTableVersion || hash != param_hash ||
        n < 4 || n > (1u << 24))
        return nullptr;
    std::vector<double> y(n);
    in.read(reinterpret_cast<char*>(y.data()), static_cast<std::streamsize>(n * 8));
    if (!in) return nullptr;
    return std::make_shared<TailTable>(lo, hi, std::move(y));
}

std::uint64_t kernel_param_hash(double alpha, double theta) {
    std::uint64_t h = 0x9d3c8f2b61a4e705ull;
    std::uint64_t bits;
    std::memcpy(&bits, &alpha, 8);
    h ^= bits;
    splitmix64(h);
    std::memcpy(&bits, &theta, 8);
    h ^= bits;
    return splitmix64(h);
}

KernelSpec KernelSpec::pareto_tail(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("pareto_tail: need alpha in (0,1)");
    KernelSpec k;
    k.variant_ = KernelVariant::ParetoTail;
    k.alpha_ = alpha;
    k.c_phi_ = 1.0;
    return k;
}

KernelSpec KernelSpec::mittag_leffler(double alpha, double theta, const std::string& cache_dir) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("mittag_leffler kernel: need alpha in (0,1)");
    if (!(theta > 0.0)) throw std::invalid_argument("mittag_leffler kernel: need theta > 0");
    KernelSpec k;
    k.variant_ = KernelVariant::MittagLeffler;
    k.alpha_ = alpha;
    k.theta_ = theta;
    k.c_phi_ = 1.0 / (theta * std::tgamma(1.0 - alpha));

    const std::uint64_t hash = kernel_param_hash(alpha, theta);
    std::string cache_path;
    if (!cache_dir.empty()) {
        char name[64];
        std::snprintf(name, sizeof name, "ml_tail_%016llx.bin",
                      static_cast<unsigned long long>(hash));
        cache_path = cache_dir + "/" + name;
        if (auto cached = TailTable::load(cache_path, hash)) {
            k.table_ = cached;
            return k;
        }
    }
    std::vector<double> y(kMlKnots);
    const double x0 = std::log(kMlGridLo), x1 = std::log(kMlGridHi);
    for (std::size_t i = 0; i < kMlKnots; ++i) {
        const double t =
            std::exp(x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(kMlKnots - 1));
        y[i] = hawkeslab::mittag_leffler(alpha, 1.0, -theta * std::pow(t, alpha));
    }
    auto table = std::make_shared<TailTable>(kMlGridLo, kMlGridHi, std::move(y));
    if (!cache_path.empty()) table->save(cache_path, hash);
    k.table_ = table;
    return k;
}

KernelSpec KernelSpec::stable_density(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("stable_density: need alpha in (0,1)");
    KernelSpec k;
    k.variant_ = KernelVariant::StableDensity;
    k.alpha_ = alpha;
    k.c_phi_ = 1.0 / std::tgamma(1.0 - alpha);
    return k;
}

double KernelSpec::density(double t) const {
    if (t < 0.0) throw std::invalid_argument("kernel density: t must be >= 0");
    switch (variant_) {
        case KernelVariant::ParetoTail:
            return alpha_ * std::pow(1.0 + t, -1.0 - alpha_);
        case KernelVariant::MittagLeffler: {
            if (t == 0.0) return std::numeric_limits<double>::infinity();
            const double z = -theta_ * std::pow(t, alpha_);
            return theta_ * std::pow(t, alpha_ - 1.0) * hawkeslab::mittag_leffler(alpha_, alpha_, z);
        }
        case KernelVariant::StableDensity:
            return positive_stable_density(alpha_, t);
    }
    return 0.0;
}

double KernelSpec::tail(double t) const {
    if (t < 0.0) throw std::invalid_argument("kernel tail: t must be >= 0");
    switch (variant_) {
        case KernelVariant::ParetoTail:
            return std::pow(1.0 + t, -alpha_);
        case KernelVariant::MittagLeffler:
            if (t == 0.0) return 1.0;
            return hawkeslab::mittag_leffler(alpha_, 1.0, -theta_ * std::pow(t, alpha_));
        case KernelVariant::StableDensity:
            return 1.0 - positive_stable_cdf(alpha_, t);
    }
    return 0.0;
}

double KernelSpec::sample_displacement(Rng& rng) const {
    switch (variant_) {
        case KernelVariant::ParetoTail: {
            const double u = rng.uniform_pos();
            return std::pow(1.0 - u, -1.0 / alpha_) - 1.0;
        }
        case KernelVariant::StableDensity:
            return sample_positive_stable(alpha_, rng);
        case KernelVariant::MittagLeffler: {
            // Inverse CDF on the tabulated tail; series inversion below the
            // grid, power-tail extrapolation Phi ~ c_phi t^{-alpha} above.
            const double u = rng.uniform_pos();  // target tail value
            const double y_top = table_->value(table_->t_lo());
            const double y_bot = table_->value(table_->t_hi());
            if (u >= y_top)
                return std::pow(std::tgamma(1.0 + alpha_) * (1.0 - u) / theta_, 1.0 / alpha_);
            if (u <= y_bot) return std::pow(c_phi_ / u, 1.0 / alpha_);
            return table_->invert(u);
        }
    }
    return 0.0;
}

std::string KernelSpec::describe() const {
    char buf[96];
    switch (variant_) {
        case KernelVariant::ParetoTail:
            std::snprintf(buf, sizeof buf, "pareto(alpha=%g)", alpha_);
            break;
        case KernelVariant::MittagLeffler:
            std::snprintf(buf, sizeof buf, "mittag_leffler(alpha=%g,theta=%g)", alpha_, theta_);
            break;
        case KernelVariant::StableDensity:
            std::snprintf(buf, sizeof buf, "stable(alpha=%g)", alpha_);
            break;
    }
    return buf;
}

double estimate_tail_constant(const KernelSpec& kernel, double t_top) {
    return std::pow(t_top, kernel.alpha()) * kernel.tail(t_top);
}

}  // namespace hawkeslab
