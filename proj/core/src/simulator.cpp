#include "hawkeslab/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace hawkeslab {

struct OffspringLaw::SibuyaTable {
    double beta = 0.5;
    std::size_t cutoff = 0;
    std::vector<double> cdf;  // cdf[k] = P(count <= k), k = 0..cutoff
    double tail_at_cutoff = 0.0;
};

OffspringLaw OffspringLaw::poisson_of_mark() { return OffspringLaw{}; }

OffspringLaw OffspringLaw::beta_sibuya(double beta, std::size_t table_cutoff) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("beta_sibuya: need beta in (0,1)");
    if (table_cutoff < 2) throw std::invalid_argument("beta_sibuya: cutoff too small");
    auto tab = std::make_shared<SibuyaTable>();
    tab->beta = beta;
    tab->cutoff = table_cutoff;
    tab->cdf.resize(table_cutoff + 1);
    double p = beta / 2.0;             // p_2
    tab->cdf[0] = 1.0 / (1.0 + beta);  // p_0
    tab->cdf[1] = tab->cdf[0];         // p_1 = 0
    for (std::size_t k = 2; k <= table_cutoff; ++k) {
        tab->cdf[k] = tab->cdf[k - 1] + p;
        p *= (static_cast<double>(k) - 1.0 - beta) / static_cast<double>(k + 1);
    }
    // Exact tail at the cutoff: T_{k+1} = T_k (k - beta)/(k + 1).
    double t = beta / (1.0 + beta);  // T_1
    for (std::size_t k = 1; k < table_cutoff; ++k)
        t *= (static_cast<double>(k) - beta) / static_cast<double>(k + 1);
    tab->tail_at_cutoff = t;
    OffspringLaw law;
    law.sibuya_ = std::move(tab);
    return law;
}

std::uint64_t OffspringLaw::sample(double mark, Rng& rng) const {
    if (!sibuya_) {
        if (!(mark > 0.0)) throw std::invalid_argument("poisson_of_mark: mark must be positive");
        return rng.poisson(mark);
    }
    const auto& tab = *sibuya_;
    const double u = rng.uniform01();
    if (u < tab.cdf[0]) return 0;
    if (u >= tab.cdf[tab.cutoff]) {
        // Power-tail inversion beyond the table: T_k ~ T_cut (cut/k)^{1+beta}.
        const double residual = std::max(1.0 - u, 1e-300);
        const double k = static_cast<double>(tab.cutoff) *
                         std::pow(tab.tail_at_cutoff / residual, 1.0 / (1.0 + tab.beta));
        return static_cast<std::uint64_t>(k);
    }
    const auto it = std::upper_bound(tab.cdf.begin(), tab.cdf.end(), u);
    return static_cast<std::uint64_t>(it - tab.cdf.begin());
}

double OffspringLaw::beta() const {
    if (!sibuya_) throw std::logic_error("OffspringLaw::beta: not a beta-Sibuya law");
    return sibuya_->beta;
}

double OffspringLaw::sibuya_pmf(std::uint64_t k) const {
    if (!sibuya_) throw std::logic_error("sibuya_pmf: not a beta-Sibuya law");
    const double beta = sibuya_->beta;
    if (k == 0) return 1.0 / (1.0 + beta);
    if (k == 1) return 0.0;
    double p = beta / 2.0;
    for (std::uint64_t j = 2; j < k; ++j)
        p *= (static_cast<double>(j) - 1.0 - beta) / static_cast<double>(j + 1);
    return p;
}

double OffspringLaw::sibuya_tail(std::uint64_t k) const {
    if (!sibuya_) throw std::logic_error("sibuya_tail: not a beta-Sibuya law");
    const double beta = sibuya_->beta;
    double t = beta / (1.0 + beta);  // T_1 = T_0 (p_1 = 0)
    if (k == 0) return t;
    for (std::uint64_t j = 1; j < k; ++j)
        t *= (static_cast<double>(j) - beta) / static_cast<double>(j + 1);
    return t;
}

std::size_t OffspringLaw::table_cutoff() const {
    if (!sibuya_) throw std::logic_error("table_cutoff: not a beta-Sibuya law");
    return sibuya_->cutoff;
}

namespace {

struct Particle {
    double time;
    double mark;
    std::uint32_t generation;
    std::int64_t id;  // record index, or -2 when records are off
};

// Breadth-first expansion through a flat queue; no recursion, deep critical
// trees are fine. Children beyond the horizon are dropped at birth, which is
// exact because every displacement is positive.
template <class OnEvent>
void expand_cluster(std::deque<Particle>& queue, double horizon, const KernelSpec& kernel,
                    const MarkDistribution& marks, const OffspringLaw& law, Rng& rng,
                    std::uint64_t event_cap, std::uint64_t& produced, OnEvent&& on_event) {
    while (!queue.empty()) {
        const Particle parent = queue.front();
        queue.pop_front();
        const std::uint64_t children = law.sample(parent.mark, rng);
        for (std::uint64_t c = 0; c < children; ++c) {
            const double t = parent.time + kernel.sample_displacement(rng);
            const double mark = marks.sample(rng);
            if (t > horizon) continue;
            if (++produced > event_cap) throw EventCapExceeded(event_cap);
            const std::int64_t id = on_event(t, mark, parent.generation + 1, parent.id);
            queue.push_back({t, mark, parent.generation + 1, id});
        }
    }
}

// Immigrants in time order, each family expanded before the next immigrant is
// drawn; the stream layout depends only on (seed, config).
template <class OnEvent>
void drive_hawkes(const HawkesConfig& cfg, Rng& rng, OnEvent&& on_event) {
    if (!(cfg.mu > 0.0) || !(cfg.horizon > 0.0))
        throw std::invalid_argument("simulate_hawkes: need mu > 0 and horizon > 0");
    std::uint64_t produced = 0;
    std::deque<Particle> queue;
    double t = 0.0;
    while (true) {
        t += rng.exponential() / cfg.mu;
        if (t > cfg.horizon) break;
        if (++produced > cfg.event_cap) throw EventCapExceeded(cfg.event_cap);
        const double mark = cfg.marks.sample(rng);
        const std::int64_t id = on_event(t, mark, 0u, std::int64_t{-1});
        queue.clear();
        queue.push_back({t, mark, 0, id});
        expand_cluster(queue, cfg.horizon, cfg.kernel, cfg.marks, cfg.offspring, rng,
                       cfg.event_cap, produced, on_event);
    }
}

std::vector<std::uint64_t> counts_on_grid(const std::vector<double>& sorted_times,
                                          std::span<const double> grid) {
    std::vector<std::uint64_t> counts(grid.size(), 0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        counts[j] = static_cast<std::uint64_t>(
            std::upper_bound(sorted_times.begin(), sorted_times.end(), grid[j]) -
            sorted_times.begin());
    }
    return counts;
}

}  // namespace

std::vector<EventRecord> simulate_cluster(const EventRecord& root, double horizon,
                                          const KernelSpec& kernel, const MarkDistribution& marks,
                                          const OffspringLaw& law, Rng& rng,
                                          std::uint64_t event_cap) {
    std::vector<EventRecord> out;
    if (root.time > horizon) return out;
    std::deque<Particle> queue;
    queue.push_back({root.time, root.mark, root.generation, root.parent});
    std::uint64_t produced = 0;
    expand_cluster(queue, horizon, kernel, marks, law, rng, event_cap, produced,
                   [&](double t, double mark, std::uint32_t gen, std::int64_t parent) {
                       out.push_back({t, mark, gen, parent});
                       return static_cast<std::int64_t>(out.size()) - 1;
                   });
    return out;
}

SimOutput simulate_hawkes(const HawkesConfig& cfg, Rng& rng, bool keep_records,
                          std::span<const double> grid) {
    SimOutput out;
    drive_hawkes(cfg, rng, [&](double t, double mark, std::uint32_t gen, std::int64_t parent) {
        std::int64_t id = -2;
        if (keep_records) {
            out.records.push_back({t, mark, gen, parent});
            id = static_cast<std::int64_t>(out.records.size()) - 1;
        }
        out.times.push_back(t);
        return id;
    });
    std::sort(out.times.begin(), out.times.end());
    out.total = out.times.size();
    if (!grid.empty()) {
        out.grid.assign(grid.begin(), grid.end());
        out.counts = counts_on_grid(out.times, grid);
    }
    return out;
}

std::vector<std::uint64_t> count_hawkes(const HawkesConfig& cfg, Rng& rng,
                                        std::span<const double> grid) {
    // bucket[j] counts events in (grid[j-1], grid[j]]; prefix sums give N.
    std::vector<std::uint64_t> bucket(grid.size(), 0);
    drive_hawkes(cfg, rng, [&](double t, double, std::uint32_t, std::int64_t) {
        const auto j = static_cast<std::size_t>(
            std::lower_bound(grid.begin(), grid.end(), t) - grid.begin());
        if (j < bucket.size()) ++bucket[j];
        return std::int64_t{-2};
    });
    std::vector<std::uint64_t> counts(grid.size(), 0);
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        acc += bucket[j];
        counts[j] = acc;
    }
    return counts;
}

SimOutput simulate_thinning(const HawkesConfig& cfg, Rng& rng, bool keep_records,
                            std::span<const double> grid) {
    if (!cfg.kernel.monotone_density())
        throw std::invalid_argument("simulate_thinning: kernel density must be nonincreasing");
    if (cfg.mu < 0.0 || !(cfg.horizon > 0.0))
        throw std::invalid_argument("simulate_thinning: bad mu or horizon");
    SimOutput out;
    std::vector<double> times;
    std::vector<double> marks;
    // Events at exactly `at` count with density(0) so the bound taken just
    // after an accepted event dominates the intensity up to the next one.
    auto intensity = [&](double at) {
        double lam = cfg.mu;
        for (std::size_t i = 0; i < times.size(); ++i)
            if (times[i] <= at) lam += marks[i] * cfg.kernel.density(at - times[i]);
        return lam;
    };
    std::uint64_t produced = 0;
    double s = 0.0;
    while (true) {
        const double bound = intensity(s);
        if (bound <= 0.0) break;  // mu = 0 and no history: never any events
        const double cand = s + rng.exponential() / bound;
        if (cand > cfg.horizon) break;
        const double lam = intensity(cand);
        if (rng.uniform01() * bound <= lam) {
            if (++produced > cfg.event_cap) throw EventCapExceeded(cfg.event_cap);
            const double mark = cfg.marks.sample(rng);
            times.push_back(cand);
            marks.push_back(mark);
            if (keep_records) out.records.push_back({cand, mark, 0, -1});
        }
        s = cand;
    }
    out.times = times;
    out.total = out.times.size();
    if (!grid.empty()) {
        out.grid.assign(grid.begin(), grid.end());
        out.counts = counts_on_grid(out.times, grid);
    }
    return out;
}

std::vector<std::vector<double>> normalize_paths(
    const std::vector<std::vector<std::uint64_t>>& counts, std::span<const double> t_grid,
    std::span<const double> exact_means, double F_T) {
    if (exact_means.size() != t_grid.size())
        throw std::invalid_argument("normalize_paths: means/grid size mismatch");
    std::vector<std::vector<double>> paths(counts.size());
    for (std::size_t r = 0; r < counts.size(); ++r) {
        if (counts[r].size() != t_grid.size())
            throw std::invalid_argument("normalize_paths: counts/grid size mismatch");
        paths[r].resize(t_grid.size());
        for (std::size_t j = 0; j < t_grid.size(); ++j)
            paths[r][j] = (static_cast<double>(counts[r][j]) - exact_means[j]) / F_T;
    }
    return paths;
}

void run_replicas(std::uint64_t replicas, std::uint64_t seed, unsigned threads,
                  const std::function<void(std::uint64_t, Rng&)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::uint64_t>(threads, std::max<std::uint64_t>(replicas, 1)));
    if (threads <= 1) {
        for (std::uint64_t r = 0; r < replicas; ++r) {
            Rng rng = Rng::for_stream(seed, r);
            fn(r, rng);
        }
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::uint64_t r = next.fetch_add(1);
                if (r >= replicas) break;
                try {
                    Rng rng = Rng::for_stream(seed, r);
                    fn(r, rng);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace hawkeslab
