// Event-level simulation of the critical marked Hawkes process through its
// branching representation: immigrants arrive as a Poisson(mu) stream on
// [0, horizon], every event at (t, x) spawns offspring displaced by positive
// i.i.d. draws from the kernel density. Pruning children past the horizon is
// exact because displacements never move left.
//
// Replicas are independent jobs on their own random streams; aggregation
// happens in replica order, so reports do not depend on the thread count.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hawkeslab/kernels.hpp"
#include "hawkeslab/marks.hpp"
#include "hawkeslab/rng.hpp"
#include "hawkeslab/stable.hpp"

namespace hawkeslab {

struct EventRecord {
    double time = 0.0;
    double mark = 1.0;
    std::uint32_t generation = 0;
    std::int64_t parent = -1;  // -1: immigrant
};

struct SimOutput {
    std::vector<double> times;          // sorted event times
    std::vector<EventRecord> records;   // optional, in creation order
    std::vector<double> grid;           // requested counting grid
    std::vector<std::uint64_t> counts;  // N(grid[j])
    std::uint64_t total = 0;
};

/// Thrown when a replica exceeds the event cap; a critical cluster has no
/// total-size moment, so cap hits are reported, never silently truncated.
struct EventCapExceeded : std::runtime_error {
    explicit EventCapExceeded(std::uint64_t cap)
        : std::runtime_error("event cap exceeded (" + std::to_string(cap) + " events)") {}
};

constexpr std::uint64_t kDefaultEventCap = 100'000'000ull;

/// Offspring count laws with mean 1: Poisson(mark), or the heavy-tailed law
/// with generating function G(s) = s + (1-s)^{1+beta}/(1+beta) (mark ignored).
class OffspringLaw {
  public:
    static OffspringLaw poisson_of_mark();
    /// pmf table to `table_cutoff` plus the exact power tail beyond it.
    static OffspringLaw beta_sibuya(double beta, std::size_t table_cutoff = 1'000'000);

    std::uint64_t sample(double mark, Rng& rng) const;
    bool is_beta_sibuya() const { return sibuya_ != nullptr; }
    double beta() const;

    /// pmf of the beta-offspring law: p_0 = 1/(1+beta), p_1 = 0, p_2 = beta/2,
    /// p_{k+1} = p_k (k-1-beta)/(k+1).
    double sibuya_pmf(std::uint64_t k) const;
    /// P(count > k), exact recurrence T_{k+1} = T_k (k-beta)/(k+1).
    double sibuya_tail(std::uint64_t k) const;
    std::size_t table_cutoff() const;

  private:
    struct SibuyaTable;
    std::shared_ptr<const SibuyaTable> sibuya_;  // null: Poisson-of-mark
};

struct HawkesConfig {
    double mu = 1.0;
    double horizon = 100.0;
    KernelSpec kernel = KernelSpec::pareto_tail(0.5);
    MarkDistribution marks = MarkDistribution::dirac_one();
    OffspringLaw offspring = OffspringLaw::poisson_of_mark();
    std::uint64_t event_cap = kDefaultEventCap;
};

/// All offspring generations of one root (root itself excluded from the
/// output), breadth-first, children past the horizon pruned.
std::vector<EventRecord> simulate_cluster(const EventRecord& root, double horizon,
                                          const KernelSpec& kernel, const MarkDistribution& marks,
                                          const OffspringLaw& law, Rng& rng,
                                          std::uint64_t event_cap = kDefaultEventCap);

/// Full process on [0, horizon]; records kept when keep_records is set,
/// counting path filled on `grid` when non-empty.
SimOutput simulate_hawkes(const HawkesConfig& cfg, Rng& rng, bool keep_records = false,
                          std::span<const double> grid = {});

/// Count-only fast path: N(grid[j]) for each grid point.
std::vector<std::uint64_t> count_hawkes(const HawkesConfig& cfg, Rng& rng,
                                        std::span<const double> grid);

/// Ogata thinning simulation of the same process; independent oracle for the
/// cluster construction. Requires a nonincreasing bounded kernel density
/// (ParetoTail); other kernels are rejected.
SimOutput simulate_thinning(const HawkesConfig& cfg, Rng& rng, bool keep_records = false,
                            std::span<const double> grid = {});

/// X_T(t_j) = (N(T t_j) - E N(T t_j)) / F_T per replica. `counts[r][j]` are
/// the replica counts on grid T*t; exact means come from the renewal module
/// and must cover T * max(t).
std::vector<std::vector<double>> normalize_paths(
    const std::vector<std::vector<std::uint64_t>>& counts, std::span<const double> t_grid,
    std::span<const double> exact_means, double F_T);

/// Runs `replicas` independent replicas on `threads` workers (0 = hardware),
/// calling fn(replica_index, rng) with the replica's own stream.
void run_replicas(std::uint64_t replicas, std::uint64_t seed, unsigned threads,
                  const std::function<void(std::uint64_t, Rng&)>& fn);

}  // namespace hawkeslab
