#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbm/measure.hpp"
#include "sbm/nonlinearity.hpp"
#include "sbm/rng.hpp"
#include "sbm/testfunc.hpp"

namespace sbm {

// Branching Brownian particle system with Sibuya(gamma) offspring.
// Each particle carries mass epsilon and branches at rate beta; the default
// beta = epsilon^{1-gamma} is the scaling under which the empirical Laplace
// functional approaches the semilinear-PDE one (up to O(epsilon^{1-gamma})).
struct SimConfig {
    GammaParams params;
    int dim = 1;
    double epsilon = 1e-3;                 // mass per particle
    std::optional<double> beta_override;   // unset: epsilon^{1-gamma}; 0 disables branching
    double horizon = 1.0;
    double motion_dt = 5e-3;
    std::uint64_t n_max = 0;               // particle cap; 0: 1000x initial count
    std::uint64_t seed = 1;
    std::uint64_t replicates = 1;
    bool record_positions = false;
    std::vector<double> snapshot_times;    // snapped to step boundaries

    // Optional crossing tracking: first step boundary with count*eps >= threshold,
    // and first with eps*sum_i f(xi_i) >= threshold*inf f.
    double crossing_threshold = 0.0;       // mass units; 0 disables
    std::optional<TestFunction> crossing_function;
    bool stop_after_crossings = false;     // end the path once tracked events fired

    double resolved_beta() const;
    std::uint64_t resolved_n_max(std::uint64_t initial_count) const;
    void validate() const;
};

struct Snapshot {
    double time = 0.0;
    std::uint64_t count = 0;
    std::vector<double> xs;  // empty in counting mode
    std::vector<double> ys;  // dim == 2 only
};

struct ParticlePath {
    std::vector<Snapshot> snapshots;
    bool exploded = false;                     // count reached n_max by horizon
    std::optional<double> explosion_time;      // first boundary with count >= n_max
    std::optional<double> mass_crossing_time;  // tracking enabled only
    std::optional<double> f_crossing_time;
    std::uint64_t initial_count = 0;
    std::uint64_t final_count = 0;
    double final_time = 0.0;
};

std::uint64_t initial_particle_count(const FiniteMeasure& x0, double epsilon);

ParticlePath simulate_one(const FiniteMeasure& x0, const SimConfig& cfg, Rng& rng);

// R replicates on substreams Rng(seed, r); results indexed by replicate, so the
// output is bit-identical for any thread count.
std::vector<ParticlePath> simulate(const FiniteMeasure& x0, const SimConfig& cfg,
                                   int threads = 1);

struct LaplaceEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

// Mean of exp(-eps sum_i f(xi_i(t))) over paths; exploded-by-t paths count 0.
LaplaceEstimate empirical_laplace(const std::vector<ParticlePath>& paths,
                                  const TestFunction& f, double t, const SimConfig& cfg);

struct ExplosionMatchReport {
    std::size_t n_paths = 0;
    std::size_t n_events = 0;  // paths where at least one tracked crossing fired
    std::size_t n_both = 0;
    std::size_t n_agree = 0;   // both fired with gap < 2 motion_dt
    double max_gap = 0.0;
    double agree_fraction = 1.0;
};

// Compares the two tracked crossing times path by path (cfg must have enabled
// tracking before simulate).
ExplosionMatchReport empirical_explosion_match(const std::vector<ParticlePath>& paths,
                                               const SimConfig& cfg);

}  // namespace sbm
