#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbm/grid.hpp"
#include "sbm/measure.hpp"
#include "sbm/nonlinearity.hpp"
#include "sbm/particles.hpp"
#include "sbm/picard.hpp"
#include "sbm/testfunc.hpp"

namespace sbm {

// Initial measure described symbolically; build() realizes the density part on
// the grid. Defaults to a unit point mass at the origin.
struct MeasureConfig {
    enum class DensityKind { none, constant, gaussian, indicator };

    std::vector<Atom> atoms{Atom{{0.0, 0.0}, 1.0}};
    DensityKind density = DensityKind::none;
    double density_param = 1.0;  // constant level, gaussian sigma, indicator half-width
    double density_scale = 1.0;

    bool has_density() const { return density != DensityKind::none; }
    FiniteMeasure build(const GridSpec& spec) const;
};

struct OutputConfig {
    std::string directory;  // empty: resolved by the caller (flag, env var, ./out)
    bool csv = true;
    bool json = true;
    int trace_replicates = 3;  // replicates whose trajectories are written out
};

// Knobs of the validation suite that legitimately depend on gamma. Statistical
// sample sizes and tolerances scale; the pass/fail logic never changes.
struct ValidateConfig {
    double tol_scale = 1.0;        // multiplies statistical tolerances
    double envelope_scale = 1.0;   // multiplies modeled bias envelopes
    double replicate_scale = 1.0;  // multiplies Monte Carlo sample sizes
    bool ks_sweep = true;          // epsilon-refinement part of the explosion criterion
    std::vector<double> cdf_times{0.25, 0.5, 1.0};
    double expl_horizon = 1.0;  // horizon of the explosion-fraction runs
    double ks_horizon = 2.0;
};

struct ExperimentConfig {
    GammaParams params;
    int dimension = 1;
    NonlinearitySpec::Kind psi_kind = NonlinearitySpec::Kind::power_gamma;

    double half_extent = 8.0;
    int points_per_axis = 512;

    PicardConfig solver;
    MeasureConfig initial_measure;
    TestFunction test_function = TestFunction::constant_fn(1.0);
    SimConfig sim;  // params and dim are filled by finalize()

    std::vector<int> mollifier_levels{8, 16, 32};
    long long comb_points = 1000;
    double comb_radius = 1.0;

    OutputConfig outputs;
    ValidateConfig validation;

    GridSpec grid() const { return GridSpec{dimension, half_extent, points_per_axis}; }
    NonlinearitySpec nonlinearity() const { return NonlinearitySpec{psi_kind, params}; }

    // Parse + finalize. Unknown sections or keys are errors; every violation
    // in the file is reported in one ConfigError.
    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& text,
                                        const std::string& origin = "<config>");

    // Propagates shared fields into the sub-configs (sim.params, sim.dim, the
    // crossing function) and re-validates everything, aggregating violations
    // into a single ConfigError. Idempotent; call again after overriding fields.
    void finalize();

    // Canonical "key = value" dump of every field in a fixed order, numbers via
    // fmt17. Output provenance hashes are taken over exactly this text.
    std::string canonical() const;
};

}  // namespace sbm
