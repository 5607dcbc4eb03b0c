#include <string>

#include <doctest.h>

#include "sbm/config.hpp"
#include "sbm/errors.hpp"

using namespace sbm;

TEST_CASE("empty text yields the documented defaults") {
    ExperimentConfig cfg = ExperimentConfig::from_string("");
    CHECK(cfg.params.gamma == 0.5);
    CHECK(cfg.dimension == 1);
    CHECK(cfg.half_extent == 8.0);
    CHECK(cfg.points_per_axis == 512);
    CHECK(cfg.psi_kind == NonlinearitySpec::Kind::power_gamma);
    REQUIRE(cfg.initial_measure.atoms.size() == 1);
    CHECK(cfg.initial_measure.atoms[0].mass == 1.0);
    CHECK(cfg.sim.params.gamma == 0.5);  // propagated by finalize
    CHECK(cfg.sim.dim == 1);
    CHECK(cfg.validation.ks_sweep);
}

TEST_CASE("a full file parses into the right fields") {
    const std::string text = R"(# experiment
[model]
gamma = 0.7
dimension = 2
psi = power

[grid]
half_extent = 6
points_per_axis = 128

[solver]
t_final = 0.5
time_steps = 32
tol = 1e-9

[initial_measure]
atoms = 0,0 : 1.5 ; 0.25,-0.5 : 0.5
density = gaussian : 0.8
density_scale = 2

[test_function]
kind = bump
base = 1
amplitude = 0.25
width = 0.5
center = 0.1,0.2

[sim]
epsilon = 5e-3
horizon = 0.75
replicates = 32
seed = 99
snapshot_times = 0.25, 0.75

[density]
mollifier_levels = 4, 8
comb_points = 500

[outputs]
directory = results
formats = json

[validate]
tol_scale = 2
ks_sweep = off
)";
    ExperimentConfig cfg = ExperimentConfig::from_string(text, "inline");
    CHECK(cfg.params.gamma == 0.7);
    CHECK(cfg.dimension == 2);
    CHECK(cfg.half_extent == 6.0);
    CHECK(cfg.points_per_axis == 128);
    CHECK(cfg.solver.t_final == 0.5);
    CHECK(cfg.solver.time_steps == 32);
    CHECK(cfg.solver.tol == 1e-9);
    REQUIRE(cfg.initial_measure.atoms.size() == 2);
    CHECK(cfg.initial_measure.atoms[1].position[0] == 0.25);
    CHECK(cfg.initial_measure.atoms[1].position[1] == -0.5);
    CHECK(cfg.initial_measure.atoms[1].mass == 0.5);
    CHECK(cfg.initial_measure.density == MeasureConfig::DensityKind::gaussian);
    CHECK(cfg.initial_measure.density_param == 0.8);
    CHECK(cfg.initial_measure.density_scale == 2.0);
    CHECK(cfg.sim.epsilon == 5e-3);
    CHECK(cfg.sim.seed == 99);
    CHECK(cfg.sim.params.gamma == 0.7);
    CHECK(cfg.sim.dim == 2);
    REQUIRE(cfg.sim.snapshot_times.size() == 2);
    CHECK(cfg.sim.snapshot_times[1] == 0.75);
    REQUIRE(cfg.mollifier_levels.size() == 2);
    CHECK(cfg.mollifier_levels[1] == 8);
    CHECK(cfg.comb_points == 500);
    CHECK(cfg.outputs.directory == "results");
    CHECK(!cfg.outputs.csv);
    CHECK(cfg.outputs.json);
    CHECK(cfg.validation.tol_scale == 2.0);
    CHECK(!cfg.validation.ks_sweep);
}

TEST_CASE("canonical text round-trips to itself") {
    ExperimentConfig cfg = ExperimentConfig::from_string(
        "[model]\ngamma = 0.35\n[sim]\nepsilon = 1e-4\nseed = 5\n");
    std::string canon = cfg.canonical();
    ExperimentConfig back = ExperimentConfig::from_string(canon, "canonical");
    CHECK(back.canonical() == canon);
    CHECK(back.params.gamma == cfg.params.gamma);
    CHECK(back.sim.epsilon == cfg.sim.epsilon);
}

TEST_CASE("every violation is reported at once") {
    try {
        ExperimentConfig::from_string(
            "[model]\ngamma = 1.7\ndimension = 5\n[grid]\npoints_per_axis = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("gamma") != std::string::npos);
        CHECK(msg.find("dimension") != std::string::npos);
        CHECK(msg.find("points_per_axis") != std::string::npos);
    }
}

TEST_CASE("unknown keys and sections fail with their line number") {
    try {
        ExperimentConfig::from_string("[model]\ngamma = 0.5\ntypo_key = 3\n", "bad.ini");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("typo_key") != std::string::npos);
        CHECK(msg.find("bad.ini") != std::string::npos);
        CHECK(msg.find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(ExperimentConfig::from_string("[mystery]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_string("[sim]\nepsilon = 1e-3\nepsilon = 1e-4\n"),
                    ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_string("[sim]\nepsilon = abc\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_string("no_section = 1\n"), ConfigError);
}

TEST_CASE("finalize wires the crossing function to the test function") {
    ExperimentConfig cfg = ExperimentConfig::from_string(
        "[test_function]\nkind = constant\nlevel = 2\n[sim]\ncrossing_threshold = 4\n");
    REQUIRE(cfg.sim.crossing_function.has_value());
    CHECK(cfg.sim.crossing_threshold == 4.0);
    CHECK(cfg.sim.crossing_function->inf_value() == 2.0);
}

TEST_CASE("measure build realizes densities on the grid") {
    ExperimentConfig cfg = ExperimentConfig::from_string(
        "[initial_measure]\natoms =\ndensity = indicator : 1\n");
    FiniteMeasure mu = cfg.initial_measure.build(cfg.grid());
    CHECK(mu.atoms.empty());
    REQUIRE(mu.density.has_value());
    // indicator of [-1,1] at grid spacing 1/32: mass exactly 2
    CHECK(mu.total_mass() == doctest::Approx(2.0).epsilon(1e-13));

    ExperimentConfig gauss = ExperimentConfig::from_string(
        "[initial_measure]\natoms =\ndensity = gaussian : 0.5\ndensity_scale = 3\n");
    FiniteMeasure nu = gauss.initial_measure.build(gauss.grid());
    CHECK(nu.total_mass() == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("beta and n_max accept the symbolic auto value") {
    ExperimentConfig cfg = ExperimentConfig::from_string(
        "[sim]\nbeta = auto\nn_max = auto\nepsilon = 1e-2\n");
    CHECK(!cfg.sim.beta_override.has_value());
    CHECK(cfg.sim.n_max == 0);
    CHECK(cfg.sim.resolved_beta() == doctest::Approx(0.1).epsilon(1e-14));

    ExperimentConfig fixed = ExperimentConfig::from_string("[sim]\nbeta = 0\nn_max = 5000\n");
    REQUIRE(fixed.sim.beta_override.has_value());
    CHECK(*fixed.sim.beta_override == 0.0);
    CHECK(fixed.sim.n_max == 5000);
}
