#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "sbm/particles.hpp"

using namespace sbm;

namespace {

SimConfig base_config() {
    SimConfig cfg;
    cfg.params = {0.5};
    cfg.dim = 1;
    cfg.epsilon = 1e-2;
    cfg.horizon = 0.5;
    cfg.motion_dt = 5e-3;
    cfg.seed = 42;
    cfg.replicates = 64;
    return cfg;
}

}  // namespace

TEST_CASE("beta = 0 freezes the count and leaves Brownian motion") {
    SimConfig cfg = base_config();
    cfg.beta_override = 0.0;
    cfg.record_positions = true;
    cfg.snapshot_times = {0.5};
    cfg.replicates = 200;
    FiniteMeasure x0 = FiniteMeasure::point_mass({0.0, 0.0}, 1.0);
    auto paths = simulate(x0, cfg, 4);
    REQUIRE(paths.size() == 200);

    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (const ParticlePath& p : paths) {
        CHECK(p.initial_count == 100);
        CHECK(p.final_count == 100);
        CHECK(!p.exploded);
        REQUIRE(p.snapshots.size() == 1);
        for (double x : p.snapshots[0].xs) {
            sum += x;
            sum2 += x * x;
            ++n;
        }
    }
    double mean = sum / static_cast<double>(n);
    double var = sum2 / static_cast<double>(n) - mean * mean;
    // 20000 samples of N(0, 0.5): both moments sit within 5 standard errors.
    CHECK(std::abs(mean) < 5.0 * std::sqrt(0.5 / static_cast<double>(n)));
    CHECK(std::abs(var - 0.5) < 5.0 * 0.5 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("particle count never decreases") {
    SimConfig cfg = base_config();
    cfg.snapshot_times = {0.1, 0.2, 0.3, 0.4, 0.5};
    auto paths = simulate(FiniteMeasure::point_mass({0.0, 0.0}, 0.5), cfg, 2);
    for (const ParticlePath& p : paths) {
        std::uint64_t prev = p.initial_count;
        for (const Snapshot& s : p.snapshots) {
            CHECK(s.count >= prev);
            prev = s.count;
        }
        CHECK(p.final_count >= prev);
    }
}

TEST_CASE("results are bit-identical across thread counts and repeat runs") {
    SimConfig cfg = base_config();
    cfg.record_positions = true;
    cfg.snapshot_times = {0.25, 0.5};
    FiniteMeasure x0 = FiniteMeasure::point_mass({0.1, 0.0}, 0.8);
    auto a = simulate(x0, cfg, 1);
    auto b = simulate(x0, cfg, 7);
    auto c = simulate(x0, cfg, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        CHECK(a[r].final_count == b[r].final_count);
        CHECK(b[r].final_count == c[r].final_count);
        REQUIRE(a[r].snapshots.size() == b[r].snapshots.size());
        for (std::size_t q = 0; q < a[r].snapshots.size(); ++q) {
            REQUIRE(a[r].snapshots[q].xs.size() == b[r].snapshots[q].xs.size());
            for (std::size_t i = 0; i < a[r].snapshots[q].xs.size(); ++i)
                CHECK(a[r].snapshots[q].xs[i] == b[r].snapshots[q].xs[i]);
        }
    }
}

TEST_CASE("changing the seed changes the draw") {
    SimConfig cfg = base_config();
    SimConfig other = cfg;
    other.seed = 43;
    auto a = simulate(FiniteMeasure::point_mass({0.0, 0.0}, 1.0), cfg, 2);
    auto b = simulate(FiniteMeasure::point_mass({0.0, 0.0}, 1.0), other, 2);
    bool any_diff = false;
    for (std::size_t r = 0; r < a.size(); ++r) any_diff = any_diff || a[r].final_count != b[r].final_count;
    CHECK(any_diff);
}

TEST_CASE("empirical laplace transform of a constant function is a count statistic") {
    SimConfig cfg = base_config();
    cfg.snapshot_times = {0.5};
    FiniteMeasure x0 = FiniteMeasure::point_mass({0.0, 0.0}, 1.0);
    auto paths = simulate(x0, cfg, 4);
    LaplaceEstimate est = empirical_laplace(paths, TestFunction::constant_fn(0.7), 0.5, cfg);
    double want = 0.0;
    for (const ParticlePath& p : paths) {
        if (p.exploded) continue;  // exploded paths contribute zero
        want += std::exp(-cfg.epsilon * 0.7 * static_cast<double>(p.snapshots[0].count));
    }
    want /= static_cast<double>(paths.size());
    CHECK(est.estimate == doctest::Approx(want).epsilon(1e-14));
    CHECK(est.n_paths == paths.size());

    // f == 0 turns the transform into the survival indicator.
    LaplaceEstimate surv = empirical_laplace(paths, TestFunction::constant_fn(0.0), 0.5, cfg);
    double alive = 0.0;
    for (const ParticlePath& p : paths) alive += p.exploded ? 0.0 : 1.0;
    CHECK(surv.estimate == doctest::Approx(alive / static_cast<double>(paths.size())).epsilon(1e-15));
}

TEST_CASE("explosion statistics against the exact law at coarse tolerance") {
    SimConfig cfg = base_config();
    cfg.epsilon = 1e-3;
    cfg.horizon = 1.0;
    cfg.replicates = 400;
    cfg.seed = 7;
    FiniteMeasure x0 = FiniteMeasure::point_mass({0.0, 0.0}, 1.0);
    auto paths = simulate(x0, cfg, 4);
    double frac = 0.0;
    for (const ParticlePath& p : paths) {
        if (p.exploded) {
            REQUIRE(p.explosion_time.has_value());
            CHECK(*p.explosion_time <= cfg.horizon + 1e-12);
            CHECK(p.final_count >= 1000000);  // auto cap: 1000x the initial 1000
            frac += 1.0;
        }
    }
    frac /= static_cast<double>(paths.size());
    // F(1) = 0.2212; five binomial standard errors at R = 400 is about 0.104,
    // plus room for the finite-cap detection advance.
    CHECK(std::abs(frac - 0.22119921692859512) < 0.12);
}

TEST_CASE("constant crossing function agrees with the mass crossing exactly") {
    SimConfig cfg = base_config();
    cfg.epsilon = 1e-3;
    cfg.horizon = 1.0;
    cfg.replicates = 200;
    cfg.seed = 11;
    cfg.crossing_threshold = 3.0;  // mass units
    cfg.crossing_function = TestFunction::constant_fn(2.0);
    cfg.stop_after_crossings = true;
    auto paths = simulate(FiniteMeasure::point_mass({0.0, 0.0}, 1.0), cfg, 4);
    ExplosionMatchReport rep = empirical_explosion_match(paths, cfg);
    CHECK(rep.n_paths == 200);
    CHECK(rep.n_events > 10);  // about a fifth of the paths blow up by t = 1
    CHECK(rep.n_both == rep.n_events);
    CHECK(rep.agree_fraction == 1.0);
    CHECK(rep.max_gap == 0.0);
    for (const ParticlePath& p : paths)
        if (p.mass_crossing_time) {
            REQUIRE(p.f_crossing_time.has_value());
            CHECK(*p.f_crossing_time == *p.mass_crossing_time);
        }
}

TEST_CASE("config validation aggregates every violation") {
    SimConfig cfg;
    cfg.params = {1.5};
    cfg.epsilon = 0.0;
    cfg.horizon = -1.0;
    cfg.replicates = 0;
    try {
        cfg.validate();
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        CHECK(msg.find("gamma") != std::string::npos);
        CHECK(msg.find("epsilon") != std::string::npos);
        CHECK(msg.find("horizon") != std::string::npos);
        CHECK(msg.find("replicates") != std::string::npos);
    }
}
