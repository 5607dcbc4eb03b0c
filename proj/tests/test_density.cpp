#include <cmath>

#include <doctest.h>

#include "sbm/density.hpp"

using namespace sbm;

TEST_CASE("mollifier normalizers") {
    Mollifier m1{10, 1};
    CHECK(m1.radius() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(m1.normalizer() == doctest::Approx(5.0).epsilon(1e-15));
    Mollifier m2{4, 2};
    CHECK(m2.normalizer() == doctest::Approx(16.0 / M_PI).epsilon(1e-15));
    CHECK_THROWS_AS((Mollifier{0, 1}).validate(), std::invalid_argument);
}

TEST_CASE("single particle yields a centered plateau of height eps n / 2") {
    Snapshot s;
    s.time = 1.0;
    s.count = 1;
    s.xs = {0.25};  // dyadic position so the ball boundary lands exactly
    Mollifier moll{8, 1};
    CHECK(mollified_density(s, 1.0, 1, {0.25, 0.0}, moll) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(mollified_density(s, 0.01, 1, {0.25, 0.0}, moll) ==
          doctest::Approx(0.04).epsilon(1e-15));
    // closed ball: the boundary point still counts, one step beyond does not
    CHECK(mollified_density(s, 1.0, 1, {0.375, 0.0}, moll) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(mollified_density(s, 1.0, 1, {0.376, 0.0}, moll) == 0.0);
}

TEST_CASE("density field integrates to roughly the empirical mass") {
    Snapshot s;
    s.time = 0.5;
    s.count = 5000;
    Rng rng = Rng::substream(5, 0);
    for (std::size_t i = 0; i < 5000; ++i) s.xs.push_back(rng.next_normal());
    GridSpec g{1, 8.0, 512};
    Mollifier moll{16, 1};
    const double eps = 1e-3;
    GridField field = density_field(s, eps, g, moll);
    // Node quadrature of the mollified field recovers eps * count up to the
    // kernel-vs-grid discretization error.
    CHECK(field.integral() == doctest::Approx(eps * 5000.0).epsilon(0.02));
    CHECK(field.min_value() >= 0.0);
}

TEST_CASE("dirac comb with unit weight matches the target mass exactly") {
    GridSpec g{1, 8.0, 512};
    GridField phi(g, 1.0);
    Rng rng = Rng::substream(9, 0);
    FiniteMeasure comb = dirac_comb(phi, 1000, 1.0, rng);
    REQUIRE(comb.atoms.size() == 1000);
    // Leb(B_1) = 2 in dimension 1 and phi == 1, so each atom carries 2/N.
    CHECK(comb.total_mass() == doctest::Approx(2.0).epsilon(1e-12));
    for (const Atom& a : comb.atoms) {
        CHECK(std::abs(a.position[0]) <= 1.0);
        CHECK(a.mass == doctest::Approx(2.0 / 1000.0).epsilon(1e-12));
    }
}

TEST_CASE("dirac comb drops zero-weight points") {
    GridSpec g{1, 8.0, 512};
    GridField phi(g, 0.0);
    Rng rng = Rng::substream(10, 0);
    FiniteMeasure comb = dirac_comb(phi, 50, 1.0, rng);
    CHECK(comb.atoms.empty());
    CHECK(comb.is_zero());
}

TEST_CASE("comb measures converge to the smooth target like 1/sqrt(N)") {
    // Heat-smooth the comb and the underlying uniform measure and compare:
    // the max-node gap is a Monte Carlo average, so quadrupling N should
    // roughly halve it. Tolerant factor: 1.35 instead of 2.
    GridSpec g{1, 8.0, 256};
    GridField phi(g, 1.0);
    FiniteMeasure uniform;
    GridField dens(g, 0.0);
    for (std::size_t i = 0; i < dens.size(); ++i)
        if (std::abs(g.node(i)[0]) <= 1.0) dens[i] = 1.0;
    uniform.density = dens;
    GridField smooth_target = semigroup_measure(g, 0.5, uniform);

    auto gap = [&](long long n, std::uint64_t stream) {
        Rng rng = Rng::substream(11, stream);
        FiniteMeasure comb = dirac_comb(phi, n, 1.0, rng);
        GridField sm = semigroup_measure(g, 0.5, comb);
        double worst = 0.0;
        for (std::size_t i = 0; i < sm.size(); ++i)
            worst = std::max(worst, std::abs(sm[i] - smooth_target[i]));
        return worst;
    };
    double g200 = (gap(200, 0) + gap(200, 1) + gap(200, 2)) / 3.0;
    double g3200 = (gap(3200, 0) + gap(3200, 1) + gap(3200, 2)) / 3.0;
    CHECK(g3200 < g200 / 1.35);
}
