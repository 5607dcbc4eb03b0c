#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "sbm/grid.hpp"

using namespace sbm;

TEST_CASE("nodes are cell centers, never on the box edge or origin") {
    GridSpec g{1, 8.0, 512};
    CHECK(g.spacing() == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
    CHECK(g.coord(0) == doctest::Approx(-8.0 + 1.0 / 64.0).epsilon(1e-15));
    CHECK(g.coord(511) == doctest::Approx(8.0 - 1.0 / 64.0).epsilon(1e-15));
    for (int k = 0; k < g.points_per_axis; ++k) {
        CHECK(std::abs(g.coord(k)) > 1e-12);
        CHECK(std::abs(g.coord(k)) < g.half_extent);
    }
}

TEST_CASE("flat index layout in dimension 2 is row major, x fastest") {
    GridSpec g{2, 2.0, 8};
    CHECK(g.node_count() == 64);
    Point p = g.node(8 * 3 + 5);  // iy = 3, ix = 5
    CHECK(p[0] == doctest::Approx(g.coord(5)).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(g.coord(3)).epsilon(1e-15));
}

TEST_CASE("grid validation rejects each bad field") {
    CHECK_THROWS_AS((GridSpec{3, 8.0, 64}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{1, -1.0, 64}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{1, 8.0, 63}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{1, 8.0, 4}).validate(), std::invalid_argument);
    CHECK_NOTHROW((GridSpec{2, 8.0, 64}).validate());
}

TEST_CASE("integral uses the cell volume") {
    GridSpec g{2, 1.0, 8};
    GridField f(g, 3.0);
    CHECK(f.integral() == doctest::Approx(3.0 * 4.0).epsilon(1e-14));
}

TEST_CASE("interpolation reproduces affine fields exactly inside the hull") {
    GridSpec g{2, 4.0, 32};
    GridField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        Point p = g.node(i);
        f[i] = 2.0 + 0.5 * p[0] - 1.25 * p[1];
    }
    for (double x : {-3.4, -0.21, 0.0, 1.7}) {
        for (double y : {-2.9, 0.4, 3.1}) {
            double want = 2.0 + 0.5 * x - 1.25 * y;
            CHECK(f.interpolate({x, y}) == doctest::Approx(want).epsilon(1e-13));
        }
    }
}

TEST_CASE("interpolation clamps beyond the outermost centers") {
    GridSpec g{1, 1.0, 8};
    GridField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(i);
    CHECK(f.interpolate({-1.0, 0.0}) == doctest::Approx(0.0));
    CHECK(f.interpolate({1.0, 0.0}) == doctest::Approx(7.0));
}
