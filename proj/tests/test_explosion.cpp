#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "sbm/explosion.hpp"
#include "sbm/rng.hpp"

using namespace sbm;

TEST_CASE("cdf closed form") {
    ExplosionLaw law{{0.5}, 1.0};
    law.validate();
    CHECK(law.cdf(1.0) == doctest::Approx(0.22119921692859512).epsilon(1e-15));
    CHECK(law.cdf(0.25) == doctest::Approx(0.015503562994591547).epsilon(1e-15));
    CHECK(law.cdf(0.5) == doctest::Approx(0.06058693718652419).epsilon(1e-15));
    CHECK(law.cdf(0.0) == 0.0);
    CHECK(law.cdf(-1.0) == 0.0);
    CHECK(law.survival(1.0) == doctest::Approx(1.0 - 0.22119921692859512).epsilon(1e-15));

    ExplosionLaw heavy{{0.5}, 2.0};
    CHECK(heavy.cdf(2.0) == doctest::Approx(0.8646647167633873).epsilon(1e-15));
}

TEST_CASE("quantile transform inverts the survival function") {
    ExplosionLaw law{{0.5}, 1.0};
    CHECK(law.sample(std::exp(-1.0)) == doctest::Approx(2.0).epsilon(1e-14));
    for (double u : {1e-12, 1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-12}) {
        double t = law.sample(u);
        CHECK(law.survival(t) == doctest::Approx(u).epsilon(1e-10));
    }
    // extreme right quantile stays finite and monotone
    CHECK(law.sample(1e-300) > law.sample(1e-3));
}

TEST_CASE("survival laplace reduces to survival at a = 0") {
    ExplosionLaw law{{0.7}, 1.3};
    for (double t : {0.1, 1.0, 3.0})
        CHECK(law.survival_laplace(0.0, t) == doctest::Approx(law.survival(t)).epsilon(1e-15));
    ExplosionLaw half{{0.5}, 1.0};
    CHECK(half.survival_laplace(1.0, 1.0) == doctest::Approx(0.10539922456186433).epsilon(1e-15));
    CHECK(half.survival_laplace(1.0, 0.5) == doctest::Approx(0.2096113871510978).epsilon(1e-15));
}

TEST_CASE("inverse-cdf samples pass a KS test against the law") {
    ExplosionLaw law{{0.5}, 1.0};
    const std::size_t n = 100000;
    Rng rng = Rng::substream(12345, 0);
    std::vector<double> ts(n);
    for (std::size_t i = 0; i < n; ++i) ts[i] = law.sample(rng.next_unit());
    std::sort(ts.begin(), ts.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double F = law.cdf(ts[i]);
        ks = std::max(ks, std::abs((i + 1.0) / n - F));
        ks = std::max(ks, std::abs(F - static_cast<double>(i) / n));
    }
    // 99.9% KS quantile is about 1.95 / sqrt(n); exact sampling sits well under.
    CHECK(ks < 1.95 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("validation rejects bad parameters") {
    CHECK_THROWS_AS((ExplosionLaw{{1.5}, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((ExplosionLaw{{0.5}, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((ExplosionLaw{{0.5}, -2.0}).validate(), std::invalid_argument);
}
