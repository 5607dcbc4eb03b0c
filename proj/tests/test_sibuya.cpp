#include <cmath>
#include <vector>

#include <doctest.h>

#include "sbm/rng.hpp"
#include "sbm/sibuya.hpp"

using namespace sbm;

TEST_CASE("survival table matches the product formula at gamma = 1/2") {
    SibuyaSampler s({0.5});
    CHECK(s.survival(0) == 1.0);
    CHECK(s.survival(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.survival(2) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(s.survival(3) == doctest::Approx(0.3125).epsilon(1e-15));
    CHECK(s.survival(4) == doctest::Approx(0.2734375).epsilon(1e-15));
}

TEST_CASE("table and tail join continuously and decay like k^{-gamma}") {
    for (double gamma : {0.3, 0.5, 0.9}) {
        SibuyaSampler s({gamma});
        double prev = 1.0;
        for (long long k = 1; k <= 200; ++k) {
            double cur = s.survival(k);
            CHECK(cur < prev);
            CHECK(cur > 0.0);
            prev = cur;
        }
        // The tail extension must track the exact product formula within a
        // percent well beyond the table seam.
        double exact = 1.0;
        for (long long i = 1; i <= 200; ++i) exact *= 1.0 - gamma / static_cast<double>(i);
        CHECK(s.survival(200) == doctest::Approx(exact).epsilon(0.01));
        // and it is a pure power law: survival(k) k^gamma is flat out there
        double flat = s.survival(4096) * std::pow(4096.0, gamma) /
                      (s.survival(65536) * std::pow(65536.0, gamma));
        CHECK(flat == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sampled frequencies match the exact pmf") {
    SibuyaSampler s({0.5});
    Rng rng = Rng::substream(777, 0);
    const int n = 200000;
    std::vector<long long> counts(8, 0);
    long long beyond_table = 0;
    for (int i = 0; i < n; ++i) {
        long long v = s.sample(rng);
        CHECK(v >= 1);
        if (v <= 7) ++counts[static_cast<std::size_t>(v)];
        if (v > SibuyaSampler::kTableSize) ++beyond_table;
    }
    for (long long k = 1; k <= 7; ++k) {
        double p = s.survival(k - 1) - s.survival(k);
        double freq = static_cast<double>(counts[static_cast<std::size_t>(k)]) / n;
        double se = std::sqrt(p * (1.0 - p) / n);
        CHECK(std::abs(freq - p) < 5.0 * se);
    }
    // P(L > 64) is about 0.07 at gamma = 1/2, so the tail branch is exercised.
    double tail_freq = static_cast<double>(beyond_table) / n;
    double p_tail = s.survival(SibuyaSampler::kTableSize);
    CHECK(std::abs(tail_freq - p_tail) < 5.0 * std::sqrt(p_tail * (1.0 - p_tail) / n));
}

TEST_CASE("heavy tail really is heavy: empirical mean grows with the cap") {
    SibuyaSampler s({0.5});
    Rng rng = Rng::substream(778, 0);
    const int n = 100000;
    double mean_small_cap = 0.0, mean_large_cap = 0.0;
    for (int i = 0; i < n; ++i) {
        long long v = s.sample(rng);
        mean_small_cap += static_cast<double>(std::min(v, 100LL));
        mean_large_cap += static_cast<double>(std::min(v, 10000LL));
    }
    // E min(L, c) ~ c^{1-gamma} / Gamma(2 - gamma) up to the slowly varying
    // part; a factor near sqrt(100 / 10000)^{-1} = 10 separates the caps.
    CHECK(mean_large_cap / mean_small_cap > 5.0);
}
