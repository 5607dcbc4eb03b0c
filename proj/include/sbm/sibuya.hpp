#pragma once

#include <array>

#include "sbm/nonlinearity.hpp"
#include "sbm/rng.hpp"

namespace sbm {

// Offspring law with generating function E s^L = 1 - (1-s)^gamma, so
// P(L > k) = prod_{i=1..k} (1 - gamma/i) and E L = infinity. The survival
// function is tabulated exactly up to k = 64; beyond that it is replaced by
// the power tail C k^{-gamma} matched continuously at k = 64, and samples in
// that region come from direct inversion of the tail.
class SibuyaSampler {
  public:
    static constexpr int kTableSize = 64;

    explicit SibuyaSampler(const GammaParams& params);

    const GammaParams& params() const { return params_; }

    // P(L > k); exact for 0 <= k <= 64, tail form beyond.
    double survival(long long k) const;

    long long sample(Rng& rng) const;

  private:
    GammaParams params_;
    std::array<double, kTableSize + 1> survival_;  // survival_[k] = P(L > k)
    double tail_c_;                                // survival_[64] * 64^gamma
};

}  // namespace sbm
