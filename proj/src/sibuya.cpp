#include "sbm/sibuya.hpp"

#include <algorithm>
#include <cmath>

namespace sbm {

SibuyaSampler::SibuyaSampler(const GammaParams& params) : params_(params) {
    params_.validate();
    survival_[0] = 1.0;
    for (int k = 1; k <= kTableSize; ++k)
        survival_[k] = survival_[k - 1] * (1.0 - params_.gamma / k);
    tail_c_ = survival_[kTableSize] * std::pow(static_cast<double>(kTableSize), params_.gamma);
}

double SibuyaSampler::survival(long long k) const {
    if (k < 0) return 1.0;
    if (k <= kTableSize) return survival_[static_cast<std::size_t>(k)];
    return tail_c_ * std::pow(static_cast<double>(k), -params_.gamma);
}

long long SibuyaSampler::sample(Rng& rng) const {
    double u = rng.next_unit();
    if (u >= survival_[kTableSize]) {
        // Smallest k with P(L > k) <= u, i.e. P(L = k) covers u.
        auto it = std::partition_point(survival_.begin() + 1, survival_.end(),
                                       [u](double s) { return s > u; });
        return it - survival_.begin();
    }
    double k = std::ceil(std::pow(tail_c_ / u, 1.0 / params_.gamma));
    // Saturate astronomically rare draws; 2^52 keeps the cast exact and sits far
    // above any explosion cap, so downstream statistics never see the clamp.
    k = std::min(k, 4503599627370496.0);
    long long kk = std::max<long long>(kTableSize + 1, static_cast<long long>(k));
    // Float round-off can land one integer short of the inversion target.
    if (survival(kk) > u) ++kk;
    return kk;
}

}  // namespace sbm
