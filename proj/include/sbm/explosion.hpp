#pragma once

#include "sbm/nonlinearity.hpp"

namespace sbm {

// Law of the explosion time of the total mass started from a measure of mass
// total_mass: P(T <= t) = 1 - exp(-total_mass * ((1-gamma) t)^{1/(1-gamma)}).
// The law depends on the initial measure only through its total mass.
struct ExplosionLaw {
    GammaParams params;
    double total_mass = 1.0;  // > 0

    void validate() const;

    // survival(t) = P(T > t); cdf(t) = 1 - survival(t); cdf(t <= 0) = 0.
    double survival(double t) const;
    double cdf(double t) const;

    // Inverse of survival: maps u in (0,1) to the time t with P(T > t) = u,
    // so sample(U) with U uniform is distributed as T. Evaluated through
    // log1p so the extreme quantiles stay accurate.
    double sample(double u) const;

    // exp(-total_mass * (a^{1-gamma} + t(1-gamma))^{1/(1-gamma)}):
    // E(exp(-a <X_t, 1>); t < T) for constant test level a >= 0. At a = 0 this
    // is exactly survival(t).
    double survival_laplace(double a, double t) const;
};

}  // namespace sbm
