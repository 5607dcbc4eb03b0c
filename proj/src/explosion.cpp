#include "sbm/explosion.hpp"

#include <cmath>
#include <stdexcept>

namespace sbm {

void ExplosionLaw::validate() const {
    params.validate();
    if (!(total_mass > 0.0) || !std::isfinite(total_mass))
        throw std::invalid_argument("ExplosionLaw: total_mass must be positive and finite");
}

double ExplosionLaw::survival(double t) const {
    if (t <= 0.0) return 1.0;
    double g = params.gamma;
    return std::exp(-total_mass * std::pow((1.0 - g) * t, params.gamma_prime()));
}

double ExplosionLaw::cdf(double t) const {
    return 1.0 - survival(t);
}

double ExplosionLaw::sample(double u) const {
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("ExplosionLaw::sample: u must lie in (0,1)");
    double g = params.gamma;
    return std::pow(-std::log1p(u - 1.0) / total_mass, 1.0 - g) / (1.0 - g);
}

double ExplosionLaw::survival_laplace(double a, double t) const {
    if (!(a >= 0.0) || !(t >= 0.0))
        throw std::invalid_argument("ExplosionLaw::survival_laplace: requires a >= 0 and t >= 0");
    double g = params.gamma;
    return std::exp(-total_mass * std::pow(std::pow(a, 1.0 - g) + t * (1.0 - g), params.gamma_prime()));
}

}  // namespace sbm
