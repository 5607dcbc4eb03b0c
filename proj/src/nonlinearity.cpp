#include "sbm/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace sbm {

void GammaParams::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("GammaParams: gamma must lie strictly in (0,1)");
}

double NonlinearitySpec::psi(double v) const {
    return kind == Kind::linear_plus_one ? v + 1.0 : std::pow(v, params.gamma);
}

double NonlinearitySpec::floor_value(double s) const {
    if (kind == Kind::linear_plus_one) return std::expm1(s);
    return exact_constant_solution(0.0, s, params);
}

double exact_constant_solution(double a, double t, const GammaParams& params) {
    params.validate();
    if (!(a >= 0.0) || !(t >= 0.0))
        throw std::invalid_argument("exact_constant_solution: requires a >= 0 and t >= 0");
    double g = params.gamma;
    return std::pow(std::pow(a, 1.0 - g) + t * (1.0 - g), params.gamma_prime());
}

}  // namespace sbm
