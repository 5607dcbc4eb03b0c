#pragma once

namespace sbm {

// Branching exponent gamma in (0,1); gamma_prime = 1/(1-gamma) is the blow-up
// exponent appearing in every closed form.
struct GammaParams {
    double gamma = 0.5;

    double gamma_prime() const { return 1.0 / (1.0 - gamma); }
    void validate() const;  // throws std::invalid_argument unless 0 < gamma < 1
};

// Reaction term of the log-Laplace equation. power_gamma is the model
// nonlinearity v^gamma; linear_plus_one (v + 1) dominates it on [0, inf) and
// has the closed-form solution used as the solver's exactness oracle.
struct NonlinearitySpec {
    enum class Kind { power_gamma, linear_plus_one };
    Kind kind = Kind::power_gamma;
    GammaParams params;

    double psi(double v) const;

    // Spatially constant solution with zero initial data: the exact value of
    // the Duhamel integral acting on itself. floor(0) = 0, floor' = psi(floor),
    // and floor is convex on [0, inf) for both kinds.
    double floor_value(double s) const;
};

// (a^{1-gamma} + t(1-gamma))^{1/(1-gamma)}: spatially constant solution of the
// log-Laplace equation with constant initial data a >= 0.
double exact_constant_solution(double a, double t, const GammaParams& params);

}  // namespace sbm
