#pragma once

#include <vector>

#include "sbm/grid.hpp"
#include "sbm/heat.hpp"
#include "sbm/measure.hpp"
#include "sbm/nonlinearity.hpp"

namespace sbm {

// Discretization of the mild log-Laplace equation
//   v(t,x) = (S_t mu)(x) + int_0^t (S_{t-s} psi(v(s, .)))(x) ds.
struct PicardConfig {
    double t_final = 1.0;
    double t_min = 0.0;  // first stored slice; 0 selects t_final / 100
    int time_steps = 64; // M >= 4: quadrature cells of the Duhamel integral
    double tol = 1e-8;   // stopping threshold on the weighted sup norm
    int max_iters = 200;

    double resolved_t_min() const { return t_min > 0.0 ? t_min : t_final / 100.0; }
    void validate() const;
};

struct PicardSolution {
    GridSpec grid;
    NonlinearitySpec psi;
    PicardConfig config;

    std::vector<double> times;        // stored slice times in [t_min, t_final]
    std::vector<GridField> slices;    // v(times[q], .)
    std::vector<GridField> baseline;  // (S_{times[q]} mu), the first iterate

    bool converged = false;
    int iter_count = 0;
    std::vector<double> sup_diffs;    // weighted sup of successive iterates
    // Most negative nodewise increment over all sweeps; monotone iterates keep
    // this at round-off scale.
    double min_increment = 0.0;
    // Max over all iterates and nodes of w - (e^t (S_t mu) + e^t); the bound
    // holds while this stays nonpositive (round-off aside).
    double max_bound_overshoot = 0.0;

    const GridField& final_slice() const { return slices.back(); }
};

// Monotone Picard fixed-point solve with measure initial data (mu nonzero).
// Iterates start at w_1 = S_t mu and increase nodewise to the solution. The
// closed-form floor (the constant-data solution started from zero) is
// integrated exactly and only the excess psi(v) - psi(floor) is quadratured,
// so the strict lower bound of the continuum solution survives discretization.
// A non-converged result is returned with converged = false and the sup_diffs
// history intact.
PicardSolution solve(const GridSpec& grid, const FiniteMeasure& mu,
                     const NonlinearitySpec& psi, const PicardConfig& config);

// Same scheme with bounded continuous initial data f >= 0 sampled on the grid;
// the final slice is then the grid version of V_t(f).
PicardSolution solve_function_ic(const GridField& f, const NonlinearitySpec& psi,
                                 const PicardConfig& config);

// Throws std::runtime_error when sol.converged is false.
void require_converged(const PicardSolution& sol);

// e^t (S_t mu)(x) + e^t - 1: the limit of the Picard iterates for
// psi(v) = v + 1, which dominates every power-gamma iterate.
GridField exact_linear_majorant(const GridSpec& grid, const FiniteMeasure& mu, double t);

// Pointwise closed form of the linear majorant for purely atomic mu.
double exact_linear_majorant_at(const FiniteMeasure& mu, double t, const Point& x,
                                int dim);

struct BoundsWorst {
    double t = 0.0;
    Point x{0.0, 0.0};
    double value = 0.0;
    double bound = 0.0;
};

struct BoundsReport {
    bool lower_ok = false;
    bool upper_ok = false;
    double min_lower_margin = 0.0;  // min over nodes of v - floor(t)
    double min_upper_margin = 0.0;  // min over nodes of e^t S_t mu + e^t - v
    BoundsWorst worst_lower, worst_upper;
    double lower_slack = 0.0, upper_slack = 0.0;
    bool pass() const { return lower_ok && upper_ok; }
};

// Two-sided solution bounds on every stored slice:
//   floor(t) - lower_slack < v <= e^t (S_t mu)(x) + e^t + upper_slack,
// with floor(t) = ((1-gamma) t)^{1/(1-gamma)} for the power nonlinearity.
BoundsReport check_bounds(const PicardSolution& sol, double lower_slack = 1e-12,
                          double upper_slack = 1e-9);

struct ComparisonReport {
    bool pass = false;
    double worst_margin = 0.0;   // most negative value of the asserted inequality
    double tol = 0.0;
    double min_increment = 0.0;  // pooled over the solves run for the check
};

// Solves both initial measures and asserts v(mu) <= v(nu) + tol nodewise on
// every stored slice. Requires nu to dominate mu structurally.
ComparisonReport compare_solutions(const GridSpec& grid, const FiniteMeasure& mu,
                                   const FiniteMeasure& nu, const NonlinearitySpec& psi,
                                   const PicardConfig& config, double tol = 1e-6);

// Solves mu, nu, and lambda mu + (1-lambda) nu and asserts
// v(mix) >= lambda v(mu) + (1-lambda) v(nu) - tol nodewise on every slice.
ComparisonReport concavity_check(const GridSpec& grid, const FiniteMeasure& mu,
                                 const FiniteMeasure& nu, double lambda,
                                 const NonlinearitySpec& psi, const PicardConfig& config,
                                 double tol = 1e-6);

// exp(-<x0, v(t_final)>) where the pairing interpolates atoms and integrates
// the density part nodewise. With sol = solve_function_ic(f, ...) this is the
// Laplace functional E exp(-<X_t, f>) restricted to survival.
double laplace_functional(const FiniteMeasure& x0, const PicardSolution& sol);

}  // namespace sbm
