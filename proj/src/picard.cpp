#include "sbm/picard.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace sbm {

void PicardConfig::validate() const {
    std::string errors;
    if (!(t_final > 0.0)) errors += "t_final must be positive; ";
    if (t_min < 0.0) errors += "t_min must be nonnegative; ";
    if (t_min > 0.0 && !(t_min < t_final)) errors += "t_min must be below t_final; ";
    if (time_steps < 4) errors += "time_steps must be at least 4; ";
    if (!(tol > 0.0)) errors += "tol must be positive; ";
    if (max_iters < 1) errors += "max_iters must be at least 1; ";
    if (!errors.empty()) throw std::invalid_argument("PicardConfig: " + errors);
}

namespace {

// Interpolating s^{dim/2}-weighted integrand values flattens the s -> 0
// blow-up of psi(S_s mu) for atomic mu, which is where the quadrature mesh
// is finest.
double rho_weight(int dim, double s) { return dim == 1 ? std::sqrt(s) : s; }

// Quadrature/storage mesh: M cells graded quadratically toward zero over
// (0, t_final], with t_min inserted so the first stored slice lands exactly.
std::vector<double> build_mesh(const PicardConfig& cfg) {
    std::vector<double> times;
    times.reserve(cfg.time_steps + 1);
    for (int j = 1; j <= cfg.time_steps; ++j) {
        double u = static_cast<double>(j) / cfg.time_steps;
        times.push_back(cfg.t_final * u * u);
    }
    times.push_back(cfg.resolved_t_min());
    std::sort(times.begin(), times.end());
    std::vector<double> dedup;
    for (double t : times)
        if (dedup.empty() || t - dedup.back() > 1e-12 * cfg.t_final) dedup.push_back(t);
    dedup.back() = cfg.t_final;
    return dedup;
}

PicardSolution picard_core(const GridSpec& grid, const NonlinearitySpec& psi,
                           const PicardConfig& cfg,
                           const std::function<GridField(HeatSemigroup&, double)>& base_at) {
    grid.validate();
    psi.params.validate();
    cfg.validate();

    HeatSemigroup engine(grid);
    const std::vector<double> times = build_mesh(cfg);
    const std::size_t q_count = times.size();
    const std::size_t nodes = grid.node_count();

    std::vector<GridField> base(q_count), ub(q_count), w(q_count), excess(q_count);
    std::vector<double> floor_v(q_count), floor_psi(q_count), rho(q_count);
    for (std::size_t q = 0; q < q_count; ++q) {
        base[q] = base_at(engine, times[q]);
        floor_v[q] = psi.floor_value(times[q]);
        floor_psi[q] = psi.psi(floor_v[q]);
        rho[q] = rho_weight(grid.dim, times[q]);
        double et = std::exp(times[q]);
        ub[q] = GridField(grid);
        for (std::size_t i = 0; i < nodes; ++i) ub[q][i] = et * base[q][i] + et;
        w[q] = base[q];
    }

    std::vector<double> node_weight(nodes);
    for (std::size_t i = 0; i < nodes; ++i)
        node_weight[i] = WeightedNorm::weight(grid.dim, grid.node(i));

    auto refresh_excess = [&](std::size_t q) {
        GridField& e = excess[q];
        if (e.values.empty()) e = GridField(grid);
        for (std::size_t i = 0; i < nodes; ++i)
            e[i] = rho[q] * std::max(0.0, psi.psi(w[q][i]) - floor_psi[q]);
    };
    for (std::size_t q = 0; q < q_count; ++q) refresh_excess(q);

    // First quadrature cell [0, times[0]]: the iterate is frozen at
    // base + floor there, so its contribution to slice q is fixed across
    // sweeps and can be computed once.
    const double m0 = 0.5 * times[0];
    const double w0 = times[0];
    GridField g0 = base_at(engine, m0);
    {
        double f0 = psi.floor_value(m0);
        double fp0 = psi.psi(f0);
        for (std::size_t i = 0; i < nodes; ++i)
            g0[i] = std::max(0.0, psi.psi(g0[i] + f0) - fp0);
    }
    std::vector<GridField> cell0(q_count);
    for (std::size_t q = 0; q < q_count; ++q) {
        cell0[q] = GridField(grid);
        engine.apply_scaled_add(times[q] - m0, g0, w0, cell0[q]);
    }

    PicardSolution sol;
    sol.grid = grid;
    sol.psi = psi;
    sol.config = cfg;

    GridField acc(grid);
    for (int sweep = 0; sweep < cfg.max_iters; ++sweep) {
        double sup_diff = 0.0;
        for (std::size_t q = 0; q < q_count; ++q) {
            for (std::size_t i = 0; i < nodes; ++i)
                acc[i] = base[q][i] + floor_v[q] + cell0[q][i];
            for (std::size_t j = 1; j <= q; ++j) {
                double mj = 0.5 * (times[j - 1] + times[j]);
                double dj = times[j] - times[j - 1];
                double scale = 0.5 / rho_weight(grid.dim, mj);
                GridField gm(grid);
                for (std::size_t i = 0; i < nodes; ++i)
                    gm[i] = scale * (excess[j - 1][i] + excess[j][i]);
                engine.apply_scaled_add(times[q] - mj, gm, dj, acc);
            }
            for (std::size_t i = 0; i < nodes; ++i) {
                double lo = base[q][i] + floor_v[q];
                if (acc[i] < lo) acc[i] = lo;  // round-off guard; lo bounds v from below
                double d = acc[i] - w[q][i];
                sol.min_increment = std::min(sol.min_increment, d);
                sup_diff = std::max(sup_diff, node_weight[i] * std::abs(d));
                sol.max_bound_overshoot = std::max(sol.max_bound_overshoot, acc[i] - ub[q][i]);
                w[q][i] = acc[i];
            }
            refresh_excess(q);
        }
        sol.sup_diffs.push_back(sup_diff);
        sol.iter_count = sweep + 1;
        if (sup_diff < cfg.tol) {
            sol.converged = true;
            break;
        }
    }

    double first_stored = cfg.resolved_t_min() * (1.0 - 1e-12);
    for (std::size_t q = 0; q < q_count; ++q) {
        if (times[q] < first_stored) continue;
        sol.times.push_back(times[q]);
        sol.slices.push_back(std::move(w[q]));
        sol.baseline.push_back(std::move(base[q]));
    }
    return sol;
}

}  // namespace

PicardSolution solve(const GridSpec& grid, const FiniteMeasure& mu,
                     const NonlinearitySpec& psi, const PicardConfig& config) {
    mu.validate(&grid);
    // Measure data must carry mass; the zero-data floor is reachable through
    // solve_function_ic, which keeps this entry point unambiguous.
    if (!(mu.total_mass() > 0.0))
        throw std::invalid_argument("solve: measure data must have positive total mass");
    return picard_core(grid, psi, config, [&mu](HeatSemigroup& engine, double s) {
        return engine.apply_measure(s, mu);
    });
}

PicardSolution solve_function_ic(const GridField& f, const NonlinearitySpec& psi,
                                 const PicardConfig& config) {
    for (double v : f.values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("solve_function_ic: f must be nonnegative and finite");
    return picard_core(f.spec, psi, config, [&f](HeatSemigroup& engine, double s) {
        return engine.apply(s, f);
    });
}

void require_converged(const PicardSolution& sol) {
    if (sol.converged) return;
    std::string msg = "Picard iteration did not converge within " +
                      std::to_string(sol.config.max_iters) + " sweeps; last sup_diffs:";
    std::size_t start = sol.sup_diffs.size() > 5 ? sol.sup_diffs.size() - 5 : 0;
    for (std::size_t i = start; i < sol.sup_diffs.size(); ++i)
        msg += " " + std::to_string(sol.sup_diffs[i]);
    throw std::runtime_error(msg);
}

GridField exact_linear_majorant(const GridSpec& grid, const FiniteMeasure& mu, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("exact_linear_majorant: t must be positive");
    GridField f = semigroup_measure(grid, t, mu);
    double et = std::exp(t);
    for (double& v : f.values) v = et * v + et - 1.0;
    return f;
}

double exact_linear_majorant_at(const FiniteMeasure& mu, double t, const Point& x, int dim) {
    if (!(t > 0.0)) throw std::invalid_argument("exact_linear_majorant_at: t must be positive");
    if (mu.density)
        throw std::invalid_argument("exact_linear_majorant_at: closed form needs purely atomic mu");
    double s = 0.0;
    for (const auto& a : mu.atoms)
        s += a.mass * heat_kernel(dim, t, {x[0] - a.position[0], x[1] - a.position[1]});
    double et = std::exp(t);
    return et * s + et - 1.0;
}

BoundsReport check_bounds(const PicardSolution& sol, double lower_slack, double upper_slack) {
    BoundsReport rep;
    rep.lower_slack = lower_slack;
    rep.upper_slack = upper_slack;
    rep.min_lower_margin = std::numeric_limits<double>::infinity();
    rep.min_upper_margin = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < sol.slices.size(); ++q) {
        double t = sol.times[q];
        double lower = sol.psi.floor_value(t);
        double et = std::exp(t);
        for (std::size_t i = 0; i < sol.slices[q].size(); ++i) {
            double v = sol.slices[q][i];
            double upper = et * sol.baseline[q][i] + et;
            double ml = v - lower;
            double mu_ = upper - v;
            if (ml < rep.min_lower_margin) {
                rep.min_lower_margin = ml;
                rep.worst_lower = {t, sol.grid.node(i), v, lower};
            }
            if (mu_ < rep.min_upper_margin) {
                rep.min_upper_margin = mu_;
                rep.worst_upper = {t, sol.grid.node(i), v, upper};
            }
        }
    }
    rep.lower_ok = rep.min_lower_margin > -lower_slack;
    rep.upper_ok = rep.min_upper_margin >= -upper_slack;
    return rep;
}

namespace {

ComparisonReport nodewise_dominance(const PicardSolution& lo, const PicardSolution& hi,
                                    double tol) {
    if (lo.times.size() != hi.times.size() || !(lo.grid == hi.grid))
        throw std::invalid_argument("comparison: solutions live on different meshes");
    ComparisonReport rep;
    rep.tol = tol;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < lo.slices.size(); ++q)
        for (std::size_t i = 0; i < lo.slices[q].size(); ++i)
            rep.worst_margin = std::min(rep.worst_margin, hi.slices[q][i] - lo.slices[q][i]);
    rep.pass = rep.worst_margin >= -tol;
    return rep;
}

}  // namespace

ComparisonReport compare_solutions(const GridSpec& grid, const FiniteMeasure& mu,
                                   const FiniteMeasure& nu, const NonlinearitySpec& psi,
                                   const PicardConfig& config, double tol) {
    if (!dominates_structurally(mu, nu))
        throw std::invalid_argument("compare_solutions: nu does not dominate mu");
    PicardSolution sol_mu = solve(grid, mu, psi, config);
    PicardSolution sol_nu = solve(grid, nu, psi, config);
    require_converged(sol_mu);
    require_converged(sol_nu);
    ComparisonReport rep = nodewise_dominance(sol_mu, sol_nu, tol);
    rep.min_increment = std::min(sol_mu.min_increment, sol_nu.min_increment);
    return rep;
}

ComparisonReport concavity_check(const GridSpec& grid, const FiniteMeasure& mu,
                                 const FiniteMeasure& nu, double lambda,
                                 const NonlinearitySpec& psi, const PicardConfig& config,
                                 double tol) {
    PicardSolution sol_mu = solve(grid, mu, psi, config);
    PicardSolution sol_nu = solve(grid, nu, psi, config);
    PicardSolution sol_mix = solve(grid, mix_measures(mu, nu, lambda), psi, config);
    require_converged(sol_mu);
    require_converged(sol_nu);
    require_converged(sol_mix);
    ComparisonReport rep;
    rep.tol = tol;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < sol_mix.slices.size(); ++q)
        for (std::size_t i = 0; i < sol_mix.slices[q].size(); ++i) {
            double combo = lambda * sol_mu.slices[q][i] + (1.0 - lambda) * sol_nu.slices[q][i];
            rep.worst_margin = std::min(rep.worst_margin, sol_mix.slices[q][i] - combo);
        }
    rep.pass = rep.worst_margin >= -tol;
    rep.min_increment =
        std::min({sol_mu.min_increment, sol_nu.min_increment, sol_mix.min_increment});
    return rep;
}

double laplace_functional(const FiniteMeasure& x0, const PicardSolution& sol) {
    const GridField& v = sol.final_slice();
    double pairing = 0.0;
    for (const auto& a : x0.atoms) pairing += a.mass * v.interpolate(a.position);
    if (x0.density) {
        if (!(x0.density->spec == sol.grid))
            throw std::invalid_argument("laplace_functional: density grid mismatch");
        double cell = sol.grid.cell_volume();
        for (std::size_t i = 0; i < v.size(); ++i)
            pairing += cell * (*x0.density)[i] * v[i];
    }
    return std::exp(-pairing);
}

}  // namespace sbm
