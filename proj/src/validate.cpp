#include "sbm/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "sbm/density.hpp"
#include "sbm/errors.hpp"
#include "sbm/explosion.hpp"
#include "sbm/particles.hpp"
#include "sbm/picard.hpp"

namespace sbm {

namespace {

using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string g3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct SuiteContext {
    const ExperimentConfig& cfg;
    int threads = 1;
    double min_increment = 0.0;
    int solve_count = 0;

    const GammaParams& params() const { return cfg.params; }
    const ValidateConfig& vcfg() const { return cfg.validation; }

    // Every solve in the suite flows through here so the monotonicity
    // criterion can pool the increments of all of them.
    PicardSolution track(PicardSolution sol) {
        ++solve_count;
        min_increment = std::min(min_increment, sol.min_increment);
        if (!sol.converged) throw NonConvergenceError("acceptance solve did not converge");
        return sol;
    }

    void track_report(const ComparisonReport& rep, int solves) {
        solve_count += solves;
        min_increment = std::min(min_increment, rep.min_increment);
    }

    // Distinct simulate() calls need distinct seeds, otherwise replicate r of
    // two runs would share the stream (seed, r).
    std::uint64_t run_seed(std::uint64_t tag) const {
        std::uint64_t state = cfg.sim.seed ^ (0x9E3779B97F4A7C15ull * (tag + 1));
        return splitmix64(state);
    }

    std::uint64_t scaled(double base) const {
        double r = std::floor(base * cfg.validation.replicate_scale);
        return static_cast<std::uint64_t>(std::max(16.0, r));
    }
};

FiniteMeasure delta(double x, double mass) { return FiniteMeasure::point_mass({x, 0.0}, mass); }

// Mean of the explosion time started from mass M: integrating the survival
// function exp(-M ((1-gamma)s)^{1/(1-gamma)}) gives
// Gamma(2-gamma) / ((1-gamma) M^{1-gamma}).
double mean_remaining_time(double mass, const GammaParams& p) {
    return std::tgamma(2.0 - p.gamma) /
           ((1.0 - p.gamma) * std::pow(mass, 1.0 - p.gamma));
}

// First-order cdf shift caused by the particle system's linear drag: the
// Laplace exponent solves w' = w^gamma - c w instead of w' = w^gamma, and the
// linearization along w0 = ((1-gamma)t)^{1/(1-gamma)} integrates in closed
// form to dw = -(c t / 2) w0, so |dF| = e^{-w0} w0 c t / 2.
double drag_cdf_shift(const ExplosionLaw& law, double c, double t) {
    double w = law.total_mass *
               std::pow((1.0 - law.params.gamma) * t, law.params.gamma_prime());
    return std::exp(-w) * w * c * t / 2.0;
}

// Explosion times of capped paths, each advanced by the mean remaining time
// from the mass actually observed at the cap crossing. The cap fires strictly
// before the explosion; the leftover is an independent explosion time started
// from the crossing mass, so adding its mean removes the detection advance at
// first order and leaves only its (second-order) fluctuation.
std::vector<double> debiased_explosion_times(const std::vector<ParticlePath>& paths,
                                             double epsilon, const GammaParams& p) {
    std::vector<double> out;
    for (const ParticlePath& path : paths)
        if (path.exploded && path.explosion_time) {
            double crossing_mass = epsilon * static_cast<double>(path.final_count);
            out.push_back(*path.explosion_time + mean_remaining_time(crossing_mass, p));
        }
    std::sort(out.begin(), out.end());
    return out;
}

double fraction_at_most(const std::vector<double>& sorted, double t, double n_total) {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), t + 1e-12);
    return static_cast<double>(it - sorted.begin()) / n_total;
}

// Kolmogorov-Smirnov distance of the (debiased, horizon-censored) explosion
// times against the exact law, evaluated on [0, horizon].
double ks_distance(const std::vector<double>& sorted, const ExplosionLaw& law, double horizon,
                   double n_paths) {
    double ks = 0.0;
    std::size_t k = 0;
    for (; k < sorted.size() && sorted[k] <= horizon; ++k) {
        double F = law.cdf(sorted[k]);
        double hi = static_cast<double>(k + 1) / n_paths;
        double lo = static_cast<double>(k) / n_paths;
        ks = std::max({ks, std::abs(hi - F), std::abs(F - lo)});
    }
    ks = std::max(ks, std::abs(static_cast<double>(k) / n_paths - law.cdf(horizon)));
    return ks;
}

CriterionResult c_constant_exactness(SuiteContext& ctx) {
    auto t0 = Clock::now();
    const GridSpec grid{1, 8.0, 1024};
    const PicardConfig pc{1.0, 0.01, 64, 1e-8, 200};
    const NonlinearitySpec psi{NonlinearitySpec::Kind::power_gamma, ctx.params()};
    PicardSolution sol = ctx.track(solve_function_ic(GridField(grid, 1.0), psi, pc));

    const double expected = exact_constant_solution(1.0, pc.t_final, ctx.params());
    const GridField& last = sol.final_slice();
    double worst = 0.0;
    for (std::size_t i = 0; i < last.size(); ++i)
        worst = std::max(worst, std::abs(last[i] - expected) / expected);

    const double tol = 1e-3;
    const double limit_s = 10.0;
    double secs = secs_since(t0);
    bool pass = worst < tol && secs < limit_s;
    std::ostringstream d;
    d << "flat data level 1, t=1: max rel err " << g3(worst) << " against " << g3(expected)
      << "; solve took " << g3(secs) << " s (limit " << g3(limit_s) << " s)";
    return {1, "constant-data exactness", pass, worst, tol, d.str()};
}

CriterionResult c_linear_majorant(SuiteContext& ctx) {
    const GridSpec grid{1, 8.0, 1024};
    const PicardConfig pc{1.0, 0.01, 64, 1e-8, 200};
    const NonlinearitySpec lin{NonlinearitySpec::Kind::linear_plus_one, ctx.params()};
    FiniteMeasure mu = delta(0.0, 1.0);
    PicardSolution sol = ctx.track(solve(grid, mu, lin, pc));

    double worst = 0.0;
    for (std::size_t q = 0; q < sol.times.size(); ++q) {
        double t = sol.times[q];
        const GridField& slice = sol.slices[q];
        for (std::size_t i = 0; i < slice.size(); ++i) {
            double exact = exact_linear_majorant_at(mu, t, grid.node(i), 1);
            worst = std::max(worst, std::abs(slice[i] - exact) / exact);
        }
    }
    const double tol = 1e-3;
    std::ostringstream d;
    d << "linear reaction, point mass data: max rel err " << g3(worst)
      << " over all stored slices";
    return {2, "linear-majorant exactness", worst < tol, worst, tol, d.str()};
}

CriterionResult c_two_sided_bounds(SuiteContext& ctx) {
    const NonlinearitySpec psi{NonlinearitySpec::Kind::power_gamma, ctx.params()};
    double min_lower = std::numeric_limits<double>::infinity();
    double min_upper = std::numeric_limits<double>::infinity();
    bool pass = true;

    auto run_case = [&](const GridSpec& grid, const PicardConfig& pc, double box,
                        std::uint64_t k) {
        Rng rng = Rng::substream(ctx.run_seed(3), k);
        FiniteMeasure mu;
        int n_atoms = 1 + static_cast<int>(rng.next_below(3));
        for (int a = 0; a < n_atoms; ++a) {
            Point p{box * (2.0 * rng.next_unit() - 1.0), 0.0};
            if (grid.dim == 2) p[1] = box * (2.0 * rng.next_unit() - 1.0);
            mu.atoms.push_back({p, 0.2 + 1.8 * rng.next_unit()});
        }
        PicardSolution sol = ctx.track(solve(grid, mu, psi, pc));
        // Zero lower slack: the floor must be beaten strictly at every node.
        BoundsReport rep = check_bounds(sol, 0.0, 1e-9);
        pass = pass && rep.pass();
        min_lower = std::min(min_lower, rep.min_lower_margin);
        min_upper = std::min(min_upper, rep.min_upper_margin);
    };

    const GridSpec g1{1, 3.0, 512};
    const PicardConfig p1{1.0, 0.25, 48, 1e-8, 200};
    for (std::uint64_t k : {0, 1, 2}) run_case(g1, p1, 1.0, k);
    const GridSpec g2{2, 2.2, 128};
    const PicardConfig p2{1.0, 0.25, 32, 1e-8, 200};
    for (std::uint64_t k : {3, 4}) run_case(g2, p2, 0.75, k);

    std::ostringstream d;
    d << "5 randomized atomic measures (3 in d=1, 2 in d=2): min margin above the floor "
      << g3(min_lower) << ", min slack under the majorant " << g3(min_upper)
      << " (allowed -1e-9)";
    return {3, "two-sided solution bounds", pass, min_lower, 0.0, d.str()};
}

CriterionResult c_comparison_concavity(SuiteContext& ctx) {
    const GridSpec grid{1, 8.0, 512};
    const PicardConfig pc{1.0, 0.01, 48, 1e-8, 200};
    const NonlinearitySpec psi{NonlinearitySpec::Kind::power_gamma, ctx.params()};
    const double slack = 1e-6;

    ComparisonReport comp = compare_solutions(grid, delta(0.0, 1.0), delta(0.0, 2.0), psi, pc,
                                              slack);
    ctx.track_report(comp, 2);
    ComparisonReport conc = concavity_check(grid, delta(0.0, 1.0), delta(1.0, 1.0), 0.5, psi,
                                            pc, slack);
    ctx.track_report(conc, 3);

    double measured = std::min(comp.worst_margin, conc.worst_margin);
    bool pass = comp.pass && conc.pass;
    std::ostringstream d;
    d << "mass doubling margin " << g3(comp.worst_margin) << ", midpoint concavity margin "
      << g3(conc.worst_margin) << " (allowed " << g3(-slack) << ")";
    return {5, "comparison and concavity", pass, measured, -slack, d.str()};
}

CriterionResult c_explosion_law(SuiteContext& ctx) {
    auto t0 = Clock::now();
    const GammaParams P = ctx.params();
    const double m = 1.0;
    ExplosionLaw law{P, m};
    law.validate();
    const double dt = 5e-3;
    const double cap_mass = 1e4;

    // Exploded-by-t fractions against the closed-form cdf.
    SimConfig sim;
    sim.params = P;
    sim.dim = 1;
    sim.epsilon = 1e-3;
    sim.horizon = ctx.vcfg().expl_horizon;
    sim.motion_dt = dt;
    sim.n_max = static_cast<std::uint64_t>(std::llround(cap_mass / sim.epsilon));
    sim.seed = ctx.run_seed(6);
    sim.replicates = ctx.scaled(1e4);
    FiniteMeasure x0 = delta(0.0, m);
    std::vector<ParticlePath> paths = simulate(x0, sim, ctx.threads);
    std::vector<double> times = debiased_explosion_times(paths, sim.epsilon, P);
    const double n = static_cast<double>(paths.size());
    const double c_drag = std::pow(sim.epsilon, 1.0 - P.gamma);

    bool frac_ok = true;
    double worst_ratio = 0.0;
    std::ostringstream d;
    d << "fractions (err<=bound):";
    for (double t : ctx.vcfg().cdf_times) {
        double F = law.cdf(t);
        double se = std::sqrt(std::max(F * (1.0 - F), 1e-12) / n);
        double emp = fraction_at_most(times, t, n);
        double slope = (law.cdf(t + dt) - law.cdf(std::max(t - dt, 0.0))) / (2.0 * dt);
        // Modeled bias: branching drag plus one detection step, doubled.
        double env = 2.0 * ctx.vcfg().envelope_scale *
                     (drag_cdf_shift(law, c_drag, t) + slope * dt);
        double bound = 4.0 * se * ctx.vcfg().tol_scale + env;
        double err = std::abs(emp - F);
        frac_ok = frac_ok && err <= bound;
        worst_ratio = std::max(worst_ratio, err / bound);
        d << " t=" << g3(t) << ": " << g3(err) << "<=" << g3(bound);
    }

    // Refining epsilon must shrink the KS distance monotonically.
    bool ks_ok = true;
    if (ctx.vcfg().ks_sweep) {
        const double eps_list[3] = {1e-2, 1e-3, 1e-4};
        double ks[3];
        for (int i = 0; i < 3; ++i) {
            SimConfig s;
            s.params = P;
            s.dim = 1;
            s.epsilon = eps_list[i];
            s.horizon = ctx.vcfg().ks_horizon;
            s.motion_dt = dt;
            s.n_max = static_cast<std::uint64_t>(std::llround(cap_mass / s.epsilon));
            s.seed = ctx.run_seed(60 + static_cast<std::uint64_t>(i));
            s.replicates = ctx.scaled(4e4);
            std::vector<ParticlePath> ps = simulate(x0, s, ctx.threads);
            std::vector<double> ts = debiased_explosion_times(ps, s.epsilon, P);
            ks[i] = ks_distance(ts, law, s.horizon, static_cast<double>(ps.size()));
        }
        ks_ok = ks[0] > ks[1] && ks[1] > ks[2];
        d << "; KS sweep " << g3(ks[0]) << " > " << g3(ks[1]) << " > " << g3(ks[2])
          << (ks_ok ? "" : " VIOLATED");
    } else {
        d << "; KS sweep disabled by config";
    }

    const double limit_s = 300.0;
    double secs = secs_since(t0);
    bool pass = frac_ok && ks_ok && secs < limit_s;
    d << "; runtime " << g3(secs) << " s (limit " << g3(limit_s) << " s)";
    return {6, "explosion time law", pass, worst_ratio, 1.0, d.str()};
}

CriterionResult c_laplace_duality(SuiteContext& ctx) {
    const GammaParams P = ctx.params();
    const double m = 1.0;
    const double t = 0.5;
    const double ts = ctx.vcfg().tol_scale;
    const double es = ctx.vcfg().envelope_scale;

    // Flat test function against the spatially constant closed form.
    SimConfig sim;
    sim.params = P;
    sim.dim = 1;
    sim.epsilon = 1e-3;
    sim.horizon = t;
    sim.motion_dt = 5e-3;
    sim.n_max = static_cast<std::uint64_t>(std::llround(60.0 / sim.epsilon));
    sim.seed = ctx.run_seed(7);
    sim.replicates = ctx.scaled(4e4);
    sim.snapshot_times = {t};
    FiniteMeasure x0 = delta(0.0, m);
    std::vector<ParticlePath> paths = simulate(x0, sim, ctx.threads);
    LaplaceEstimate est = empirical_laplace(paths, TestFunction::constant_fn(1.0), t, sim);

    double c_drag = std::pow(sim.epsilon, 1.0 - P.gamma);
    double V = exact_constant_solution(1.0, t, P);
    double expected = std::exp(-m * V);
    // The drag perturbs the exponent by at most c t V to first order; doubled
    // to cover time discretization.
    double env = 2.0 * es * expected * V * c_drag * t;
    double bound_const = 3.0 * est.std_error * ts + env;
    double err_const = std::abs(est.estimate - expected);
    bool ok_const = err_const <= bound_const;

    // Gaussian bump against the solver's Laplace functional.
    const GridSpec grid{1, 8.0, 512};
    const PicardConfig pc{t, 0.005, 48, 1e-8, 200};
    const NonlinearitySpec psi{NonlinearitySpec::Kind::power_gamma, P};
    TestFunction f = TestFunction::bump(1.0, 0.5, 0.5, {0.0, 0.0});
    PicardSolution pde = ctx.track(solve_function_ic(f.to_field(grid), psi, pc));
    double expected_b = laplace_functional(x0, pde);
    double pairing = -std::log(expected_b);

    SimConfig sb;
    sb.params = P;
    sb.dim = 1;
    sb.epsilon = 1e-3;
    sb.horizon = t;
    sb.motion_dt = 5e-3;
    sb.n_max = static_cast<std::uint64_t>(std::llround(40.0 / sb.epsilon));
    sb.seed = ctx.run_seed(8);
    sb.replicates = ctx.scaled(5e3);
    sb.record_positions = true;
    sb.snapshot_times = {t};
    std::vector<ParticlePath> pb = simulate(x0, sb, ctx.threads);
    LaplaceEstimate estb = empirical_laplace(pb, f, t, sb);

    double cb = std::pow(sb.epsilon, 1.0 - P.gamma);
    // Same drag envelope through the pairing, plus a 2e-3 relative allowance
    // on the solver side of the comparison.
    double env_b = 2.0 * es * expected_b * pairing * cb * t + 2e-3 * expected_b * pairing;
    double bound_b = 3.0 * estb.std_error * ts + env_b;
    double err_b = std::abs(estb.estimate - expected_b);
    bool ok_b = err_b <= bound_b;

    double measured = std::max(err_const / bound_const, err_b / bound_b);
    std::ostringstream d;
    d << "flat f: " << g3(est.estimate) << " vs " << g3(expected) << " (err " << g3(err_const)
      << " <= " << g3(bound_const) << "); bump f: " << g3(estb.estimate) << " vs "
      << g3(expected_b) << " (err " << g3(err_b) << " <= " << g3(bound_b)
      << "); bias envelopes scale with epsilon^(1-gamma)";
    return {7, "laplace duality", ok_const && ok_b, measured, 1.0, d.str()};
}

CriterionResult c_crossing_agreement(SuiteContext& ctx) {
    const GammaParams P = ctx.params();
    SimConfig sim;
    sim.params = P;
    sim.dim = 1;
    sim.epsilon = 1e-2;
    sim.horizon = 1.0;
    sim.motion_dt = 0.01;
    sim.record_positions = true;
    // A high threshold keeps the relative gap between the two statistics small:
    // jump activity scales with mass, so both cross within a step or two.
    sim.crossing_threshold = 1200.0;
    sim.crossing_function = TestFunction::bump(1.0, 0.02, 0.5, {0.0, 0.0});
    sim.stop_after_crossings = true;
    sim.n_max = static_cast<std::uint64_t>(std::llround(2400.0 / sim.epsilon));
    sim.seed = ctx.run_seed(9);
    sim.replicates = ctx.scaled(6e3);

    std::vector<ParticlePath> paths = simulate(delta(0.0, 1.0), sim, ctx.threads);
    ExplosionMatchReport rep = empirical_explosion_match(paths, sim);

    const double required = 0.99;
    bool pass = rep.agree_fraction >= required;
    std::ostringstream d;
    if (rep.n_events == 0) {
        // Vacuous at parameter points where unit mass never reaches the
        // threshold within the horizon (large gamma); the check bites at the
        // default parameters, where thousands of paths cross.
        d << "no path crossed mass " << g3(sim.crossing_threshold)
          << " within the horizon; agreement holds vacuously";
    } else {
        d << rep.n_events << " paths crossed mass " << g3(sim.crossing_threshold)
          << "; both functionals fired on " << rep.n_both << "; agreement within two steps on "
          << rep.n_agree << " (" << g3(rep.agree_fraction) << "); max gap " << g3(rep.max_gap)
          << " s";
    }
    return {8, "crossing agreement", pass, rep.agree_fraction, required, d.str()};
}

CriterionResult c_continuity_in_data(SuiteContext& ctx) {
    const GridSpec grid{1, 8.0, 512};
    const PicardConfig pc{1.0, 0.01, 48, 1e-8, 200};
    const NonlinearitySpec psi{NonlinearitySpec::Kind::power_gamma, ctx.params()};

    // Uniform density on the unit interval; the grid spacing 1/32 puts cell
    // edges exactly at +-1, so the node indicator carries mass 2 exactly and
    // matches the sampling target of the comb below.
    FiniteMeasure mu;
    GridField dens(grid, 0.0);
    for (std::size_t i = 0; i < dens.size(); ++i)
        if (std::abs(grid.node(i)[0]) <= 1.0) dens[i] = 1.0;
    mu.density = dens;
    PicardSolution base = ctx.track(solve(grid, mu, psi, pc));
    const GridField& vb = base.final_slice();

    GridField phi(grid, 1.0);
    const long long Ns[3] = {100, 1000, 10000};
    const int reps = 3;
    double diffs[3] = {0.0, 0.0, 0.0};
    for (int j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (int r = 0; r < reps; ++r) {
            Rng rng = Rng::substream(ctx.run_seed(90 + static_cast<std::uint64_t>(j)),
                                     static_cast<std::uint64_t>(r));
            FiniteMeasure comb = dirac_comb(phi, Ns[j], 1.0, rng);
            PicardSolution sol = ctx.track(solve(grid, comb, psi, pc));
            const GridField& vn = sol.final_slice();
            double mx = 0.0;
            for (std::size_t i = 0; i < vn.size(); ++i)
                mx = std::max(mx, std::abs(vn[i] - vb[i]));
            acc += mx;
        }
        diffs[j] = acc / reps;
    }

    bool pass = diffs[0] > diffs[1] && diffs[1] > diffs[2];
    double measured = std::min(diffs[0] - diffs[1], diffs[1] - diffs[2]);
    std::ostringstream d;
    d << "max-node distance to the density solution, mean of " << reps
      << " combs: N=100: " << g3(diffs[0]) << ", N=1000: " << g3(diffs[1])
      << ", N=10000: " << g3(diffs[2]) << (pass ? " (strictly decreasing)" : " NOT decreasing");
    return {9, "continuity in initial data", pass, measured, 0.0, d.str()};
}

CriterionResult c_density_identity(SuiteContext& ctx) {
    const GammaParams P = ctx.params();
    const double t = 0.5;
    const double ts = ctx.vcfg().tol_scale;
    const double es = ctx.vcfg().envelope_scale;
    const GridSpec grid{1, 8.0, 512};
    const PicardConfig pc{t, 0.005, 48, 1e-8, 200};
    const NonlinearitySpec psi{NonlinearitySpec::Kind::power_gamma, P};

    TestFunction f = TestFunction::bump(0.0, 1.0, 0.5, {0.0, 0.0});
    PicardSolution pde = ctx.track(solve_function_ic(f.to_field(grid), psi, pc));
    FiniteMeasure x0 = delta(0.0, 1.0);

    SimConfig sim;
    sim.params = P;
    sim.dim = 1;
    sim.epsilon = 5e-3;
    sim.horizon = t;
    sim.motion_dt = 5e-3;
    sim.n_max = static_cast<std::uint64_t>(std::llround(100.0 / sim.epsilon));
    sim.seed = ctx.run_seed(10);
    sim.replicates = ctx.scaled(2500);
    sim.record_positions = true;
    sim.snapshot_times = {t};
    std::vector<ParticlePath> paths = simulate(x0, sim, ctx.threads);

    AbsContinuityReport rep = abs_continuity_diagnostic(paths, sim, f, t, grid,
                                                        ctx.cfg.mollifier_levels, x0, pde);
    double pairing = -std::log(rep.pde_value);
    double c_drag = std::pow(sim.epsilon, 1.0 - P.gamma);
    double env = 2.0 * es * rep.pde_value * pairing * c_drag * t +
                 2e-3 * rep.pde_value * pairing;

    double bound_exact = 3.0 * rep.exact_std_error * ts + env;
    double err_exact = std::abs(rep.exact_estimate - rep.pde_value);
    bool pass = err_exact <= bound_exact;
    double worst_ratio = err_exact / bound_exact;

    std::ostringstream d;
    d << "particle pairing " << g3(rep.exact_estimate) << " vs solver " << g3(rep.pde_value)
      << " (err " << g3(err_exact) << " <= " << g3(bound_exact) << "); levels:";
    for (const AbsContinuityLevel& l : rep.levels) {
        // The mollified estimate sits within smoothing_gap of the exact one by
        // construction, so that gap joins the statistical bound additively.
        double bound_l = 3.0 * std::max(l.std_error, rep.exact_std_error) * ts +
                         l.smoothing_gap + env;
        double err_l = std::abs(l.estimate - rep.pde_value);
        pass = pass && err_l <= bound_l;
        worst_ratio = std::max(worst_ratio, err_l / bound_l);
        d << " n=" << l.n << ": err " << g3(err_l) << " <= " << g3(bound_l) << " (gap "
          << g3(l.smoothing_gap) << ")";
    }
    for (std::size_t i = 1; i < rep.levels.size(); ++i) {
        bool shrink = rep.levels[i].smoothing_gap < rep.levels[i - 1].smoothing_gap;
        pass = pass && shrink;
        if (!shrink) d << "; smoothing gap not shrinking at n=" << rep.levels[i].n;
    }
    return {10, "density identity", pass, worst_ratio, 1.0, d.str()};
}

CriterionResult c_monotonicity(SuiteContext& ctx) {
    const double allowed = -1e-12;
    bool pass = ctx.min_increment >= allowed;
    std::ostringstream d;
    d << "most negative nodewise iterate step " << g3(ctx.min_increment) << " across "
      << ctx.solve_count << " solves (evaluated after all other criteria)";
    return {4, "picard monotonicity", pass, ctx.min_increment, allowed, d.str()};
}

}  // namespace

ValidationReport run_acceptance(const ExperimentConfig& cfg, int threads,
                                std::ostream* progress) {
    auto t0 = Clock::now();
    SuiteContext ctx{cfg, std::max(1, threads)};

    std::vector<CriterionResult> rs;
    auto last = Clock::now();
    auto add = [&](CriterionResult c) {
        if (progress) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s %2d %-26s measured %-11.4g bound %-11.4g [%.1f s]",
                          c.pass ? "PASS" : "FAIL", c.index, c.name.c_str(), c.measured,
                          c.tolerance, secs_since(last));
            *progress << buf << "\n      " << c.details << std::endl;
        }
        last = Clock::now();
        rs.push_back(std::move(c));
    };

    add(c_constant_exactness(ctx));
    add(c_linear_majorant(ctx));
    add(c_two_sided_bounds(ctx));
    add(c_comparison_concavity(ctx));
    add(c_explosion_law(ctx));
    add(c_laplace_duality(ctx));
    add(c_crossing_agreement(ctx));
    add(c_continuity_in_data(ctx));
    add(c_density_identity(ctx));
    add(c_monotonicity(ctx));  // pools every solve above

    std::sort(rs.begin(), rs.end(),
              [](const CriterionResult& a, const CriterionResult& b) { return a.index < b.index; });
    ValidationReport rep;
    rep.criteria = std::move(rs);
    rep.all_pass = true;
    for (const CriterionResult& c : rep.criteria) rep.all_pass = rep.all_pass && c.pass;
    rep.min_picard_increment = ctx.min_increment;
    rep.solve_count = ctx.solve_count;
    rep.wall_seconds = secs_since(t0);
    return rep;
}

}  // namespace sbm
