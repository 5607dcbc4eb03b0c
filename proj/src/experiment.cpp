#include "sbm/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "sbm/density.hpp"
#include "sbm/errors.hpp"
#include "sbm/explosion.hpp"
#include "sbm/io.hpp"
#include "sbm/particles.hpp"
#include "sbm/picard.hpp"
#include "sbm/validate.hpp"

namespace sbm {

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

double wall_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void note(std::ostream* os, const std::string& line) {
    if (os) *os << line << std::endl;
}

std::string seconds_text(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f s", s);
    return buf;
}

// Canonical config text and its git blob id, embedded in every output file.
struct Provenance {
    std::string text;
    std::string hash;

    explicit Provenance(const ExperimentConfig& cfg)
        : text(cfg.canonical()), hash(git_blob_sha1(text)) {}

    void csv_header(std::string& out, const std::string& title, const std::string& schema) const {
        out += "# " + title + "\n";
        out += "# schema: " + schema + "\n";
        out += "# config_hash: " + hash + "\n";
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) out += "# config: " + line + "\n";
        out += schema + "\n";
    }

    void attach(JsonValue& doc, const std::string& subcommand) const {
        doc.set("tool", JsonValue::str("sbm"));
        doc.set("subcommand", JsonValue::str(subcommand));
        doc.set("config_hash", JsonValue::str(hash));
        doc.set("config", JsonValue::str(text));
    }
};

void emit(RunOutcome& out, const RunOptions& opt, const std::string& name,
          const std::string& content) {
    std::string path = join_path(opt.out_dir, name);
    write_text_file(path, content);
    out.files.push_back(path);
}

}  // namespace

void apply_overrides(ExperimentConfig& cfg, const RunOptions& opt) {
    if (opt.seed_override) cfg.sim.seed = *opt.seed_override;
    if (opt.format_override) {
        cfg.outputs.csv = false;
        cfg.outputs.json = false;
        std::stringstream ss(*opt.format_override);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            std::string f;
            for (char c : tok)
                if (c != ' ' && c != '\t') f += static_cast<char>(std::tolower(c));
            if (f.empty()) continue;
            if (f == "csv") cfg.outputs.csv = true;
            else if (f == "json") cfg.outputs.json = true;
            else throw ConfigError("unknown format '" + f + "' (expected csv and/or json)");
        }
        if (!cfg.outputs.csv && !cfg.outputs.json)
            throw ConfigError("--format selected no output format");
    }
    cfg.finalize();
}

RunOutcome run_solve(ExperimentConfig cfg, const RunOptions& opt) {
    apply_overrides(cfg, opt);
    RunOutcome out;
    GridSpec grid = cfg.grid();
    FiniteMeasure mu = cfg.initial_measure.build(grid);

    auto t0 = std::chrono::steady_clock::now();
    PicardSolution sol = solve(grid, mu, cfg.nonlinearity(), cfg.solver);
    if (!sol.converged) {
        std::string last = sol.sup_diffs.empty() ? "none" : fmt17(sol.sup_diffs.back());
        throw NonConvergenceError("solve: tolerance not reached after " +
                                  std::to_string(sol.iter_count) +
                                  " iterations; last weighted sup diff " + last);
    }
    BoundsReport bounds = check_bounds(sol);
    note(opt.progress, "solve: converged in " + std::to_string(sol.iter_count) + " iterations (" +
                           seconds_text(wall_since(t0)) + ")");

    Provenance prov(cfg);
    ensure_directory(opt.out_dir);
    if (cfg.outputs.csv) {
        std::string csv;
        prov.csv_header(csv, "log-Laplace solution slices", "t,node,value");
        for (std::size_t q = 0; q < sol.times.size(); ++q) {
            const std::string t_text = fmt17(sol.times[q]);
            const GridField& slice = sol.slices[q];
            for (std::size_t i = 0; i < slice.size(); ++i)
                csv += t_text + "," + std::to_string(i) + "," + fmt17(slice[i]) + "\n";
        }
        emit(out, opt, "solve_slices.csv", csv);
    }
    if (cfg.outputs.json) {
        JsonValue doc = JsonValue::object();
        prov.attach(doc, "solve");
        doc.set("converged", JsonValue::boolean(sol.converged));
        doc.set("iterations", JsonValue::integer(sol.iter_count));
        doc.set("sup_diffs", JsonValue::num_array(sol.sup_diffs));
        doc.set("min_increment", JsonValue::num(sol.min_increment));
        doc.set("max_bound_overshoot", JsonValue::num(sol.max_bound_overshoot));
        doc.set("initial_mass", JsonValue::num(mu.total_mass()));
        doc.set("slice_times", JsonValue::num_array(sol.times));
        JsonValue b = JsonValue::object();
        b.set("lower_ok", JsonValue::boolean(bounds.lower_ok));
        b.set("upper_ok", JsonValue::boolean(bounds.upper_ok));
        b.set("min_lower_margin", JsonValue::num(bounds.min_lower_margin));
        b.set("min_upper_margin", JsonValue::num(bounds.min_upper_margin));
        b.set("lower_slack", JsonValue::num(bounds.lower_slack));
        b.set("upper_slack", JsonValue::num(bounds.upper_slack));
        doc.set("bounds", b);
        emit(out, opt, "solve_convergence.json", doc.dump());
    }
    out.summary = "solve: converged in " + std::to_string(sol.iter_count) +
                  " iterations; bound margins lower " + fmt17(bounds.min_lower_margin) +
                  ", upper " + fmt17(bounds.min_upper_margin);
    return out;
}

RunOutcome run_simulate(ExperimentConfig cfg, const RunOptions& opt) {
    apply_overrides(cfg, opt);
    RunOutcome out;
    if (cfg.initial_measure.has_density())
        throw ConfigError("simulate: initial measure must be purely atomic");
    if (cfg.sim.snapshot_times.empty()) cfg.sim.snapshot_times = {cfg.sim.horizon};
    if (cfg.test_function.kind != TestFunction::Kind::constant) cfg.sim.record_positions = true;
    cfg.finalize();

    FiniteMeasure x0;
    x0.atoms = cfg.initial_measure.atoms;
    const std::uint64_t n0 = initial_particle_count(x0, cfg.sim.epsilon);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<ParticlePath> paths = simulate(x0, cfg.sim, opt.threads);
    note(opt.progress, "simulate: " + std::to_string(paths.size()) + " replicates of " +
                           std::to_string(n0) + " particles (" + seconds_text(wall_since(t0)) +
                           ")");

    std::size_t n_exploded = 0;
    double final_count_sum = 0.0;
    for (const ParticlePath& p : paths) {
        if (p.exploded) ++n_exploded;
        final_count_sum += static_cast<double>(p.final_count);
    }
    if (n_exploded == paths.size())
        out.warnings.push_back("every replicate hit the particle cap before the horizon");

    struct EstimateRow {
        double t;
        LaplaceEstimate laplace, survival;
    };
    std::vector<EstimateRow> rows;
    const TestFunction zero = TestFunction::constant_fn(0.0);
    for (double t : cfg.sim.snapshot_times)
        rows.push_back({t, empirical_laplace(paths, cfg.test_function, t, cfg.sim),
                        empirical_laplace(paths, zero, t, cfg.sim)});

    Provenance prov(cfg);
    ensure_directory(opt.out_dir);
    const std::uint64_t n_traces =
        std::min<std::uint64_t>(paths.size(), static_cast<std::uint64_t>(std::max(
                                                  0, cfg.outputs.trace_replicates)));
    if (cfg.outputs.csv) {
        std::string csv;
        prov.csv_header(csv, "particle count traces (first replicates)", "replicate,time,count");
        for (std::uint64_t r = 0; r < n_traces; ++r)
            for (const Snapshot& s : paths[r].snapshots)
                csv += std::to_string(r) + "," + fmt17(s.time) + "," + std::to_string(s.count) +
                       "\n";
        emit(out, opt, "simulate_traces.csv", csv);

        if (cfg.sim.record_positions) {
            std::string pos;
            const std::string schema =
                cfg.dimension == 2 ? "replicate,time,particle,x,y" : "replicate,time,particle,x";
            prov.csv_header(pos, "particle positions (first replicates)", schema);
            for (std::uint64_t r = 0; r < n_traces; ++r)
                for (const Snapshot& s : paths[r].snapshots)
                    for (std::size_t i = 0; i < s.xs.size(); ++i) {
                        pos += std::to_string(r) + "," + fmt17(s.time) + "," + std::to_string(i) +
                               "," + fmt17(s.xs[i]);
                        if (cfg.dimension == 2) pos += "," + fmt17(s.ys[i]);
                        pos += "\n";
                    }
            emit(out, opt, "simulate_positions.csv", pos);
        }
    }
    if (cfg.outputs.json) {
        JsonValue doc = JsonValue::object();
        prov.attach(doc, "simulate");
        doc.set("replicates", JsonValue::uinteger(paths.size()));
        doc.set("initial_count", JsonValue::uinteger(n0));
        doc.set("epsilon", JsonValue::num(cfg.sim.epsilon));
        doc.set("beta", JsonValue::num(cfg.sim.resolved_beta()));
        doc.set("n_max", JsonValue::uinteger(cfg.sim.resolved_n_max(n0)));
        doc.set("exploded_count", JsonValue::uinteger(n_exploded));
        doc.set("exploded_fraction",
                JsonValue::num(static_cast<double>(n_exploded) / static_cast<double>(paths.size())));
        doc.set("final_count_mean",
                JsonValue::num(final_count_sum / static_cast<double>(paths.size())));
        JsonValue arr = JsonValue::array();
        for (const EstimateRow& r : rows) {
            JsonValue e = JsonValue::object();
            e.set("t", JsonValue::num(r.t));
            e.set("laplace", JsonValue::num(r.laplace.estimate));
            e.set("laplace_se", JsonValue::num(r.laplace.std_error));
            e.set("survival", JsonValue::num(r.survival.estimate));
            e.set("survival_se", JsonValue::num(r.survival.std_error));
            arr.push(e);
        }
        doc.set("estimates", arr);
        if (cfg.sim.crossing_threshold > 0.0) {
            ExplosionMatchReport m = empirical_explosion_match(paths, cfg.sim);
            JsonValue c = JsonValue::object();
            c.set("threshold", JsonValue::num(cfg.sim.crossing_threshold));
            c.set("events", JsonValue::uinteger(m.n_events));
            c.set("both_fired", JsonValue::uinteger(m.n_both));
            c.set("agree", JsonValue::uinteger(m.n_agree));
            c.set("agree_fraction", JsonValue::num(m.agree_fraction));
            c.set("max_gap", JsonValue::num(m.max_gap));
            doc.set("crossings", c);
        }
        JsonValue warn = JsonValue::array();
        for (const std::string& w : out.warnings) warn.push(JsonValue::str(w));
        doc.set("warnings", warn);
        emit(out, opt, "simulate_summary.json", doc.dump());
    }
    {
        std::ostringstream s;
        s << "simulate: " << paths.size() << " replicates, exploded fraction "
          << fmt17(static_cast<double>(n_exploded) / static_cast<double>(paths.size()));
        out.summary = s.str();
    }
    return out;
}

RunOutcome run_explosion(ExperimentConfig cfg, const RunOptions& opt) {
    apply_overrides(cfg, opt);
    RunOutcome out;
    GridSpec grid = cfg.grid();
    FiniteMeasure mu = cfg.initial_measure.build(grid);
    ExplosionLaw law{cfg.params, mu.total_mass()};
    law.validate();

    const double horizon = cfg.sim.horizon;
    const std::uint64_t n = cfg.sim.replicates;
    Rng rng = Rng::substream(cfg.sim.seed, 0);
    std::vector<double> samples(n);
    for (double& s : samples) s = law.sample(rng.next_unit());
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());

    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double F = law.cdf(sorted[i]);
        double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        double lo = static_cast<double>(i) / static_cast<double>(n);
        ks = std::max({ks, std::abs(hi - F), std::abs(F - lo)});
    }
    double sample_mean = 0.0;
    for (double s : samples) sample_mean += s;
    sample_mean /= static_cast<double>(n);

    const std::vector<double> qs{0.1, 0.25, 0.5, 0.75, 0.9};
    Provenance prov(cfg);
    ensure_directory(opt.out_dir);
    if (cfg.outputs.csv) {
        std::string csv;
        prov.csv_header(csv, "explosion time law", "t,cdf,survival");
        const int rows = 200;
        for (int i = 0; i <= rows; ++i) {
            double t = horizon * i / rows;
            csv += fmt17(t) + "," + fmt17(law.cdf(t)) + "," + fmt17(law.survival(t)) + "\n";
        }
        emit(out, opt, "explosion_cdf.csv", csv);

        std::string sc;
        prov.csv_header(sc, "explosion time samples", "index,time");
        for (std::size_t i = 0; i < samples.size(); ++i)
            sc += std::to_string(i) + "," + fmt17(samples[i]) + "\n";
        emit(out, opt, "explosion_samples.csv", sc);
    }
    if (cfg.outputs.json) {
        JsonValue doc = JsonValue::object();
        prov.attach(doc, "explosion");
        doc.set("total_mass", JsonValue::num(law.total_mass));
        doc.set("gamma", JsonValue::num(cfg.params.gamma));
        doc.set("samples", JsonValue::uinteger(n));
        doc.set("seed", JsonValue::uinteger(cfg.sim.seed));
        doc.set("ks_distance", JsonValue::num(ks));
        doc.set("sample_mean", JsonValue::num(sample_mean));
        JsonValue qarr = JsonValue::array();
        for (double q : qs) {
            JsonValue row = JsonValue::object();
            row.set("q", JsonValue::num(q));
            row.set("exact", JsonValue::num(law.sample(1.0 - q)));
            std::size_t idx = static_cast<std::size_t>(q * static_cast<double>(n - 1));
            row.set("sample", JsonValue::num(sorted[idx]));
            qarr.push(row);
        }
        doc.set("quantiles", qarr);
        emit(out, opt, "explosion_summary.json", doc.dump());
    }
    out.summary = "explosion: KS distance " + fmt17(ks) + " over " + std::to_string(n) +
                  " samples";
    return out;
}

RunOutcome run_density(ExperimentConfig cfg, const RunOptions& opt) {
    apply_overrides(cfg, opt);
    RunOutcome out;
    if (cfg.initial_measure.has_density())
        throw ConfigError("density: initial measure must be purely atomic for the particle runs");
    const double t = cfg.solver.t_final;
    if (t > cfg.sim.horizon * (1.0 + 1e-12))
        throw ConfigError("density: solver t_final must not exceed the sim horizon");
    cfg.sim.record_positions = true;
    cfg.sim.snapshot_times = {t};
    cfg.finalize();

    GridSpec grid = cfg.grid();
    FiniteMeasure x0;
    x0.atoms = cfg.initial_measure.atoms;

    auto t0 = std::chrono::steady_clock::now();
    GridField f = cfg.test_function.to_field(grid);
    PicardSolution pde = solve_function_ic(f, cfg.nonlinearity(), cfg.solver);
    if (!pde.converged)
        throw NonConvergenceError("density: PDE side did not converge within max_iters");
    std::vector<ParticlePath> paths = simulate(x0, cfg.sim, opt.threads);
    AbsContinuityReport rep = abs_continuity_diagnostic(paths, cfg.sim, cfg.test_function, t,
                                                        grid, cfg.mollifier_levels, x0, pde);
    note(opt.progress, "density: " + std::to_string(paths.size()) + " replicates (" +
                           seconds_text(wall_since(t0)) + ")");

    // Render the smoothed fields from the first replicate still alive at t.
    const Snapshot* snap = nullptr;
    for (const ParticlePath& p : paths) {
        if (p.exploded && p.explosion_time && *p.explosion_time <= t) continue;
        for (const Snapshot& s : p.snapshots)
            if (std::abs(s.time - t) <= 0.5 * cfg.sim.motion_dt) {
                snap = &s;
                break;
            }
        if (snap) break;
    }
    if (!snap) out.warnings.push_back("no surviving replicate at t; density fields not written");

    Provenance prov(cfg);
    ensure_directory(opt.out_dir);
    if (cfg.outputs.csv && snap) {
        for (int n : cfg.mollifier_levels) {
            GridField dens = density_field(*snap, cfg.sim.epsilon, grid,
                                           Mollifier{n, cfg.dimension});
            std::string csv;
            const std::string schema = cfg.dimension == 2 ? "node,x,y,value" : "node,x,value";
            prov.csv_header(csv, "mollified density field, level " + std::to_string(n), schema);
            for (std::size_t i = 0; i < dens.size(); ++i) {
                Point p = grid.node(i);
                csv += std::to_string(i) + "," + fmt17(p[0]);
                if (cfg.dimension == 2) csv += "," + fmt17(p[1]);
                csv += "," + fmt17(dens[i]) + "\n";
            }
            emit(out, opt, "density_field_n" + std::to_string(n) + ".csv", csv);
        }
    }
    if (cfg.outputs.json) {
        JsonValue doc = JsonValue::object();
        prov.attach(doc, "density");
        doc.set("t", JsonValue::num(t));
        doc.set("replicates", JsonValue::uinteger(paths.size()));
        doc.set("pde_value", JsonValue::num(rep.pde_value));
        doc.set("exact_estimate", JsonValue::num(rep.exact_estimate));
        doc.set("exact_std_error", JsonValue::num(rep.exact_std_error));
        doc.set("survival_fraction", JsonValue::num(rep.survival_fraction));
        JsonValue levels = JsonValue::array();
        for (const AbsContinuityLevel& l : rep.levels) {
            JsonValue e = JsonValue::object();
            e.set("n", JsonValue::integer(l.n));
            e.set("estimate", JsonValue::num(l.estimate));
            e.set("std_error", JsonValue::num(l.std_error));
            e.set("smoothing_gap", JsonValue::num(l.smoothing_gap));
            levels.push(e);
        }
        doc.set("levels", levels);
        JsonValue warn = JsonValue::array();
        for (const std::string& w : out.warnings) warn.push(JsonValue::str(w));
        doc.set("warnings", warn);
        emit(out, opt, "density_report.json", doc.dump());
    }
    out.summary = "density: PDE value " + fmt17(rep.pde_value) + ", exact estimate " +
                  fmt17(rep.exact_estimate) + " +- " + fmt17(rep.exact_std_error);
    return out;
}

RunOutcome run_validate(ExperimentConfig cfg, const RunOptions& opt) {
    apply_overrides(cfg, opt);
    RunOutcome out;
    ValidationReport rep = run_acceptance(cfg, opt.threads, opt.progress);

    Provenance prov(cfg);
    ensure_directory(opt.out_dir);
    if (cfg.outputs.json) {
        JsonValue doc = JsonValue::object();
        prov.attach(doc, "validate");
        doc.set("all_pass", JsonValue::boolean(rep.all_pass));
        doc.set("min_picard_increment", JsonValue::num(rep.min_picard_increment));
        doc.set("solve_count", JsonValue::integer(rep.solve_count));
        JsonValue arr = JsonValue::array();
        for (const CriterionResult& c : rep.criteria) {
            JsonValue e = JsonValue::object();
            e.set("index", JsonValue::integer(c.index));
            e.set("name", JsonValue::str(c.name));
            e.set("pass", JsonValue::boolean(c.pass));
            e.set("measured", JsonValue::num(c.measured));
            e.set("tolerance", JsonValue::num(c.tolerance));
            e.set("details", JsonValue::str(c.details));
            arr.push(e);
        }
        doc.set("criteria", arr);
        emit(out, opt, "validate_report.json", doc.dump());
    }
    if (cfg.outputs.csv) {
        std::string csv;
        prov.csv_header(csv, "acceptance criteria results", "index,name,pass,measured,tolerance");
        for (const CriterionResult& c : rep.criteria)
            csv += std::to_string(c.index) + "," + c.name + "," + (c.pass ? "1" : "0") + "," +
                   fmt17(c.measured) + "," + fmt17(c.tolerance) + "\n";
        emit(out, opt, "validate_report.csv", csv);
    }

    int passed = 0;
    for (const CriterionResult& c : rep.criteria) passed += c.pass ? 1 : 0;
    out.exit_code = rep.all_pass ? 0 : 1;
    out.summary = "validate: " + std::to_string(passed) + "/" +
                  std::to_string(rep.criteria.size()) + " criteria passed (" +
                  seconds_text(rep.wall_seconds) + ")";
    return out;
}

}  // namespace sbm
