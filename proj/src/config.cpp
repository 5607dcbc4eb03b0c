#include "sbm/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "sbm/errors.hpp"
#include "sbm/io.hpp"

namespace sbm {

FiniteMeasure MeasureConfig::build(const GridSpec& spec) const {
    FiniteMeasure mu;
    mu.atoms = atoms;
    if (has_density()) {
        GridField f(spec, 0.0);
        const double pi = 3.14159265358979323846;
        for (std::size_t i = 0; i < f.size(); ++i) {
            Point p = spec.node(i);
            double r2 = p[0] * p[0] + (spec.dim == 2 ? p[1] * p[1] : 0.0);
            double v = 0.0;
            switch (density) {
                case DensityKind::none: break;
                case DensityKind::constant: v = density_param; break;
                case DensityKind::gaussian: {
                    double s2 = density_param * density_param;
                    double norm = spec.dim == 1 ? 1.0 / std::sqrt(2.0 * pi * s2)
                                                : 1.0 / (2.0 * pi * s2);
                    v = norm * std::exp(-r2 / (2.0 * s2));
                    break;
                }
                case DensityKind::indicator:
                    v = r2 <= density_param * density_param ? 1.0 : 0.0;
                    break;
            }
            f[i] = density_scale * v;
        }
        mu.density = std::move(f);
    }
    return mu;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Parse helpers throw std::invalid_argument with a bare message; the caller
// prefixes the file location.
double parse_double(const std::string& s) {
    std::string t = trim(s);
    if (t.empty()) throw std::invalid_argument("empty value");
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) throw std::invalid_argument("not a number: '" + t + "'");
    return v;
}

long long parse_i64(const std::string& s) {
    std::string t = trim(s);
    if (t.empty()) throw std::invalid_argument("empty value");
    char* end = nullptr;
    errno = 0;
    long long v = std::strtoll(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size() || errno == ERANGE)
        throw std::invalid_argument("not an integer: '" + t + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::string t = trim(s);
    if (t.empty()) throw std::invalid_argument("empty value");
    if (t[0] == '-') throw std::invalid_argument("must be nonnegative: '" + t + "'");
    char* end = nullptr;
    errno = 0;
    unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size() || errno == ERANGE)
        throw std::invalid_argument("not an unsigned integer: '" + t + "'");
    return v;
}

int parse_int(const std::string& s) {
    long long v = parse_i64(s);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw std::invalid_argument("integer out of range: '" + trim(s) + "'");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& s) {
    std::string t = lower(trim(s));
    if (t == "true" || t == "on" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "off" || t == "no" || t == "0") return false;
    throw std::invalid_argument("not a boolean: '" + trim(s) + "'");
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (const std::string& part : split(s, ',')) out.push_back(parse_double(part));
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    if (trim(s).empty()) return out;
    for (const std::string& part : split(s, ',')) out.push_back(parse_int(part));
    return out;
}

constexpr double kUnsetCoord = std::numeric_limits<double>::quiet_NaN();

// "x" or "x,y"; the second coordinate is NaN-marked when absent and resolved
// against the dimension in finalize().
Point parse_point(const std::string& s) {
    std::vector<std::string> parts = split(s, ',');
    if (parts.size() == 1) return Point{parse_double(parts[0]), kUnsetCoord};
    if (parts.size() == 2) return Point{parse_double(parts[0]), parse_double(parts[1])};
    throw std::invalid_argument("expected 'x' or 'x,y': '" + trim(s) + "'");
}

// Semicolon-separated "pos:mass" entries; blank entries are skipped so a
// trailing separator is harmless.
std::vector<Atom> parse_atoms(const std::string& s) {
    std::vector<Atom> out;
    for (const std::string& raw : split(s, ';')) {
        std::string entry = trim(raw);
        if (entry.empty()) continue;
        std::size_t colon = entry.rfind(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("atom entry needs 'position:mass': '" + entry + "'");
        Atom a;
        a.position = parse_point(entry.substr(0, colon));
        a.mass = parse_double(entry.substr(colon + 1));
        out.push_back(a);
    }
    return out;
}

struct Parser {
    ExperimentConfig& cfg;
    std::vector<std::string> errors;
    std::set<std::pair<std::string, std::string>> seen;

    void fail(int line, const std::string& where, const std::string& msg) {
        errors.push_back("line " + std::to_string(line) + ", " + where + ": " + msg);
    }

    void apply(int line, const std::string& sec, const std::string& key, const std::string& val) {
        const std::string where = "[" + sec + "] " + key;
        if (!seen.insert({sec, key}).second) {
            fail(line, where, "duplicate key");
            return;
        }
        try {
            if (!dispatch(sec, key, val)) fail(line, where, "unknown key");
        } catch (const std::exception& e) {
            fail(line, where, e.what());
        }
    }

    bool dispatch(const std::string& sec, const std::string& key, const std::string& val) {
        if (sec == "model") {
            if (key == "gamma") cfg.params.gamma = parse_double(val);
            else if (key == "dimension") cfg.dimension = parse_int(val);
            else if (key == "psi") {
                std::string v = lower(trim(val));
                if (v == "power") cfg.psi_kind = NonlinearitySpec::Kind::power_gamma;
                else if (v == "linear") cfg.psi_kind = NonlinearitySpec::Kind::linear_plus_one;
                else throw std::invalid_argument("expected power or linear");
            } else return false;
            return true;
        }
        if (sec == "grid") {
            if (key == "half_extent") cfg.half_extent = parse_double(val);
            else if (key == "points_per_axis") cfg.points_per_axis = parse_int(val);
            else return false;
            return true;
        }
        if (sec == "solver") {
            if (key == "t_final") cfg.solver.t_final = parse_double(val);
            else if (key == "t_min") cfg.solver.t_min = parse_double(val);
            else if (key == "time_steps") cfg.solver.time_steps = parse_int(val);
            else if (key == "tol") cfg.solver.tol = parse_double(val);
            else if (key == "max_iters") cfg.solver.max_iters = parse_int(val);
            else return false;
            return true;
        }
        if (sec == "initial_measure") {
            if (key == "atoms") cfg.initial_measure.atoms = parse_atoms(val);
            else if (key == "density") parse_density(val);
            else if (key == "density_scale") cfg.initial_measure.density_scale = parse_double(val);
            else return false;
            return true;
        }
        if (sec == "test_function") {
            if (key == "kind") {
                std::string v = lower(trim(val));
                if (v == "constant") cfg.test_function.kind = TestFunction::Kind::constant;
                else if (v == "bump") cfg.test_function.kind = TestFunction::Kind::gaussian_bump;
                else throw std::invalid_argument("expected constant or bump");
            } else if (key == "level") cfg.test_function.level = parse_double(val);
            else if (key == "base") cfg.test_function.base = parse_double(val);
            else if (key == "amplitude") cfg.test_function.amplitude = parse_double(val);
            else if (key == "width") cfg.test_function.width = parse_double(val);
            else if (key == "center") cfg.test_function.center = parse_point(val);
            else return false;
            return true;
        }
        if (sec == "sim") {
            if (key == "epsilon") cfg.sim.epsilon = parse_double(val);
            else if (key == "beta") {
                std::string v = lower(trim(val));
                if (v == "auto") cfg.sim.beta_override.reset();
                else cfg.sim.beta_override = parse_double(val);
            } else if (key == "horizon") cfg.sim.horizon = parse_double(val);
            else if (key == "motion_dt") cfg.sim.motion_dt = parse_double(val);
            else if (key == "n_max") {
                std::string v = lower(trim(val));
                cfg.sim.n_max = v == "auto" ? 0 : parse_u64(val);
            } else if (key == "replicates") cfg.sim.replicates = parse_u64(val);
            else if (key == "seed") cfg.sim.seed = parse_u64(val);
            else if (key == "record_positions") cfg.sim.record_positions = parse_bool(val);
            else if (key == "snapshot_times") cfg.sim.snapshot_times = parse_double_list(val);
            else if (key == "crossing_threshold") cfg.sim.crossing_threshold = parse_double(val);
            else if (key == "stop_after_crossings") cfg.sim.stop_after_crossings = parse_bool(val);
            else return false;
            return true;
        }
        if (sec == "density") {
            if (key == "mollifier_levels") cfg.mollifier_levels = parse_int_list(val);
            else if (key == "comb_points") cfg.comb_points = parse_i64(val);
            else if (key == "comb_radius") cfg.comb_radius = parse_double(val);
            else return false;
            return true;
        }
        if (sec == "outputs") {
            if (key == "directory") cfg.outputs.directory = trim(val);
            else if (key == "formats") parse_formats(val);
            else if (key == "trace_replicates") cfg.outputs.trace_replicates = parse_int(val);
            else return false;
            return true;
        }
        if (sec == "validate") {
            if (key == "tol_scale") cfg.validation.tol_scale = parse_double(val);
            else if (key == "envelope_scale") cfg.validation.envelope_scale = parse_double(val);
            else if (key == "replicate_scale") cfg.validation.replicate_scale = parse_double(val);
            else if (key == "ks_sweep") cfg.validation.ks_sweep = parse_bool(val);
            else if (key == "cdf_times") cfg.validation.cdf_times = parse_double_list(val);
            else if (key == "expl_horizon") cfg.validation.expl_horizon = parse_double(val);
            else if (key == "ks_horizon") cfg.validation.ks_horizon = parse_double(val);
            else return false;
            return true;
        }
        throw std::invalid_argument("unknown section");
    }

    void parse_density(const std::string& val) {
        std::vector<std::string> parts = split(trim(val), ':');
        std::string kind = lower(trim(parts[0]));
        if (kind == "none") {
            if (parts.size() != 1) throw std::invalid_argument("none takes no parameter");
            cfg.initial_measure.density = MeasureConfig::DensityKind::none;
            return;
        }
        if (parts.size() != 2)
            throw std::invalid_argument("expected none, constant:a, gaussian:sigma, or indicator:r");
        double p = parse_double(parts[1]);
        if (kind == "constant") cfg.initial_measure.density = MeasureConfig::DensityKind::constant;
        else if (kind == "gaussian") cfg.initial_measure.density = MeasureConfig::DensityKind::gaussian;
        else if (kind == "indicator") cfg.initial_measure.density = MeasureConfig::DensityKind::indicator;
        else throw std::invalid_argument("unknown density kind '" + kind + "'");
        cfg.initial_measure.density_param = p;
    }

    void parse_formats(const std::string& val) {
        cfg.outputs.csv = false;
        cfg.outputs.json = false;
        for (const std::string& part : split(val, ',')) {
            std::string f = lower(trim(part));
            if (f.empty()) continue;
            if (f == "csv") cfg.outputs.csv = true;
            else if (f == "json") cfg.outputs.json = true;
            else throw std::invalid_argument("unknown format '" + f + "'");
        }
    }
};

}  // namespace

ExperimentConfig ExperimentConfig::from_string(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    Parser parser{cfg, {}, {}};
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                parser.fail(line_no, "section header", "missing closing bracket");
                continue;
            }
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (section.empty()) parser.fail(line_no, "section header", "empty section name");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            parser.fail(line_no, "'" + line + "'", "expected key = value");
            continue;
        }
        if (section.empty()) {
            parser.fail(line_no, "'" + line + "'", "key outside any section");
            continue;
        }
        std::string key = lower(trim(line.substr(0, eq)));
        std::string val = line.substr(eq + 1);
        if (key.empty()) {
            parser.fail(line_no, "'" + line + "'", "empty key");
            continue;
        }
        parser.apply(line_no, section, key, val);
    }
    if (!parser.errors.empty()) {
        std::string msg = origin + ": " + std::to_string(parser.errors.size()) + " config error(s):";
        for (const std::string& e : parser.errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    cfg.finalize();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return from_string(text, path);
}

void ExperimentConfig::finalize() {
    std::vector<std::string> errs;
    auto guard = [&errs](const std::string& where, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            errs.push_back(where + ": " + e.what());
        }
    };

    if (dimension != 1 && dimension != 2) errs.push_back("model: dimension must be 1 or 2");
    guard("model", [&] { params.validate(); });

    // Resolve single-coordinate points against the dimension.
    auto fix_point = [&](Point& p, const std::string& what) {
        if (std::isnan(p[1])) {
            if (dimension == 2) errs.push_back(what + ": dimension 2 needs 'x,y'");
            p[1] = 0.0;
        } else if (dimension == 1 && p[1] != 0.0) {
            errs.push_back(what + ": dimension 1 takes a single coordinate");
        }
        if (!std::isfinite(p[0]) || !std::isfinite(p[1]))
            errs.push_back(what + ": coordinates must be finite");
    };
    for (Atom& a : initial_measure.atoms) fix_point(a.position, "initial_measure atom");
    fix_point(test_function.center, "test_function center");

    sim.params = params;
    sim.dim = dimension;
    if (sim.crossing_threshold > 0.0) {
        sim.crossing_function = test_function;
    } else {
        sim.crossing_function.reset();
    }

    guard("grid", [&] { grid().validate(); });
    guard("solver", [&] { solver.validate(); });
    guard("sim", [&] { sim.validate(); });

    {
        std::string e = test_function.validate();
        if (!e.empty()) errs.push_back("test_function: " + e);
    }

    double atom_mass = 0.0;
    for (const Atom& a : initial_measure.atoms) {
        if (!(a.mass >= 0.0) || !std::isfinite(a.mass))
            errs.push_back("initial_measure: atom masses must be nonnegative and finite");
        else
            atom_mass += a.mass;
        if (std::abs(a.position[0]) >= half_extent ||
            (dimension == 2 && std::abs(a.position[1]) >= half_extent))
            errs.push_back("initial_measure: atoms must lie strictly inside the grid box");
    }
    if (initial_measure.has_density()) {
        if (!(initial_measure.density_param > 0.0) || !std::isfinite(initial_measure.density_param))
            errs.push_back("initial_measure: density parameter must be positive and finite");
        if (!(initial_measure.density_scale > 0.0) || !std::isfinite(initial_measure.density_scale))
            errs.push_back("initial_measure: density_scale must be positive and finite");
        if (initial_measure.density == MeasureConfig::DensityKind::indicator &&
            initial_measure.density_param >= half_extent)
            errs.push_back("initial_measure: indicator radius must be smaller than half_extent");
    } else if (!(atom_mass > 0.0)) {
        errs.push_back("initial_measure: total mass must be positive");
    }

    if (mollifier_levels.empty()) errs.push_back("density: mollifier_levels must be nonempty");
    for (std::size_t i = 0; i < mollifier_levels.size(); ++i) {
        if (mollifier_levels[i] < 1) errs.push_back("density: mollifier levels must be >= 1");
        if (i > 0 && mollifier_levels[i] <= mollifier_levels[i - 1]) {
            errs.push_back("density: mollifier_levels must be strictly increasing");
            break;
        }
    }
    if (comb_points < 1) errs.push_back("density: comb_points must be >= 1");
    if (!(comb_radius > 0.0) || comb_radius >= half_extent)
        errs.push_back("density: comb_radius must lie in (0, half_extent)");

    if (!outputs.csv && !outputs.json) errs.push_back("outputs: need at least one format");
    if (outputs.trace_replicates < 0) errs.push_back("outputs: trace_replicates must be >= 0");

    if (!(validation.tol_scale > 0.0)) errs.push_back("validate: tol_scale must be positive");
    if (!(validation.envelope_scale > 0.0)) errs.push_back("validate: envelope_scale must be positive");
    if (!(validation.replicate_scale > 0.0))
        errs.push_back("validate: replicate_scale must be positive");
    if (validation.cdf_times.empty()) errs.push_back("validate: cdf_times must be nonempty");
    for (double t : validation.cdf_times)
        if (!(t > 0.0) || t > validation.expl_horizon) {
            errs.push_back("validate: cdf_times must lie in (0, expl_horizon]");
            break;
        }
    if (!(validation.expl_horizon > 0.0)) errs.push_back("validate: expl_horizon must be positive");
    if (!(validation.ks_horizon > 0.0)) errs.push_back("validate: ks_horizon must be positive");

    if (!errs.empty()) {
        std::string msg = std::to_string(errs.size()) + " config error(s):";
        for (const std::string& e : errs) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
}

namespace {

std::string point_text(const Point& p, int dim) {
    return dim == 2 ? fmt17(p[0]) + "," + fmt17(p[1]) : fmt17(p[0]);
}

std::string list_text(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ",";
        out += fmt17(vs[i]);
    }
    return out;
}

}  // namespace

std::string ExperimentConfig::canonical() const {
    std::ostringstream out;
    out << "[model]\n";
    out << "gamma = " << fmt17(params.gamma) << "\n";
    out << "dimension = " << dimension << "\n";
    out << "psi = " << (psi_kind == NonlinearitySpec::Kind::power_gamma ? "power" : "linear")
        << "\n";
    out << "\n[grid]\n";
    out << "half_extent = " << fmt17(half_extent) << "\n";
    out << "points_per_axis = " << points_per_axis << "\n";
    out << "\n[solver]\n";
    out << "t_final = " << fmt17(solver.t_final) << "\n";
    out << "t_min = " << fmt17(solver.t_min) << "\n";
    out << "time_steps = " << solver.time_steps << "\n";
    out << "tol = " << fmt17(solver.tol) << "\n";
    out << "max_iters = " << solver.max_iters << "\n";
    out << "\n[initial_measure]\n";
    out << "atoms = ";
    for (std::size_t i = 0; i < initial_measure.atoms.size(); ++i) {
        if (i) out << "; ";
        out << point_text(initial_measure.atoms[i].position, dimension) << ":"
            << fmt17(initial_measure.atoms[i].mass);
    }
    out << "\n";
    out << "density = ";
    switch (initial_measure.density) {
        case MeasureConfig::DensityKind::none: out << "none"; break;
        case MeasureConfig::DensityKind::constant:
            out << "constant:" << fmt17(initial_measure.density_param);
            break;
        case MeasureConfig::DensityKind::gaussian:
            out << "gaussian:" << fmt17(initial_measure.density_param);
            break;
        case MeasureConfig::DensityKind::indicator:
            out << "indicator:" << fmt17(initial_measure.density_param);
            break;
    }
    out << "\n";
    out << "density_scale = " << fmt17(initial_measure.density_scale) << "\n";
    out << "\n[test_function]\n";
    if (test_function.kind == TestFunction::Kind::constant) {
        out << "kind = constant\n";
        out << "level = " << fmt17(test_function.level) << "\n";
    } else {
        out << "kind = bump\n";
        out << "base = " << fmt17(test_function.base) << "\n";
        out << "amplitude = " << fmt17(test_function.amplitude) << "\n";
        out << "width = " << fmt17(test_function.width) << "\n";
        out << "center = " << point_text(test_function.center, dimension) << "\n";
    }
    out << "\n[sim]\n";
    out << "epsilon = " << fmt17(sim.epsilon) << "\n";
    out << "beta = " << (sim.beta_override ? fmt17(*sim.beta_override) : std::string("auto"))
        << "\n";
    out << "horizon = " << fmt17(sim.horizon) << "\n";
    out << "motion_dt = " << fmt17(sim.motion_dt) << "\n";
    out << "n_max = " << (sim.n_max == 0 ? std::string("auto") : std::to_string(sim.n_max)) << "\n";
    out << "replicates = " << sim.replicates << "\n";
    out << "seed = " << sim.seed << "\n";
    out << "record_positions = " << (sim.record_positions ? "true" : "false") << "\n";
    out << "snapshot_times = " << list_text(sim.snapshot_times) << "\n";
    out << "crossing_threshold = " << fmt17(sim.crossing_threshold) << "\n";
    out << "stop_after_crossings = " << (sim.stop_after_crossings ? "true" : "false") << "\n";
    out << "\n[density]\n";
    out << "mollifier_levels = ";
    for (std::size_t i = 0; i < mollifier_levels.size(); ++i) {
        if (i) out << ",";
        out << mollifier_levels[i];
    }
    out << "\n";
    out << "comb_points = " << comb_points << "\n";
    out << "comb_radius = " << fmt17(comb_radius) << "\n";
    out << "\n[outputs]\n";
    out << "directory = " << outputs.directory << "\n";
    out << "formats = ";
    if (outputs.csv) out << "csv";
    if (outputs.csv && outputs.json) out << ",";
    if (outputs.json) out << "json";
    out << "\n";
    out << "trace_replicates = " << outputs.trace_replicates << "\n";
    out << "\n[validate]\n";
    out << "tol_scale = " << fmt17(validation.tol_scale) << "\n";
    out << "envelope_scale = " << fmt17(validation.envelope_scale) << "\n";
    out << "replicate_scale = " << fmt17(validation.replicate_scale) << "\n";
    out << "ks_sweep = " << (validation.ks_sweep ? "true" : "false") << "\n";
    out << "cdf_times = " << list_text(validation.cdf_times) << "\n";
    out << "expl_horizon = " << fmt17(validation.expl_horizon) << "\n";
    out << "ks_horizon = " << fmt17(validation.ks_horizon) << "\n";
    return out.str();
}

}  // namespace sbm
