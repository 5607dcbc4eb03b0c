#include "sbm/particles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "sbm/sibuya.hpp"

namespace sbm {

double SimConfig::resolved_beta() const {
    if (beta_override) return *beta_override;
    return std::pow(epsilon, 1.0 - params.gamma);
}

std::uint64_t SimConfig::resolved_n_max(std::uint64_t initial_count) const {
    if (n_max > 0) return n_max;
    const std::uint64_t kDefaultFactor = 1000;
    if (initial_count > std::numeric_limits<std::uint64_t>::max() / kDefaultFactor)
        return std::numeric_limits<std::uint64_t>::max();
    return kDefaultFactor * initial_count;
}

void SimConfig::validate() const {
    std::ostringstream err;
    bool gamma_ok = true;
    try {
        params.validate();
    } catch (const std::exception& e) {
        err << e.what() << "; ";
        gamma_ok = false;
    }
    if (dim != 1 && dim != 2) err << "dim must be 1 or 2; ";
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) err << "epsilon must be positive; ";
    if (beta_override && (!(*beta_override >= 0.0) || !std::isfinite(*beta_override)))
        err << "beta override must be finite and nonnegative; ";
    if (!(horizon > 0.0) || !std::isfinite(horizon)) err << "horizon must be positive; ";
    if (!(motion_dt > 0.0) || !std::isfinite(motion_dt)) err << "motion_dt must be positive; ";
    double beta = gamma_ok ? resolved_beta() : 0.0;
    if (beta > 0.0 && motion_dt > 1.0 / (10.0 * beta) * (1.0 + 1e-12))
        err << "motion_dt must be at most 1/(10 beta) so multi-branch steps are negligible; ";
    if (replicates < 1) err << "replicates must be at least 1; ";
    for (double t : snapshot_times)
        if (!(t >= 0.0) || t > horizon * (1.0 + 1e-9) || !std::isfinite(t))
            err << "snapshot times must lie in [0, horizon]; ";
    if (crossing_threshold < 0.0 || !std::isfinite(crossing_threshold))
        err << "crossing_threshold must be nonnegative; ";
    if (crossing_threshold > 0.0 && !crossing_function)
        err << "crossing tracking needs a crossing_function; ";
    if (crossing_function) {
        std::string e = crossing_function->validate();
        if (!e.empty()) err << e;
        if (!(crossing_function->inf_value() > 0.0))
            err << "crossing_function must have a positive infimum; ";
        if (crossing_function->kind != TestFunction::Kind::constant && !record_positions)
            err << "non-constant crossing_function requires record_positions; ";
    }
    std::string msg = err.str();
    if (!msg.empty()) throw std::invalid_argument("SimConfig: " + msg);
}

std::uint64_t initial_particle_count(const FiniteMeasure& x0, double epsilon) {
    double m = x0.total_mass();
    if (!(m > 0.0)) throw std::invalid_argument("simulate: initial measure must have positive mass");
    double n = std::ceil(m / epsilon - 1e-9);
    if (n > 9e15) throw std::invalid_argument("simulate: initial particle count too large");
    return static_cast<std::uint64_t>(std::max(1.0, n));
}

namespace {

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > std::numeric_limits<std::uint64_t>::max() - b
               ? std::numeric_limits<std::uint64_t>::max()
               : a + b;
}

// Largest-remainder split of n particles across atoms, proportional to mass.
std::vector<std::uint64_t> allocate_particles(const FiniteMeasure& x0, std::uint64_t n) {
    double total = x0.total_mass();
    const std::size_t k = x0.atoms.size();
    std::vector<std::uint64_t> counts(k, 0);
    std::vector<std::pair<double, std::size_t>> remainders(k);
    std::uint64_t assigned = 0;
    for (std::size_t j = 0; j < k; ++j) {
        double share = static_cast<double>(n) * x0.atoms[j].mass / total;
        counts[j] = static_cast<std::uint64_t>(share);
        assigned += counts[j];
        remainders[j] = {share - static_cast<double>(counts[j]), j};
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) counts[remainders[i % k].second]++;
    return counts;
}

struct SnapshotSlot {
    std::uint64_t step;
    std::size_t order;
};

// Distinct branch indices in [0, n) by Floyd's sampling; ascending for a fixed
// processing order.
void sample_indices(Rng& rng, std::uint64_t n, std::uint64_t b, std::vector<std::uint64_t>& out) {
    out.clear();
    if (b == 0) return;
    if (b <= 64) {
        for (std::uint64_t j = n - b; j < n; ++j) {
            std::uint64_t t = rng.next_below(j + 1);
            bool dup = std::find(out.begin(), out.end(), t) != out.end();
            out.push_back(dup ? j : t);
        }
    } else {
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(static_cast<std::size_t>(b) * 2);
        for (std::uint64_t j = n - b; j < n; ++j) {
            std::uint64_t t = rng.next_below(j + 1);
            out.push_back(seen.insert(t).second ? t : j);
            if (out.back() == j) seen.insert(j);
        }
    }
    std::sort(out.begin(), out.end());
}

}  // namespace

ParticlePath simulate_one(const FiniteMeasure& x0, const SimConfig& cfg, Rng& rng) {
    const int dim = cfg.dim;
    const double eps = cfg.epsilon;
    const double beta = cfg.resolved_beta();
    const double dt = cfg.motion_dt;
    const SibuyaSampler sibuya(cfg.params);

    ParticlePath path;
    std::uint64_t count = initial_particle_count(x0, eps);
    path.initial_count = count;
    const std::uint64_t n_max = cfg.resolved_n_max(count);

    const bool positions = cfg.record_positions;
    std::vector<double> xs, ys;
    if (positions) {
        auto alloc = allocate_particles(x0, count);
        xs.reserve(static_cast<std::size_t>(count));
        if (dim == 2) ys.reserve(static_cast<std::size_t>(count));
        for (std::size_t j = 0; j < alloc.size(); ++j)
            for (std::uint64_t i = 0; i < alloc[j]; ++i) {
                xs.push_back(x0.atoms[j].position[0]);
                if (dim == 2) ys.push_back(x0.atoms[j].position[1]);
            }
    }

    // Tracking state. For constant f the functional crossing coincides with the
    // mass crossing by construction, so it is checked on counts in both modes.
    const bool tracking = cfg.crossing_threshold > 0.0 && cfg.crossing_function.has_value();
    const bool f_by_count = tracking && cfg.crossing_function->kind == TestFunction::Kind::constant;
    std::uint64_t cross_count = 0;
    double f_target = 0.0;
    if (tracking) {
        cross_count = static_cast<std::uint64_t>(
            std::max(1.0, std::ceil(cfg.crossing_threshold / eps - 1e-9)));
        f_target = cfg.crossing_threshold * cfg.crossing_function->inf_value() / eps;
    }

    const std::uint64_t n_steps =
        static_cast<std::uint64_t>(std::ceil(cfg.horizon / dt - 1e-9));
    auto boundary = [&](std::uint64_t k) {
        return std::min(static_cast<double>(k) * dt, cfg.horizon);
    };

    std::vector<SnapshotSlot> slots;
    slots.reserve(cfg.snapshot_times.size());
    for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
        double t = cfg.snapshot_times[i];
        auto step = static_cast<std::uint64_t>(
            std::clamp(std::llround(t / dt), 0LL, static_cast<long long>(n_steps)));
        slots.push_back({step, i});
    }
    std::sort(slots.begin(), slots.end(), [](const SnapshotSlot& a, const SnapshotSlot& b) {
        if (a.step != b.step) return a.step < b.step;
        return a.order < b.order;
    });

    double sum_f = 0.0;
    if (tracking && !f_by_count) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            sum_f += cfg.crossing_function->eval(dim, {xs[i], dim == 2 ? ys[i] : 0.0});
    }

    std::size_t next_slot = 0;
    auto emit_due = [&](std::uint64_t k) {
        while (next_slot < slots.size() && slots[next_slot].step == k) {
            Snapshot snap;
            snap.time = boundary(k);
            snap.count = count;
            if (positions) {
                snap.xs = xs;
                snap.ys = ys;
            }
            path.snapshots.push_back(std::move(snap));
            ++next_slot;
        }
    };
    auto check_crossings = [&](double t_boundary) {
        if (!tracking) return;
        if (!path.mass_crossing_time && count >= cross_count) path.mass_crossing_time = t_boundary;
        if (!path.f_crossing_time) {
            bool hit = f_by_count ? count >= cross_count : sum_f >= f_target;
            if (hit) path.f_crossing_time = t_boundary;
        }
    };

    emit_due(0);
    check_crossings(0.0);
    path.final_time = 0.0;

    std::vector<std::uint64_t> branchers;
    for (std::uint64_t k = 0; k < n_steps; ++k) {
        const double step_dt = boundary(k + 1) - boundary(k);
        const double q = -std::expm1(-beta * step_dt);
        const double sd = std::sqrt(step_dt);

        if (positions) {
            // Motion first; offspring appended below stay put until next step.
            const std::uint64_t n_pre = count;
            sum_f = 0.0;
            const bool want_f = tracking && !f_by_count;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                xs[i] += sd * rng.next_normal();
                if (dim == 2) ys[i] += sd * rng.next_normal();
                if (want_f)
                    sum_f += cfg.crossing_function->eval(dim, {xs[i], dim == 2 ? ys[i] : 0.0});
            }
            std::uint64_t b = q > 0.0
                                  ? static_cast<std::uint64_t>(
                                        rng.next_binomial(static_cast<long long>(n_pre), q))
                                  : 0;
            sample_indices(rng, n_pre, b, branchers);
            for (std::uint64_t idx : branchers) {
                auto offspring = static_cast<std::uint64_t>(sibuya.sample(rng));
                count = sat_add(count, offspring - 1);
                std::uint64_t append = offspring - 1;
                const std::uint64_t room =
                    n_max > xs.size() ? n_max - xs.size() : 0;  // cap fires this step anyway
                if (append > room) append = room;
                const auto i = static_cast<std::size_t>(idx);
                for (std::uint64_t c = 0; c < append; ++c) {
                    xs.push_back(xs[i]);
                    if (dim == 2) ys.push_back(ys[i]);
                    if (want_f) sum_f += cfg.crossing_function->eval(dim, {xs[i], dim == 2 ? ys[i] : 0.0});
                }
                if (count >= n_max) break;
            }
        } else {
            std::uint64_t b = 0;
            if (q > 0.0) {
                std::uint64_t n_pre = count;
                while (n_pre > 0) {
                    auto chunk = static_cast<long long>(
                        std::min<std::uint64_t>(n_pre, 2000000000ULL));
                    b += static_cast<std::uint64_t>(rng.next_binomial(chunk, q));
                    n_pre -= static_cast<std::uint64_t>(chunk);
                }
            }
            for (std::uint64_t i = 0; i < b; ++i) {
                auto offspring = static_cast<std::uint64_t>(sibuya.sample(rng));
                count = sat_add(count, offspring - 1);
                if (count >= n_max) break;
            }
        }

        const double t_next = boundary(k + 1);
        path.final_time = t_next;
        emit_due(k + 1);
        check_crossings(t_next);
        if (count >= n_max) {
            path.exploded = true;
            path.explosion_time = t_next;
            break;
        }
        if (cfg.stop_after_crossings && tracking && path.mass_crossing_time &&
            path.f_crossing_time)
            break;
    }

    path.final_count = count;
    return path;
}

std::vector<ParticlePath> simulate(const FiniteMeasure& x0, const SimConfig& cfg, int threads) {
    cfg.validate();
    x0.validate(nullptr);
    if (!x0.purely_atomic())
        throw std::invalid_argument("simulate: initial measure must be purely atomic");
    initial_particle_count(x0, cfg.epsilon);  // rejects zero mass up front

    const auto r_total = static_cast<std::size_t>(cfg.replicates);
    std::vector<ParticlePath> paths(r_total);
    auto worker_range = [&](std::atomic<std::uint64_t>& next) {
        for (;;) {
            std::uint64_t r = next.fetch_add(1);
            if (r >= r_total) return;
            Rng rng = Rng::substream(cfg.seed, r);
            paths[static_cast<std::size_t>(r)] = simulate_one(x0, cfg, rng);
        }
    };

    int t = std::clamp<int>(threads, 1, static_cast<int>(std::min<std::size_t>(r_total, 64)));
    if (t <= 1) {
        std::atomic<std::uint64_t> next{0};
        worker_range(next);
        return paths;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i)
        pool.emplace_back([&] {
            try {
                worker_range(next);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return paths;
}

LaplaceEstimate empirical_laplace(const std::vector<ParticlePath>& paths, const TestFunction& f,
                                  double t, const SimConfig& cfg) {
    if (paths.empty()) throw std::invalid_argument("empirical_laplace: no paths");
    std::string ferr = f.validate();
    const bool constant = f.kind == TestFunction::Kind::constant;
    // f == 0 is admitted as the survival diagnostic; other invalid f are not.
    if (!ferr.empty() && !(constant && f.level == 0.0))
        throw std::invalid_argument("empirical_laplace: " + ferr);
    if (t > cfg.horizon * (1.0 + 1e-9))
        throw std::invalid_argument("empirical_laplace: t beyond horizon");

    double sum = 0.0, sumsq = 0.0;
    for (const auto& path : paths) {
        double w;
        if (path.exploded && *path.explosion_time <= t + 1e-12) {
            w = 0.0;
        } else {
            const Snapshot* snap = nullptr;
            for (const auto& s : path.snapshots)
                if (std::abs(s.time - t) <= 0.5 * cfg.motion_dt + 1e-12) {
                    snap = &s;
                    break;
                }
            if (!snap) throw std::invalid_argument("empirical_laplace: no snapshot near t");
            if (constant) {
                w = std::exp(-cfg.epsilon * f.level * static_cast<double>(snap->count));
            } else {
                if (snap->xs.size() != snap->count)
                    throw std::invalid_argument("empirical_laplace: snapshot lacks positions");
                double s_f = 0.0;
                for (std::size_t i = 0; i < snap->xs.size(); ++i)
                    s_f += f.eval(cfg.dim, {snap->xs[i], cfg.dim == 2 ? snap->ys[i] : 0.0});
                w = std::exp(-cfg.epsilon * s_f);
            }
        }
        sum += w;
        sumsq += w * w;
    }
    const auto n = static_cast<double>(paths.size());
    LaplaceEstimate est;
    est.n_paths = paths.size();
    est.estimate = sum / n;
    double var = (sumsq - sum * sum / n) / std::max(1.0, n - 1.0);
    est.std_error = std::sqrt(std::max(0.0, var) / n);
    return est;
}

ExplosionMatchReport empirical_explosion_match(const std::vector<ParticlePath>& paths,
                                               const SimConfig& cfg) {
    if (!(cfg.crossing_threshold > 0.0) || !cfg.crossing_function)
        throw std::invalid_argument(
            "empirical_explosion_match: paths were simulated without crossing tracking");
    ExplosionMatchReport rep;
    rep.n_paths = paths.size();
    const double deadline = 2.0 * cfg.motion_dt * (1.0 - 1e-9);
    for (const auto& p : paths) {
        const bool has_m = p.mass_crossing_time.has_value();
        const bool has_f = p.f_crossing_time.has_value();
        if (!has_m && !has_f) continue;
        rep.n_events++;
        if (has_m && has_f) {
            rep.n_both++;
            double gap = std::abs(*p.mass_crossing_time - *p.f_crossing_time);
            rep.max_gap = std::max(rep.max_gap, gap);
            if (gap < deadline) rep.n_agree++;
        }
    }
    rep.agree_fraction =
        rep.n_events == 0 ? 1.0
                          : static_cast<double>(rep.n_agree) / static_cast<double>(rep.n_events);
    return rep;
}

}  // namespace sbm
