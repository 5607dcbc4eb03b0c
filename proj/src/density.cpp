#include "sbm/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sbm {

double Mollifier::normalizer() const {
    return dim == 1 ? static_cast<double>(n) / 2.0
                    : static_cast<double>(n) * static_cast<double>(n) / std::numbers::pi;
}

void Mollifier::validate() const {
    if (n < 1) throw std::invalid_argument("Mollifier: n must be at least 1");
    if (dim != 1 && dim != 2) throw std::invalid_argument("Mollifier: dim must be 1 or 2");
}

double mollified_density(const Snapshot& snapshot, double epsilon, int dim, const Point& z,
                         const Mollifier& moll) {
    moll.validate();
    if (moll.dim != dim) throw std::invalid_argument("mollified_density: dimension mismatch");
    const double r = moll.radius();
    const double r2 = r * r;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < snapshot.xs.size(); ++i) {
        double dx = snapshot.xs[i] - z[0];
        if (dim == 1) {
            if (dx * dx <= r2) ++cnt;
        } else {
            double dy = snapshot.ys[i] - z[1];
            if (dx * dx + dy * dy <= r2) ++cnt;
        }
    }
    return epsilon * static_cast<double>(cnt) * moll.normalizer();
}

namespace {

// Particles sorted by x; each node counts the closed-ball window by binary
// search (d=1) or an x-strip scan (d=2).
struct SortedCloud {
    std::vector<double> xs;
    std::vector<double> ys;  // permuted alongside xs in d=2

    SortedCloud(const Snapshot& snap, int dim) {
        if (dim == 1) {
            xs = snap.xs;
            std::sort(xs.begin(), xs.end());
        } else {
            std::vector<std::size_t> order(snap.xs.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return snap.xs[a] < snap.xs[b];
            });
            xs.reserve(order.size());
            ys.reserve(order.size());
            for (std::size_t i : order) {
                xs.push_back(snap.xs[i]);
                ys.push_back(snap.ys[i]);
            }
        }
    }

    std::size_t count_ball(int dim, const Point& z, double r) const {
        auto lo = std::lower_bound(xs.begin(), xs.end(), z[0] - r);
        auto hi = std::upper_bound(xs.begin(), xs.end(), z[0] + r);
        if (dim == 1) return static_cast<std::size_t>(hi - lo);
        const double r2 = r * r;
        std::size_t cnt = 0;
        for (auto it = lo; it != hi; ++it) {
            double dx = *it - z[0];
            double dy = ys[static_cast<std::size_t>(it - xs.begin())] - z[1];
            if (dx * dx + dy * dy <= r2) ++cnt;
        }
        return cnt;
    }
};

}  // namespace

GridField density_field(const Snapshot& snapshot, double epsilon, const GridSpec& spec,
                        const Mollifier& moll) {
    moll.validate();
    if (moll.dim != spec.dim) throw std::invalid_argument("density_field: dimension mismatch");
    GridField field(spec);
    const SortedCloud cloud(snapshot, spec.dim);
    const double r = moll.radius();
    const double norm = epsilon * moll.normalizer();
    for (std::size_t i = 0; i < field.values.size(); ++i)
        field.values[i] = norm * static_cast<double>(cloud.count_ball(spec.dim, spec.node(i), r));
    return field;
}

FiniteMeasure dirac_comb(const GridField& phi, long long n_points, double r, Rng& rng) {
    if (n_points <= 0) throw std::invalid_argument("dirac_comb: need at least one point");
    if (!(r > 0.0) || r > phi.spec.half_extent)
        throw std::invalid_argument("dirac_comb: radius must lie in (0, half_extent]");
    for (double v : phi.values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("dirac_comb: phi must be nonnegative and finite");

    const int dim = phi.spec.dim;
    const double leb = dim == 1 ? 2.0 * r : std::numbers::pi * r * r;
    const double w = leb / static_cast<double>(n_points);
    FiniteMeasure comb;
    comb.atoms.reserve(static_cast<std::size_t>(n_points));
    for (long long i = 0; i < n_points; ++i) {
        Point p{0.0, 0.0};
        if (dim == 1) {
            p[0] = r * (2.0 * rng.next_unit() - 1.0);
        } else {
            double rad = r * std::sqrt(rng.next_unit());
            double ang = 2.0 * std::numbers::pi * rng.next_unit();
            p[0] = rad * std::cos(ang);
            p[1] = rad * std::sin(ang);
        }
        double mass = w * phi.interpolate(p);
        if (mass > 0.0) comb.atoms.push_back({p, mass});
    }
    return comb;
}

AbsContinuityReport abs_continuity_diagnostic(const std::vector<ParticlePath>& paths,
                                              const SimConfig& cfg, const TestFunction& f,
                                              double t, const GridSpec& spec,
                                              const std::vector<int>& moll_levels,
                                              const FiniteMeasure& x0,
                                              const PicardSolution& pde) {
    if (paths.empty()) throw std::invalid_argument("abs_continuity_diagnostic: no paths");
    if (moll_levels.empty())
        throw std::invalid_argument("abs_continuity_diagnostic: no mollifier levels");
    if (!(pde.grid == spec) || std::abs(pde.times.back() - t) > 1e-9 * std::max(1.0, t))
        throw std::invalid_argument(
            "abs_continuity_diagnostic: PDE solution does not match grid or time");
    if (spec.dim != cfg.dim)
        throw std::invalid_argument("abs_continuity_diagnostic: dimension mismatch");

    AbsContinuityReport rep;
    rep.pde_value = laplace_functional(x0, pde);

    const GridField f_field = f.to_field(spec);
    const double cell = spec.cell_volume();
    const std::size_t n_levels = moll_levels.size();
    std::vector<double> sum(n_levels, 0.0), sumsq(n_levels, 0.0), gap(n_levels, 0.0);
    double exact_sum = 0.0, exact_sumsq = 0.0, survivors = 0.0;

    for (const auto& path : paths) {
        if (path.exploded && *path.explosion_time <= t + 1e-12) continue;  // all terms 0
        const Snapshot* snap = nullptr;
        for (const auto& s : path.snapshots)
            if (std::abs(s.time - t) <= 0.5 * cfg.motion_dt + 1e-12) {
                snap = &s;
                break;
            }
        if (!snap || snap->xs.size() != snap->count)
            throw std::invalid_argument(
                "abs_continuity_diagnostic: paths lack a position snapshot at t");
        survivors += 1.0;

        double pairing_exact = 0.0;
        for (std::size_t i = 0; i < snap->xs.size(); ++i)
            pairing_exact +=
                f.eval(spec.dim, {snap->xs[i], spec.dim == 2 ? snap->ys[i] : 0.0});
        const double w_exact = std::exp(-cfg.epsilon * pairing_exact);
        exact_sum += w_exact;
        exact_sumsq += w_exact * w_exact;

        const SortedCloud cloud(*snap, spec.dim);
        for (std::size_t l = 0; l < n_levels; ++l) {
            Mollifier moll{moll_levels[l], spec.dim};
            moll.validate();
            const double norm = cfg.epsilon * moll.normalizer();
            const double r = moll.radius();
            double pairing = 0.0;
            for (std::size_t i = 0; i < f_field.values.size(); ++i) {
                auto cnt = cloud.count_ball(spec.dim, spec.node(i), r);
                if (cnt > 0) pairing += f_field.values[i] * static_cast<double>(cnt);
            }
            pairing *= cell * norm;
            const double w = std::exp(-pairing);
            sum[l] += w;
            sumsq[l] += w * w;
            gap[l] += std::abs(w - w_exact);
        }
    }

    const auto n = static_cast<double>(paths.size());
    rep.survival_fraction = survivors / n;
    rep.exact_estimate = exact_sum / n;
    double var = (exact_sumsq - exact_sum * exact_sum / n) / std::max(1.0, n - 1.0);
    rep.exact_std_error = std::sqrt(std::max(0.0, var) / n);
    for (std::size_t l = 0; l < n_levels; ++l) {
        AbsContinuityLevel level;
        level.n = moll_levels[l];
        level.estimate = sum[l] / n;
        double v = (sumsq[l] - sum[l] * sum[l] / n) / std::max(1.0, n - 1.0);
        level.std_error = std::sqrt(std::max(0.0, v) / n);
        level.smoothing_gap = gap[l] / n;
        rep.levels.push_back(level);
    }
    return rep;
}

}  // namespace sbm
