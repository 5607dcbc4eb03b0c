#include "sbm/heat.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sbm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW's planner mutates global state; executions of existing plans are safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Squared distance beyond which exp(-r^2/(2t)) < 3e-32; atoms outside this
// window contribute nothing at double precision.
double cutoff_sq(double t) { return 145.0 * t; }

}  // namespace

double heat_kernel(int dim, double t, const Point& x) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("heat_kernel: dim must be 1 or 2");
    if (!(t > 0.0)) throw std::invalid_argument("heat_kernel: t must be positive");
    double r2 = x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0);
    double norm = dim == 1 ? 1.0 / std::sqrt(kTwoPi * t) : 1.0 / (kTwoPi * t);
    return norm * std::exp(-r2 / (2.0 * t));
}

double WeightedNorm::weight(int dim, const Point& x) {
    double r = dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
    double c = dim == 1 ? 0.5 : 1.0 / kTwoPi;
    return c * std::exp(-r);
}

double WeightedNorm::operator()(const GridField& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double w = weight(f.spec.dim, f.spec.node(i)) * std::abs(f[i]);
        acc = kind == Kind::sup ? std::max(acc, w) : acc + w;
    }
    return kind == Kind::sup ? acc : acc * f.spec.cell_volume();
}

double weighted_norm(const GridField& f, WeightedNorm::Kind kind) {
    return WeightedNorm{kind}(f);
}

// Spectral multipliers of the heat kernel on the window torus are separable;
// one axis factor is cached per time step since the Picard sweeps revisit the
// same kernel times every iteration.  The factor is the DFT of the sampled,
// periodized Gaussian rather than samples of exp(-xi^2 t / 2): truncating the
// continuous symbol at the Nyquist frequency leaves a kernel with negative
// side lobes once sqrt(t) drops below the spacing, and a signed kernel breaks
// the monotonicity the Picard iteration relies on.  The sampled kernel is
// positive by construction and normalized so the zero mode is exactly 1:
// constants are fixed points, mass is conserved, and the maximum principle
// holds up to roundoff.  Wrap-around error is the periodization tail
// exp(-(2L - |x|)^2 / (2t)).
struct HeatSemigroup::Impl {
    int dim;
    int n;        // nodes per axis
    int p;        // transform axis length, equal to n
    double h;     // spacing
    std::vector<double> real_buf;
    std::vector<std::complex<double>> spec_buf;
    std::vector<double> kern_buf;                        // axis kernel, length p
    std::vector<std::complex<double>> kern_spec;         // its spectrum
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    fftw_plan kfwd = nullptr;
    std::map<double, std::vector<double>> symbol_cache;  // axis factor, length p/2+1

    fftw_complex* c_buf() { return reinterpret_cast<fftw_complex*>(spec_buf.data()); }

    Impl(const GridSpec& g) : dim(g.dim), n(g.points_per_axis), p(g.points_per_axis), h(g.spacing()) {
        std::size_t real_count = dim == 1 ? p : static_cast<std::size_t>(p) * p;
        std::size_t spec_count = dim == 1 ? p / 2 + 1 : static_cast<std::size_t>(p) * (p / 2 + 1);
        real_buf.resize(real_count);
        spec_buf.resize(spec_count);
        kern_buf.resize(p);
        kern_spec.resize(p / 2 + 1);
        std::lock_guard lock(planner_mutex());
        if (dim == 1) {
            fwd = fftw_plan_dft_r2c_1d(p, real_buf.data(), c_buf(), FFTW_ESTIMATE);
            inv = fftw_plan_dft_c2r_1d(p, c_buf(), real_buf.data(), FFTW_ESTIMATE);
        } else {
            fwd = fftw_plan_dft_r2c_2d(p, p, real_buf.data(), c_buf(), FFTW_ESTIMATE);
            inv = fftw_plan_dft_c2r_2d(p, p, c_buf(), real_buf.data(), FFTW_ESTIMATE);
        }
        kfwd = fftw_plan_dft_r2c_1d(p, kern_buf.data(),
                                    reinterpret_cast<fftw_complex*>(kern_spec.data()),
                                    FFTW_ESTIMATE);
        if (!fwd || !inv || !kfwd) throw std::runtime_error("HeatSemigroup: FFT planning failed");
    }

    ~Impl() {
        std::lock_guard lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (inv) fftw_destroy_plan(inv);
        if (kfwd) fftw_destroy_plan(kfwd);
    }

    const std::vector<double>& symbol(double t) {
        auto it = symbol_cache.find(t);
        if (it != symbol_cache.end()) return it->second;
        double period = p * h;
        // Enough images that the dropped tail sits below exp(-710), i.e. 0.0.
        int m_max = static_cast<int>(std::sqrt(1420.0 * t) / period) + 1;
        for (int i = 0; i < p; ++i) {
            double x = (i <= p / 2 ? i : i - p) * h;  // signed circular offset
            double acc = 0.0;
            for (int m = -m_max; m <= m_max; ++m) {
                double d = x + m * period;
                acc += std::exp(-d * d / (2.0 * t));
            }
            kern_buf[i] = acc;
        }
        fftw_execute(kfwd);
        std::vector<double> s(p / 2 + 1);
        double zero_mode = kern_spec[0].real();
        // The kernel is even, so the spectrum is real up to roundoff.
        for (int k = 0; k <= p / 2; ++k) s[k] = kern_spec[k].real() / zero_mode;
        return symbol_cache.emplace(t, std::move(s)).first->second;
    }
};

HeatSemigroup::HeatSemigroup(const GridSpec& spec) : spec_(spec) {
    spec.validate();
    impl_ = std::make_unique<Impl>(spec);
}

HeatSemigroup::~HeatSemigroup() = default;

// Runs the padded-torus spectral convolution, leaving the result in real_buf.
void HeatSemigroup::convolve_into_buffer(double t, const GridField& f) {
    if (!(t > 0.0)) throw std::invalid_argument("HeatSemigroup: t must be positive");
    if (!(f.spec == spec_)) throw std::invalid_argument("HeatSemigroup: grid mismatch");
    Impl& im = *impl_;
    const auto& sym = im.symbol(t);
    std::copy(f.values.begin(), f.values.end(), im.real_buf.begin());

    if (im.dim == 1) {
        fftw_execute(im.fwd);
        double scale = 1.0 / im.p;
        for (int k = 0; k <= im.p / 2; ++k) im.spec_buf[k] *= sym[k] * scale;
        fftw_execute(im.inv);
        return;
    }

    fftw_execute(im.fwd);
    int cols = im.p / 2 + 1;
    double scale = 1.0 / (static_cast<double>(im.p) * im.p);
    for (int jy = 0; jy < im.p; ++jy) {
        double sy = scale * sym[jy <= im.p / 2 ? jy : im.p - jy];
        for (int k = 0; k < cols; ++k)
            im.spec_buf[static_cast<std::size_t>(jy) * cols + k] *= sy * sym[k];
    }
    fftw_execute(im.inv);
}

GridField HeatSemigroup::apply(double t, const GridField& f) {
    convolve_into_buffer(t, f);
    Impl& im = *impl_;
    GridField out(spec_);
    // Clamp roundoff ripple; the periodized kernel itself is positive.
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(0.0, im.real_buf[i]);
    return out;
}

void HeatSemigroup::apply_scaled_add(double t, const GridField& f, double coeff,
                                     GridField& acc) {
    convolve_into_buffer(t, f);
    Impl& im = *impl_;
    for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] += coeff * std::max(0.0, im.real_buf[i]);
}

GridField HeatSemigroup::apply_measure(double t, const FiniteMeasure& mu) {
    if (!(t > 0.0)) throw std::invalid_argument("HeatSemigroup::apply_measure: t must be positive");
    GridField out = mu.density ? apply(t, *mu.density) : GridField(spec_, 0.0);
    if (mu.atoms.empty()) return out;

    double r2max = cutoff_sq(t);
    if (spec_.dim == 1) {
        // Sorted positions allow a binary-searched window per node.
        std::vector<std::pair<double, double>> sorted;
        sorted.reserve(mu.atoms.size());
        for (const auto& a : mu.atoms)
            if (a.mass > 0.0) sorted.push_back({a.position[0], a.mass});
        std::sort(sorted.begin(), sorted.end());
        double halfwidth = std::sqrt(r2max);
        double norm = 1.0 / std::sqrt(kTwoPi * t);
        for (int k = 0; k < spec_.points_per_axis; ++k) {
            double x = spec_.coord(k);
            auto lo = std::lower_bound(sorted.begin(), sorted.end(),
                                       std::make_pair(x - halfwidth, 0.0));
            double acc = 0.0;
            for (auto it = lo; it != sorted.end() && it->first <= x + halfwidth; ++it) {
                double d = x - it->first;
                acc += it->second * std::exp(-d * d / (2.0 * t));
            }
            out[k] += norm * acc;
        }
        return out;
    }

    double norm = 1.0 / (kTwoPi * t);
    for (std::size_t i = 0; i < out.size(); ++i) {
        Point x = spec_.node(i);
        double acc = 0.0;
        for (const auto& a : mu.atoms) {
            double dx = x[0] - a.position[0];
            double dy = x[1] - a.position[1];
            double r2 = dx * dx + dy * dy;
            if (r2 <= r2max) acc += a.mass * std::exp(-r2 / (2.0 * t));
        }
        out[i] += norm * acc;
    }
    return out;
}

GridField semigroup_field(double t, const GridField& f) {
    HeatSemigroup engine(f.spec);
    return engine.apply(t, f);
}

GridField semigroup_measure(const GridSpec& spec, double t, const FiniteMeasure& mu) {
    HeatSemigroup engine(spec);
    return engine.apply_measure(t, mu);
}

}  // namespace sbm
