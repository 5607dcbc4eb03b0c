#pragma once

#include <vector>

#include "sbm/grid.hpp"
#include "sbm/measure.hpp"
#include "sbm/particles.hpp"
#include "sbm/picard.hpp"

namespace sbm {

// Ball kernel of radius 1/n, normalized to unit mass.
struct Mollifier {
    int n = 8;
    int dim = 1;

    double radius() const { return 1.0 / n; }
    double normalizer() const;  // 1/Leb(B_{1/n}): n/2 in d=1, n^2/pi in d=2
    void validate() const;
};

// eps * (particles within 1/n of z, closed ball) * normalizer.
double mollified_density(const Snapshot& snapshot, double epsilon, int dim, const Point& z,
                         const Mollifier& moll);

GridField density_field(const Snapshot& snapshot, double epsilon, const GridSpec& spec,
                        const Mollifier& moll);

// N iid uniform points on B_r(0) weighted by Leb(B_r) phi(xi)/N; zero-weight
// points are dropped, so phi == 0 yields the zero measure.
FiniteMeasure dirac_comb(const GridField& phi, long long n_points, double r, Rng& rng);

struct AbsContinuityLevel {
    int n = 0;
    double estimate = 0.0;       // mean of 1_{t<T} exp(-h^d sum eta f)
    double std_error = 0.0;
    double smoothing_gap = 0.0;  // mean |exp(-mollified) - exp(-exact)| pairing gap
};

struct AbsContinuityReport {
    double pde_value = 0.0;          // exp(-<X0, V_t f>)
    double exact_estimate = 0.0;     // mean of 1_{t<T} exp(-eps sum f(xi))
    double exact_std_error = 0.0;
    double survival_fraction = 0.0;  // mean of 1_{t<T}
    std::vector<AbsContinuityLevel> levels;
};

// Monte Carlo check of the absolute-continuity Laplace identity: the density
// pairing, smoothed at several mollifier levels, against the PDE functional.
// pde must hold V_t f on spec with final time t; paths must carry positions at t.
AbsContinuityReport abs_continuity_diagnostic(const std::vector<ParticlePath>& paths,
                                              const SimConfig& cfg, const TestFunction& f,
                                              double t, const GridSpec& spec,
                                              const std::vector<int>& moll_levels,
                                              const FiniteMeasure& x0,
                                              const PicardSolution& pde);

}  // namespace sbm
