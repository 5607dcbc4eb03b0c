#pragma once

#include <map>
#include <memory>
#include <vector>

#include "sbm/grid.hpp"
#include "sbm/measure.hpp"

namespace sbm {

// Gaussian transition density p_t(x) = (2 pi t)^{-dim/2} exp(-|x|^2 / (2t)).
// Requires t > 0.
double heat_kernel(int dim, double t, const Point& x);

// Weighted norms against w(x) = C_w exp(-|x|), normalized so that w integrates
// to one over R^dim (C_w = 1/2 in dimension 1, 1/(2 pi) in dimension 2).
struct WeightedNorm {
    enum class Kind { l1, sup };
    Kind kind = Kind::sup;

    static double weight(int dim, const Point& x);
    double operator()(const GridField& f) const;
};

// Discrete heat semigroup on a fixed grid. Fields are extended by zero onto a
// torus of twice the side length and convolved spectrally with the heat kernel
// periodized to that torus, which keeps the discrete kernel a probability
// kernel for every t > 0: mass on the torus is preserved exactly, positivity
// and the max bound hold, and S_t S_s = S_{t+s} to machine precision. Mass
// only leaks through the result window, i.e. by kernel tail truncation.
//
// Atoms are always evaluated through the closed-form kernel, never binned.
//
// Instances hold FFT state and are not safe for concurrent use; distinct
// instances are independent.
class HeatSemigroup {
  public:
    explicit HeatSemigroup(const GridSpec& spec);
    ~HeatSemigroup();
    HeatSemigroup(const HeatSemigroup&) = delete;
    HeatSemigroup& operator=(const HeatSemigroup&) = delete;

    const GridSpec& grid() const { return spec_; }

    // (S_t f)(x_k) for every node. Requires t > 0; tiny negative convolution
    // round-off is clamped to zero.
    GridField apply(double t, const GridField& f);

    // acc += coeff * (S_t f), coeff > 0; allocation-free inner-loop form.
    void apply_scaled_add(double t, const GridField& f, double coeff, GridField& acc);

    // (S_t mu)(x_k): atoms via the closed-form Gaussian mixture, the density
    // part via apply().
    GridField apply_measure(double t, const FiniteMeasure& mu);

  private:
    struct Impl;
    void convolve_into_buffer(double t, const GridField& f);
    GridSpec spec_;
    std::unique_ptr<Impl> impl_;
};

// One-shot conveniences for tests and small callers; construct a transient
// engine per call.
GridField semigroup_field(double t, const GridField& f);
GridField semigroup_measure(const GridSpec& spec, double t, const FiniteMeasure& mu);

double weighted_norm(const GridField& f, WeightedNorm::Kind kind);

}  // namespace sbm
