#pragma once

#include <string>

#include "sbm/grid.hpp"

namespace sbm {

// Bounded nonnegative test function f used in mass functionals <X_t, f>.
// Crossing detection additionally needs inf f > 0; SimConfig enforces that.
struct TestFunction {
    enum class Kind { constant, gaussian_bump };

    Kind kind = Kind::constant;
    double level = 1.0;      // constant: f == level
    double base = 1.0;       // bump: f = base + amplitude * exp(-|x-center|^2 / (2 width^2))
    double amplitude = 0.0;
    double width = 1.0;
    Point center{0.0, 0.0};

    static TestFunction constant_fn(double level);
    static TestFunction bump(double base, double amplitude, double width, Point center);

    double eval(int dim, const Point& x) const;
    // Infimum over all of R^d, not just the grid box.
    double inf_value() const;
    double sup_value() const;
    double lipschitz_bound() const;

    GridField to_field(const GridSpec& spec) const;
    std::string validate() const;
};

}  // namespace sbm
