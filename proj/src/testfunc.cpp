#include "sbm/testfunc.hpp"

#include <cmath>
#include <sstream>

namespace sbm {

TestFunction TestFunction::constant_fn(double level) {
    TestFunction f;
    f.kind = Kind::constant;
    f.level = level;
    return f;
}

TestFunction TestFunction::bump(double base, double amplitude, double width, Point center) {
    TestFunction f;
    f.kind = Kind::gaussian_bump;
    f.base = base;
    f.amplitude = amplitude;
    f.width = width;
    f.center = center;
    return f;
}

double TestFunction::eval(int dim, const Point& x) const {
    if (kind == Kind::constant) return level;
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        double d = x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)];
        r2 += d * d;
    }
    return base + amplitude * std::exp(-r2 / (2.0 * width * width));
}

double TestFunction::inf_value() const {
    if (kind == Kind::constant) return level;
    return amplitude >= 0.0 ? base : base + amplitude;
}

double TestFunction::sup_value() const {
    if (kind == Kind::constant) return level;
    return amplitude >= 0.0 ? base + amplitude : base;
}

double TestFunction::lipschitz_bound() const {
    if (kind == Kind::constant) return 0.0;
    // |grad f| <= |amplitude| * sup_r r/w^2 exp(-r^2/2w^2) = |amplitude| / (w sqrt(e)).
    return std::abs(amplitude) / (width * std::sqrt(std::exp(1.0)));
}

GridField TestFunction::to_field(const GridSpec& spec) const {
    GridField f(spec);
    const std::size_t n = f.values.size();
    for (std::size_t i = 0; i < n; ++i) f.values[i] = eval(spec.dim, spec.node(i));
    return f;
}

std::string TestFunction::validate() const {
    std::ostringstream err;
    if (kind == Kind::constant) {
        if (!(level >= 0.0) || !std::isfinite(level)) err << "test function level must be nonnegative and finite; ";
    } else {
        if (!(width > 0.0) || !std::isfinite(width)) err << "bump width must be positive and finite; ";
        if (!std::isfinite(base) || !std::isfinite(amplitude)) err << "bump base/amplitude must be finite; ";
        if (!(inf_value() >= 0.0)) err << "test function must be nonnegative; ";
    }
    return err.str();
}

}  // namespace sbm
