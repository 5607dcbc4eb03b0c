#include "sbm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sbm {

void GridSpec::validate() const {
    std::string errors;
    if (dim != 1 && dim != 2) errors += "dim must be 1 or 2; ";
    if (!(half_extent > 0.0) || !std::isfinite(half_extent))
        errors += "half_extent must be positive and finite; ";
    if (points_per_axis < 8) errors += "points_per_axis must be at least 8; ";
    if (points_per_axis % 2 != 0) errors += "points_per_axis must be even; ";
    if (!errors.empty()) throw std::invalid_argument("GridSpec: " + errors);
}

Point GridSpec::node(std::size_t flat) const {
    if (dim == 1) return {coord(static_cast<int>(flat)), 0.0};
    auto n = static_cast<std::size_t>(points_per_axis);
    return {coord(static_cast<int>(flat % n)), coord(static_cast<int>(flat / n))};
}

double GridField::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * spec.cell_volume();
}

double GridField::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double GridField::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

namespace {

// Index of the cell center at or below x, clamped so that both i and i+1 are
// valid node indices; theta is the interpolation weight toward i+1.
void bracket(const GridSpec& g, double x, int& i, double& theta) {
    double u = (x + g.half_extent) / g.spacing() - 0.5;
    double fl = std::floor(u);
    i = static_cast<int>(fl);
    theta = u - fl;
    if (i < 0) { i = 0; theta = 0.0; }
    if (i > g.points_per_axis - 2) { i = g.points_per_axis - 2; theta = 1.0; }
}

}  // namespace

double GridField::interpolate(const Point& p) const {
    int ix; double tx;
    bracket(spec, p[0], ix, tx);
    if (spec.dim == 1)
        return (1.0 - tx) * values[ix] + tx * values[ix + 1];
    int iy; double ty;
    bracket(spec, p[1], iy, ty);
    auto n = static_cast<std::size_t>(spec.points_per_axis);
    auto at = [&](int jx, int jy) { return values[static_cast<std::size_t>(jy) * n + jx]; };
    double lo = (1.0 - tx) * at(ix, iy) + tx * at(ix + 1, iy);
    double hi = (1.0 - tx) * at(ix, iy + 1) + tx * at(ix + 1, iy + 1);
    return (1.0 - ty) * lo + ty * hi;
}

}  // namespace sbm
