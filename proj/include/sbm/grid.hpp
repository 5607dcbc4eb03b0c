#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace sbm {

using Point = std::array<double, 2>;  // coordinate [1] unused in dimension 1

// Uniform cell-centered grid on [-half_extent, half_extent]^dim.
// Nodes sit at -L + (k + 1/2) h per axis with h = 2L/n, so no node lies on
// the boundary and none sits exactly at the origin.
struct GridSpec {
    int dim = 1;                // 1 or 2
    double half_extent = 10.0;  // L > 0
    int points_per_axis = 64;   // n >= 8, even

    double spacing() const { return 2.0 * half_extent / points_per_axis; }
    std::size_t node_count() const {
        auto n = static_cast<std::size_t>(points_per_axis);
        return dim == 1 ? n : n * n;
    }
    double coord(int k) const { return -half_extent + (k + 0.5) * spacing(); }
    double cell_volume() const { return dim == 1 ? spacing() : spacing() * spacing(); }

    Point node(std::size_t flat) const;
    bool operator==(const GridSpec&) const = default;

    // Throws std::invalid_argument listing every violated constraint.
    void validate() const;
};

// Scalar field sampled at the nodes of a GridSpec. Dimension-2 data is stored
// row-major with the x index fastest: flat = iy * n + ix.
struct GridField {
    GridSpec spec;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(const GridSpec& s, double fill = 0.0)
        : spec(s), values(s.node_count(), fill) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }

    double integral() const;  // cell_volume * sum of values
    double min_value() const;
    double max_value() const;

    // Multilinear interpolation between cell centers; coordinates beyond the
    // outermost centers clamp to the edge value. p must lie inside the box.
    double interpolate(const Point& p) const;
};

}  // namespace sbm
