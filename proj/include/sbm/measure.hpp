#pragma once

#include <optional>
#include <vector>

#include "sbm/grid.hpp"

namespace sbm {

struct Atom {
    Point position{0.0, 0.0};
    double mass = 0.0;  // >= 0
};

// Finite measure on R^dim: a list of point masses plus an optional absolutely
// continuous part sampled on a grid. The zero measure is representable; the
// solver rejects it separately because the log-Laplace equation takes initial
// data in M_F minus the zero measure.
struct FiniteMeasure {
    std::vector<Atom> atoms;
    std::optional<GridField> density;  // nonnegative when present

    double total_mass() const;
    bool is_zero() const { return total_mass() == 0.0; }
    bool purely_atomic() const { return !density.has_value(); }

    static FiniteMeasure point_mass(Point position, double mass);

    // Checks mass signs, density nonnegativity, and (when a grid is given)
    // that every atom lies strictly inside the box. Throws std::invalid_argument
    // listing every violation.
    void validate(const GridSpec* grid = nullptr) const;
};

// Structural domination test: nu >= mu holds when every atom position of mu
// carries at least as much nu-atom mass and the density parts are ordered
// nodewise. Sufficient, not necessary; used to vet comparison inputs.
bool dominates_structurally(const FiniteMeasure& mu, const FiniteMeasure& nu);

// Convex combination lambda*mu + (1-lambda)*nu, lambda in [0,1].
FiniteMeasure mix_measures(const FiniteMeasure& mu, const FiniteMeasure& nu, double lambda);

}  // namespace sbm
