#include "sbm/measure.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace sbm {

double FiniteMeasure::total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.mass;
    if (density) m += density->integral();
    return m;
}

FiniteMeasure FiniteMeasure::point_mass(Point position, double mass) {
    FiniteMeasure mu;
    mu.atoms.push_back({position, mass});
    return mu;
}

void FiniteMeasure::validate(const GridSpec* grid) const {
    std::string errors;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto& a = atoms[i];
        if (!(a.mass >= 0.0) || !std::isfinite(a.mass))
            errors += "atom " + std::to_string(i) + " has invalid mass; ";
        if (grid) {
            double L = grid->half_extent;
            bool inside = std::abs(a.position[0]) < L &&
                          (grid->dim == 1 || std::abs(a.position[1]) < L);
            if (!inside)
                errors += "atom " + std::to_string(i) + " lies outside the grid box; ";
        }
    }
    if (density) {
        if (grid && !(density->spec == *grid))
            errors += "density grid does not match the working grid; ";
        for (double v : density->values)
            if (!(v >= 0.0) || !std::isfinite(v)) {
                errors += "density has a negative or non-finite node; ";
                break;
            }
    }
    if (!std::isfinite(total_mass())) errors += "total mass is not finite; ";
    if (!errors.empty()) throw std::invalid_argument("FiniteMeasure: " + errors);
}

bool dominates_structurally(const FiniteMeasure& mu, const FiniteMeasure& nu) {
    std::map<std::pair<double, double>, double> mass_mu, mass_nu;
    for (const auto& a : mu.atoms) mass_mu[{a.position[0], a.position[1]}] += a.mass;
    for (const auto& a : nu.atoms) mass_nu[{a.position[0], a.position[1]}] += a.mass;
    for (const auto& [pos, m] : mass_mu) {
        auto it = mass_nu.find(pos);
        if (m > 0.0 && (it == mass_nu.end() || it->second < m)) return false;
    }
    if (mu.density) {
        if (!nu.density || !(nu.density->spec == mu.density->spec)) return mu.density->max_value() == 0.0;
        for (std::size_t i = 0; i < mu.density->size(); ++i)
            if ((*mu.density)[i] > (*nu.density)[i]) return false;
    }
    return true;
}

FiniteMeasure mix_measures(const FiniteMeasure& mu, const FiniteMeasure& nu, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("mix_measures: lambda must lie in [0,1]");
    FiniteMeasure out;
    for (const auto& a : mu.atoms)
        if (a.mass > 0.0) out.atoms.push_back({a.position, lambda * a.mass});
    for (const auto& a : nu.atoms)
        if (a.mass > 0.0) out.atoms.push_back({a.position, (1.0 - lambda) * a.mass});
    if (mu.density || nu.density) {
        const GridSpec& spec = mu.density ? mu.density->spec : nu.density->spec;
        if (mu.density && nu.density && !(mu.density->spec == nu.density->spec))
            throw std::invalid_argument("mix_measures: density grids differ");
        GridField d(spec, 0.0);
        for (std::size_t i = 0; i < d.size(); ++i) {
            double v = 0.0;
            if (mu.density) v += lambda * (*mu.density)[i];
            if (nu.density) v += (1.0 - lambda) * (*nu.density)[i];
            d[i] = v;
        }
        out.density = std::move(d);
    }
    return out;
}

}  // namespace sbm
