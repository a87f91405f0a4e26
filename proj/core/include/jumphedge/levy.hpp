#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

namespace jumphedge::model {

struct LevyAtom {
    double mark;    // jump mark z, nonzero
    double weight;  // intensity per unit time, positive
};

// Finite-activity Levy measure as a finite list of atoms. Continuous jump
// densities are quadratured into atoms at ingestion (see from_density),
// which keeps every jump integral downstream an exact finite sum.
class LevyMeasure {
public:
    LevyMeasure() = default;  // no jumps
    explicit LevyMeasure(std::vector<LevyAtom> atoms);

    // Gauss-Legendre quadrature of an intensity density over [z_min, z_max].
    // The interval must not contain 0.
    static LevyMeasure from_density(const std::function<double(double)>& density, double z_min,
                                    double z_max, int n_nodes);

    const std::vector<LevyAtom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    double total_mass() const;

    // Same atoms with weights scaled by factors (one per atom); used for
    // tilted measures where the compensator becomes (1 - theta) * vartheta.
    LevyMeasure scaled(const std::vector<double>& factors) const;

    nlohmann::ordered_json descriptor() const;

private:
    std::vector<LevyAtom> atoms_;
};

// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace jumphedge::model
