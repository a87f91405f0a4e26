#include "jumphedge/levy.hpp"

#include <cmath>
#include <set>

#include "jumphedge/errors.hpp"

namespace jumphedge::model {

LevyMeasure::LevyMeasure(std::vector<LevyAtom> atoms) : atoms_(std::move(atoms)) {
    std::set<double> marks;
    for (const auto& a : atoms_) {
        if (a.mark == 0.0 || !std::isfinite(a.mark))
            throw ConfigError("levy measure: atom marks must be nonzero and finite");
        if (!(a.weight > 0.0) || !std::isfinite(a.weight))
            throw ConfigError("levy measure: atom weights must be positive and finite");
        if (!marks.insert(a.mark).second)
            throw ConfigError("levy measure: atom marks must be distinct");
    }
}

double LevyMeasure::total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.weight;
    return m;
}

LevyMeasure LevyMeasure::scaled(const std::vector<double>& factors) const {
    if (factors.size() != atoms_.size())
        throw ConfigError("levy measure: one scale factor per atom required");
    std::vector<LevyAtom> out;
    out.reserve(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const double w = atoms_[i].weight * factors[i];
        if (w < 0.0) throw ConfigError("levy measure: scaled weight is negative");
        if (w > 0.0) out.push_back({atoms_[i].mark, w});
    }
    return LevyMeasure(std::move(out));
}

nlohmann::ordered_json LevyMeasure::descriptor() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& a : atoms_) arr.push_back({{"z", a.mark}, {"w", a.weight}});
    return {{"atoms", arr}};
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration from the Chebyshev initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

LevyMeasure LevyMeasure::from_density(const std::function<double(double)>& density, double z_min,
                                      double z_max, int n_nodes) {
    if (!(z_min < z_max)) throw ConfigError("levy from_density: z_min must be < z_max");
    if (z_min <= 0.0 && z_max >= 0.0)
        throw ConfigError("levy from_density: interval must not contain 0");
    std::vector<double> x, w;
    gauss_legendre(n_nodes, x, w);
    const double half = 0.5 * (z_max - z_min);
    const double mid = 0.5 * (z_max + z_min);
    std::vector<LevyAtom> atoms;
    atoms.reserve(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double z = mid + half * x[i];
        const double weight = half * w[i] * density(z);
        if (weight < 0.0) throw ConfigError("levy from_density: density is negative");
        if (weight > 0.0) atoms.push_back({z, weight});
    }
    return LevyMeasure(std::move(atoms));
}

}  // namespace jumphedge::model
