#include "jumphedge/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jumphedge/errors.hpp"

namespace jumphedge::sim {

namespace {
std::size_t segment_index(const std::vector<double>& breakpoints, double t) {
    return std::upper_bound(breakpoints.begin(), breakpoints.end(), t) - breakpoints.begin();
}
}  // namespace

MeasureChange MeasureChange::reference() {
    MeasureChange mc;
    mc.reference_ = true;
    mc.tag_ = FamilyTag::Reference;
    mc.psi_values_ = {0.0};
    mc.theta_rows_ = {{}};
    mc.descriptor_ = {{"kind", "reference"}};
    return mc;
}

MeasureChange MeasureChange::constants(double psi, std::vector<double> theta_per_atom,
                                       FamilyTag tag) {
    for (double th : theta_per_atom)
        if (!(th < 1.0)) throw ConfigError("measure change: theta must be < 1");
    MeasureChange mc;
    mc.tag_ = tag;
    mc.psi_values_ = {psi};
    mc.theta_floor_ = theta_per_atom;
    mc.descriptor_ = {{"kind", "constants"}, {"psi", psi}, {"theta", theta_per_atom}};
    mc.theta_rows_ = {std::move(theta_per_atom)};
    mc.reference_ = (psi == 0.0) &&
                    std::all_of(mc.theta_rows_[0].begin(), mc.theta_rows_[0].end(),
                                [](double v) { return v == 0.0; });
    return mc;
}

MeasureChange MeasureChange::piecewise(std::vector<double> breakpoints,
                                       std::vector<double> psi_values,
                                       std::vector<std::vector<double>> theta_rows,
                                       FamilyTag tag) {
    if (psi_values.size() != breakpoints.size() + 1 || theta_rows.size() != psi_values.size())
        throw ConfigError("measure change: need one psi/theta row per segment");
    const std::size_t n_atoms = theta_rows.front().size();
    std::vector<double> floor(n_atoms, 1.0);
    for (const auto& row : theta_rows) {
        if (row.size() != n_atoms) throw ConfigError("measure change: ragged theta rows");
        for (std::size_t a = 0; a < n_atoms; ++a) {
            if (!(row[a] < 1.0)) throw ConfigError("measure change: theta must be < 1");
            floor[a] = std::min(floor[a], row[a]);
        }
    }
    MeasureChange mc;
    mc.tag_ = tag;
    mc.descriptor_ = {{"kind", "piecewise"},
                      {"breakpoints", breakpoints},
                      {"psi", psi_values},
                      {"theta", theta_rows}};
    mc.breakpoints_ = std::move(breakpoints);
    mc.psi_values_ = std::move(psi_values);
    mc.theta_rows_ = std::move(theta_rows);
    mc.theta_floor_ = std::move(floor);
    return mc;
}

MeasureChange MeasureChange::custom(std::string name, PsiEval psi, ThetaEval theta,
                                    std::vector<double> theta_floor_per_atom, FamilyTag tag) {
    if (!psi || !theta) throw ConfigError("measure change: psi and theta evaluators required");
    MeasureChange mc;
    mc.tag_ = tag;
    mc.state_dependent_ = true;
    mc.psi_ = std::move(psi);
    mc.theta_ = std::move(theta);
    mc.theta_floor_ = std::move(theta_floor_per_atom);
    mc.descriptor_ = {{"kind", "custom"}, {"name", name}};
    return mc;
}

MeasureChange MeasureChange::solve_psi(const model::MisspecifiedModel& mis,
                                       std::vector<double> theta_per_atom, double t_ref,
                                       double s_ref, FamilyTag tag) {
    if (theta_per_atom.size() != mis.levy.size())
        throw ConfigError("measure change: one theta per atom required");
    const double g = mis.gamma(t_ref, s_ref, 0.0);
    double jump_part = 0.0;
    const auto& atoms = mis.levy.atoms();
    for (std::size_t a = 0; a < atoms.size(); ++a)
        jump_part += mis.gamma_tilde(t_ref, s_ref, atoms[a].mark) * theta_per_atom[a] *
                     atoms[a].weight;
    double psi = 0.0;
    if (g != 0.0) {
        psi = -jump_part / g;
    } else if (std::abs(jump_part) > 1e-12) {
        throw ConfigError("measure change: gamma is zero but the jump part of the martingale "
                          "condition is nonzero; no constant psi exists");
    }
    return constants(psi, std::move(theta_per_atom), tag);
}

double MeasureChange::psi(double t, double s) const {
    if (state_dependent_) return psi_(t, s);
    return psi_values_[segment_index(breakpoints_, t)];
}

double MeasureChange::theta(double t, double s, std::size_t atom_index, double z) const {
    if (state_dependent_) return theta_(t, s, z);
    const auto& row = theta_rows_[segment_index(breakpoints_, t)];
    if (atom_index >= row.size())
        throw ConfigError("measure change: atom index out of range for theta");
    return row[atom_index];
}

bool MeasureChange::psi_is_zero() const {
    if (state_dependent_) return false;
    return std::all_of(psi_values_.begin(), psi_values_.end(),
                       [](double v) { return v == 0.0; });
}

double MeasureChange::max_residual(const model::MisspecifiedModel& mis,
                                   const model::ValidationGrid& grid) const {
    if (!state_dependent_ && theta_rows_[0].size() != mis.levy.size() && !reference_)
        throw ConfigError("measure change: theta arity does not match the model's atoms");
    double worst = 0.0;
    const auto& atoms = mis.levy.atoms();
    for (int i = 0; i < grid.n_times; ++i) {
        const double t = grid.t_max * i / (grid.n_times - 1);
        for (int j = 0; j < grid.n_prices; ++j) {
            const double s = grid.s_min + (grid.s_max - grid.s_min) * j / (grid.n_prices - 1);
            double res = mis.gamma(t, s, 0.0) * psi(t, s);
            for (std::size_t a = 0; a < atoms.size(); ++a)
                res += mis.gamma_tilde(t, s, atoms[a].mark) * theta(t, s, a, atoms[a].mark) *
                       atoms[a].weight;
            worst = std::max(worst, std::abs(res));
        }
    }
    return worst;
}

bool MeasureChange::theta_nonnegative(const model::MisspecifiedModel& mis,
                                      const model::ValidationGrid& grid) const {
    const auto& atoms = mis.levy.atoms();
    if (!state_dependent_) {
        for (const auto& row : theta_rows_)
            for (double th : row)
                if (th < 0.0) return false;
        return true;
    }
    for (int i = 0; i < grid.n_times; ++i) {
        const double t = grid.t_max * i / (grid.n_times - 1);
        for (int j = 0; j < grid.n_prices; ++j) {
            const double s = grid.s_min + (grid.s_max - grid.s_min) * j / (grid.n_prices - 1);
            for (std::size_t a = 0; a < atoms.size(); ++a)
                if (theta(t, s, a, atoms[a].mark) < 0.0) return false;
        }
    }
    return true;
}

double MeasureChange::psi_summary() const {
    if (state_dependent_) return psi_(0.0, 1.0);
    return psi_values_[0];
}

std::vector<double> MeasureChange::theta_summary() const {
    if (state_dependent_) return theta_floor_;
    return theta_rows_[0];
}

std::string MeasureChange::label() const {
    if (reference_) return "P";
    std::ostringstream os;
    os << "Q(psi=" << psi_summary() << ",theta=[";
    const auto th = theta_summary();
    for (std::size_t i = 0; i < th.size(); ++i) os << (i ? "," : "") << th[i];
    os << "])";
    return os.str();
}

}  // namespace jumphedge::sim
