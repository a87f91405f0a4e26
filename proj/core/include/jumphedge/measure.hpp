#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jumphedge/model.hpp"

namespace jumphedge::sim {

enum class FamilyTag { Reference, GoodDeal, Ball, Explicit };

// An equivalent-martingale-measure candidate (psi, theta): psi shifts the
// Brownian drift, theta scales the jump compensator to (1 - theta) * vartheta.
// Membership requires the martingale condition
//     gamma * psi + sum_atoms gamma_tilde * theta * w = 0
// which max_residual audits on a sampling grid. theta entries are aligned
// with the model's atom order.
class MeasureChange {
public:
    using PsiEval = std::function<double(double t, double s)>;
    using ThetaEval = std::function<double(double t, double s, double z)>;

    static MeasureChange reference();

    // Constants in (t, s): one theta per atom.
    static MeasureChange constants(double psi, std::vector<double> theta_per_atom,
                                   FamilyTag tag = FamilyTag::Explicit);

    // Piecewise-constant in t: shared breakpoints, one value row per segment.
    static MeasureChange piecewise(std::vector<double> breakpoints, std::vector<double> psi_values,
                                   std::vector<std::vector<double>> theta_rows,
                                   FamilyTag tag = FamilyTag::Explicit);

    // State-dependent tilts; theta_floor_per_atom must lower-bound theta over
    // the region of interest (it sets the thinning proposal intensity).
    static MeasureChange custom(std::string name, PsiEval psi, ThetaEval theta,
                                std::vector<double> theta_floor_per_atom,
                                FamilyTag tag = FamilyTag::Explicit);

    // Solves psi from the martingale condition for constant thetas, with
    // gamma and gamma_tilde evaluated at (t_ref, s_ref).
    static MeasureChange solve_psi(const model::MisspecifiedModel& mis,
                                   std::vector<double> theta_per_atom, double t_ref, double s_ref,
                                   FamilyTag tag = FamilyTag::Explicit);

    double psi(double t, double s) const;
    double theta(double t, double s, std::size_t atom_index, double z) const;

    bool is_reference() const { return reference_; }
    bool state_dependent() const { return state_dependent_; }
    bool psi_is_zero() const;
    std::size_t n_atoms() const { return theta_floor_.size(); }
    double theta_floor(std::size_t atom_index) const { return theta_floor_[atom_index]; }
    FamilyTag tag() const { return tag_; }

    // max over the grid and atoms of |gamma psi + sum gamma_tilde theta w|
    double max_residual(const model::MisspecifiedModel& mis,
                        const model::ValidationGrid& grid) const;

    // Q0 membership: theta >= 0 everywhere sampled (and thetas < 1).
    bool theta_nonnegative(const model::MisspecifiedModel& mis,
                           const model::ValidationGrid& grid) const;

    std::string label() const;
    const nlohmann::ordered_json& descriptor() const { return descriptor_; }

    // Representative constants for reporting (first segment / reference point).
    double psi_summary() const;
    std::vector<double> theta_summary() const;

private:
    MeasureChange() = default;
    bool reference_ = false;
    bool state_dependent_ = false;
    FamilyTag tag_ = FamilyTag::Reference;
    PsiEval psi_;
    ThetaEval theta_;                    // state-dependent path only
    std::vector<double> breakpoints_;    // piecewise-in-t path
    std::vector<double> psi_values_;
    std::vector<std::vector<double>> theta_rows_;  // [segment][atom]
    std::vector<double> theta_floor_;
    nlohmann::ordered_json descriptor_;
};

}  // namespace jumphedge::sim
