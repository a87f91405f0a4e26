#pragma once

#include <cstdint>
#include <vector>

#include "jumphedge/hedge.hpp"
#include "jumphedge/measure.hpp"
#include "jumphedge/model.hpp"
#include "jumphedge/pide.hpp"

namespace jumphedge::robust {

// Candidate grids are constants per atom: constant tilts keep the tilted
// dynamics Markov, which is the constructive reading of restricting the
// pricing operator to Markov-preserving measures.
struct FamilySpec {
    enum class Kind { Singleton, GoodDeal, Ball, Explicit };
    Kind kind = Kind::Singleton;
    double good_deal_B = 0.0;                       // psi^2 + sum theta^2 w <= B
    double ball_B1 = 0.0, ball_B2 = 0.0;            // |psi| <= B1, |theta| <= B2
    std::vector<std::vector<double>> theta_grid;    // per-atom candidate values
    std::vector<std::vector<double>> explicit_theta;  // Explicit: theta rows
    double condition_I_bound = 1e3;                 // growth audit constant L

    nlohmann::ordered_json to_json() const;
};

struct MeasureFamily {
    FamilySpec spec;
    std::vector<sim::MeasureChange> candidates;
    int dropped_infeasible = 0;   // martingale-condition residual too large
    int dropped_constraint = 0;   // good-deal / ball bound violated
    int dropped_condition_I = 0;  // growth audit failed
    nlohmann::ordered_json to_json() const;
};

// Enumerates candidate (psi, theta) constants: theta from the grids, psi
// solved from the martingale condition (or zero when gamma vanishes, in
// which case the condition itself prunes the grid).
MeasureFamily enumerate_family(const model::MisspecifiedModel& mis, const FamilySpec& spec,
                               const model::ValidationGrid& vgrid);

struct RobustSurface {
    std::vector<pide::ValueSurface> candidates;
    pide::ValueSurface upper;           // pointwise max, derivatives re-extracted
    std::vector<std::int16_t> argmax;   // candidate index per (t, x), ties lowest
    std::vector<double> candidate_prices;  // value at (0, x) for reporting, set by caller

    RobustSurface(pide::ValueSurface upper_) : upper(std::move(upper_)) {}
};

// One PIDE solve per candidate on the tilted atom weights (1 - theta) w;
// the robust operator is the pointwise max folded in candidate-index order.
RobustSurface robust_price(const model::MisspecifiedModel& mis, const model::Payoff& payoff,
                           const MeasureFamily& family, const sim::TimeGrid& tgrid,
                           const pide::SpaceGrid& xgrid);

// Hedge with the max surface's right-hand Delta along true paths simulated
// under every family member. Requires a zero rate curve.
hedge::SubmartingaleReport robust_hedge_test(const model::TrueModel& truth,
                                             const model::MisspecifiedModel& mis,
                                             const RobustSurface& rs,
                                             const MeasureFamily& family,
                                             const model::ValidationGrid& vgrid,
                                             const sim::TimeGrid& path_grid,
                                             const hedge::HedgeOptions& options, int n_paths,
                                             std::uint64_t seed);

}  // namespace jumphedge::robust
