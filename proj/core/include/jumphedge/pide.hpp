#pragma once

#include <cstdint>

#include "jumphedge/model.hpp"
#include "jumphedge/sim.hpp"
#include "jumphedge/surface.hpp"

namespace jumphedge::pide {

// Backward IMEX march of
//   0 = g_t + r x g' + 1/2 x^2 gamma^2 g'' - r g
//       + sum_atoms w [g(t, x + x gt) - g - x gt g'],   g(T, x) = h(x)
// with the nonlocal interpolation sum explicit and everything local
// (including the jump compensator's drift and mass terms) in the implicit
// tridiagonal operator, which keeps the marching matrix an M-matrix.
// The first step from the terminal row is two fully implicit half-steps
// (Rannacher), then Crank-Nicolson weighting. Explicit jump stability
// requires dt * total atom mass <= 1 (checked).
ValueSurface solve_pide(const model::MisspecifiedModel& mis, const model::Payoff& payoff,
                        const sim::TimeGrid& tgrid, const SpaceGrid& xgrid);

// Monte Carlo estimate of the misspecified value v_m(t, x); the t = horizon
// edge returns the payoff with zero error.
sim::McResult mc_price(const model::MisspecifiedModel& mis, const model::Payoff& payoff, double t,
                       double x, double horizon, int n_paths, std::uint64_t seed,
                       int n_steps = 64);

struct ConvexityReport {
    double min_second_difference = 0.0;
    double scale = 0.0;  // max |v|
    double tol = 0.0;
    int at_k = -1, at_j = -1;
    bool pass = false;
    nlohmann::ordered_json to_json() const;
};

// Minimum scaled second difference over interior nodes of every time row.
ConvexityReport convexity_report(const ValueSurface& vs, double tol_factor = 1e-6);

struct DeltaBoundReport {
    double max_abs_delta = 0.0;
    double bound = 0.0;  // payoff slope bound L
    double tol = 0.0;
    bool pass = false;
    nlohmann::ordered_json to_json() const;
};

DeltaBoundReport delta_bound_report(const ValueSurface& vs, const model::Payoff& payoff,
                                    double tol = 1e-6);

}  // namespace jumphedge::pide
