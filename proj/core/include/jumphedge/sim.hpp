#pragma once

#include <cstdint>
#include <functional>

#include "jumphedge/measure.hpp"
#include "jumphedge/model.hpp"
#include "jumphedge/paths.hpp"

namespace jumphedge::sim {

// Exact jump times from per-atom exponential clocks; log-Euler between
// events (exact for state-independent coefficients). Coefficients are
// frozen at the left limit of every interval.

PathSet simulate_true(const model::TrueModel& truth, const TimeGrid& grid, int n_paths,
                      std::uint64_t seed);

PathSet simulate_misspecified(const model::MisspecifiedModel& mis, double x0,
                              const TimeGrid& grid, int n_paths, std::uint64_t seed);

// Both members of each pair are driven by identical realized noise. Pairs
// whose jump factor would kill positivity (possible only when the model
// violates the floor assumptions) are truncated, not failed.
CoupledPathSet simulate_coupled(const model::MisspecifiedModel& mis, double x, double y,
                                const TimeGrid& grid, int n_pairs, std::uint64_t seed);

// Evolves (S, xi) jointly, where xi is the stochastic exponential driven by
// rho'(t,S) dW + rho_tilde'(t,S,z) against the compensated jump measure.
FlowPathSet simulate_flow_derivative(const model::MisspecifiedModel& mis, double x0,
                                     const TimeGrid& grid, int n_paths, std::uint64_t seed);

// Direct simulation under the tilted measure: Brownian drift shifted by
// -psi, per-atom intensities scaled to (1 - theta) w. The martingale
// condition keeps the discounted misspecified price a Q-martingale.
PathSet simulate_under_Q(const model::MisspecifiedModel& mis, const MeasureChange& mc, double x0,
                         const TimeGrid& grid, int n_paths, std::uint64_t seed);

// Same tilt applied to the true dynamics (the hedging theorems evaluate
// errors along true paths under measures built for the misspecified model).
PathSet simulate_true_under_Q(const model::TrueModel& truth, const MeasureChange& mc,
                              const TimeGrid& grid, int n_paths, std::uint64_t seed);

// Radon-Nikodym density xi(T) of the tilted measure along a path simulated
// under P:
//   xi(T) = exp(-int psi dW - 1/2 int psi^2 du
//               + sum_jumps ln(1 - theta) + int sum_atoms theta w du),
// the expansion of the Doleans-Dade exponential of
// -int psi dW - int int theta dJ~; its sample mean over a PathSet is 1.
double density_process(const MeasureChange& mc, const Path& path, const model::LevyMeasure& levy);

struct McResult {
    double mean = 0.0;
    double stderr_ = 0.0;
    int n = 0;
};

// Deterministic ordered reduction (path-index order): bit-identical results
// for any thread count.
McResult mc_estimate(const PathSet& ps, const std::function<double(const Path&)>& functional);

}  // namespace jumphedge::sim
