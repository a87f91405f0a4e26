#pragma once

#include <cstdint>
#include <vector>

#include "jumphedge/measure.hpp"
#include "jumphedge/model.hpp"
#include "jumphedge/pide.hpp"
#include "jumphedge/sim.hpp"

namespace jumphedge::hedge {

struct HedgeOptions {
    std::vector<double> checkpoints;     // must coincide with path-grid nodes
    double extrapolation_budget = 0.10;  // allowed excursion past the surface's
                                         // price grid, as a fraction of its width
};

// Per-path outcome of the self-financing Delta hedge. trading_pnl is the
// realized stochastic integral sum(delta * dS~) in discounted units, so
//   e(T)/M(T) = v(0,x0) + trading_pnl - v(T,S(T))/M(T)
// holds exactly (eq of the discounted portfolio).
struct PathOutcome {
    bool excluded = false;
    double terminal_value = 0.0;       // S(T)
    double terminal_error = 0.0;       // e(T), undiscounted
    double terminal_surface = 0.0;     // v(T, S(T)) read from the surface
    double trading_pnl = 0.0;
    std::vector<double> error_disc;    // e(t_cp)/M(t_cp) per checkpoint
};

struct CheckpointStats {
    double mean = 0.0;
    double stderr_ = 0.0;
};

struct HedgeResult {
    std::vector<double> checkpoints;
    double initial_value = 0.0;  // v(0, x0) = initial capital
    double discount_T = 1.0;     // M(T)
    std::vector<PathOutcome> outcomes;
    int n_excluded = 0;

    int n_used() const { return static_cast<int>(outcomes.size()) - n_excluded; }
    CheckpointStats stats(std::size_t cp) const;
    // paired statistics of e(t_{cp+1})/M - e(t_cp)/M
    CheckpointStats diff_stats(std::size_t cp) const;
    sim::McResult terminal_error_stats() const;

    nlohmann::ordered_json to_json() const;
    void write_terminal_csv(std::ostream& os) const;
};

// Rebalances at every grid node and at every exact jump time with the Delta
// read at the left limit, so the increment across a jump carries the
// pre-jump Delta. Paths leaving the surface grid beyond the budget are
// excluded and counted.
HedgeResult run_delta_hedge(const sim::PathSet& true_paths, const pide::ValueSurface& vs,
                            const model::RateCurve& rate, const HedgeOptions& options);

// |mean(e_T/M_T) + mean(h(S_T))/M_T - v(0,x0) - mean(trading_pnl)| over the
// included paths: the discrete algebra of the discounted portfolio plus the
// terminal row being the payoff, testable at machine precision.
double terminal_identity_residual(const HedgeResult& hr, const model::Payoff& payoff);

struct DecompositionTerms {
    double quadratic = 0.0;    // 1/2 int v'' S^2 (gamma^2 - sigma^2) / M du
    double compensator = 0.0;  // jump-bracket difference against vartheta du
    double martingale = 0.0;   // compensated realized-jump bracket (negated)
    double sum() const { return quadratic + compensator + martingale; }
};

struct DecompositionResult {
    std::vector<double> checkpoints;
    std::vector<std::vector<DecompositionTerms>> per_path;  // [path][checkpoint]
    std::vector<char> excluded;
    int n_excluded = 0;
    CheckpointStats sum_stats(std::size_t cp) const;
};

// The three terms of the discounted-hedging-error decomposition, quadratured
// on the event-augmented grid with left-frozen integrands; realized jumps
// enter exactly.
DecompositionResult hedging_error_decomposed(const sim::PathSet& true_paths,
                                             const pide::ValueSurface& vs,
                                             const model::TrueModel& truth,
                                             const model::MisspecifiedModel& mis,
                                             const HedgeOptions& options);

struct PiReport {
    long steps_checked = 0;
    long decreases = 0;        // increments below -tol
    long increases = 0;        // increments above +tol (for the inverted check)
    double min_increment = 0.0;
    double max_increment = 0.0;
    double tol = 0.0;
    bool nondecreasing_pass = false;
    bool nonincreasing_pass = false;
    nlohmann::ordered_json to_json() const;
};

// Per-step increments of the drift part of the decomposition (undiscounted):
// under domination they are nonnegative up to quadrature tolerance.
PiReport pi_monotonicity_check(const sim::PathSet& true_paths, const pide::ValueSurface& vs,
                               const model::TrueModel& truth,
                               const model::MisspecifiedModel& mis, double tol_scale = 1e-6);

struct MeasureVerdict {
    std::string label;
    double psi = 0.0;
    std::vector<double> theta;
    std::vector<double> means, stderrs;
    std::vector<double> diff_means, diff_stderrs;
    int n_excluded = 0;
    bool nonnegative_pass = false;
    bool monotone_pass = false;
    nlohmann::ordered_json to_json() const;
};

struct SubmartingaleReport {
    std::vector<double> checkpoints;
    std::vector<MeasureVerdict> measures;
    bool all_pass = false;
    nlohmann::ordered_json to_json() const;
};

// Simulates the true model under each tilted measure (theta >= 0 required),
// hedges with the misspecified surface and tests that checkpoint means of
// e/M are >= -3 stderr and nondecreasing within 3 stderr of the paired
// consecutive differences.
SubmartingaleReport submartingale_test(const model::TrueModel& truth,
                                       const model::MisspecifiedModel& mis,
                                       const pide::ValueSurface& vs,
                                       const std::vector<sim::MeasureChange>& measures,
                                       const model::ValidationGrid& vgrid,
                                       const sim::TimeGrid& path_grid,
                                       const HedgeOptions& options, int n_paths,
                                       std::uint64_t seed);

struct PriceDominationReport {
    double model_price = 0.0;  // v(0, x0) from the surface
    double true_mc_mean = 0.0;
    double true_mc_stderr = 0.0;
    bool pass = false;
    nlohmann::ordered_json to_json() const;
};

PriceDominationReport price_domination_check(const pide::ValueSurface& vs,
                                             const model::TrueModel& truth,
                                             const model::Payoff& payoff,
                                             const sim::TimeGrid& grid, int n_paths,
                                             std::uint64_t seed);

}  // namespace jumphedge::hedge
