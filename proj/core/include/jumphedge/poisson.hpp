#pragma once

#include <cstdint>
#include <vector>

#include "jumphedge/model.hpp"
#include "jumphedge/pide.hpp"
#include "jumphedge/sim.hpp"

namespace jumphedge::poisson {

// Complete pure-Poisson market: no diffusion, a single atom at mark alpha
// with intensity lambda, zero rates. The unique pricing measure is the
// reference one, so the claim is perfectly replicable under the model.
struct PoissonModel {
    double lambda = 1.0;
    double alpha = 1.0;
    model::CoefficientField gamma_tilde;  // model jump sensitivity at the atom
    model::CoefficientField eta;          // true jump coefficient at the atom
    double epsilon_floor = 0.0;

    void validate() const;
    model::MisspecifiedModel misspecified() const;
    model::TrueModel true_model(double x0) const;
};

// Replicating position: the difference quotient of the surface across the
// jump destination, pi = [C(t, s + D) - C(t, s)] / D with D = s * gamma_tilde.
double replication_strategy(const pide::ValueSurface& vs, double t, double s_left,
                            const model::CoefficientField& gamma_tilde, double alpha);

struct ResidualReport {
    double max_residual = 0.0;
    double at_t = 0.0, at_x = 0.0;
    long points = 0;
    nlohmann::ordered_json to_json() const;
};

// Interior residual of
//   0 = C_t + lambda [C(t, s + s gt) - C(t, s) - s gt C'(t, s)]
// measured with central time differences and the surface's right-hand
// Deltas, i.e. independently of the marching stencil. lambda_override
// (when >= 0) replaces the model intensity; used as a negative control.
ResidualReport pide_residual_certificate(const pide::ValueSurface& vs, const PoissonModel& pm,
                                         double lambda_override = -1.0);

struct ReplicationReport {
    int n_paths = 0;
    double min_gap = 0.0;
    double mean_gap = 0.0;
    double max_abs_gap = 0.0;
    long violations = 0;   // gap < -tol_sh
    double tol_sh = 0.0;   // 2 * max |gap| of the calibration run (gamma_tilde = eta)
    bool pass = false;
    std::vector<double> gaps;
    nlohmann::ordered_json to_json() const;
};

// Runs the replication strategy computed from vs (built on gamma_tilde)
// along true paths (eta dynamics); requires the jump-sign condition
// sgn(gamma_tilde - eta) = sgn(eta) at the atom. tol_sh is calibrated from
// a gamma_tilde = eta replication run on the same grid and seed.
ReplicationReport run_replication(const PoissonModel& pm, const pide::ValueSurface& vs,
                                  const model::Payoff& payoff, double x0,
                                  const sim::TimeGrid& path_grid, int n_paths,
                                  std::uint64_t seed);

}  // namespace jumphedge::poisson
