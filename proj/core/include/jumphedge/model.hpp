#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "jumphedge/coefficients.hpp"
#include "jumphedge/levy.hpp"
#include "jumphedge/payoff.hpp"
#include "jumphedge/rates.hpp"

namespace jumphedge::model {

// The market as displayed at the exchange: sigma(t) and eta(t,z) may depend
// on time and mark but not on the price level.
struct TrueModel {
    double x0;
    RateCurve rate;
    CoefficientField sigma;  // true-vol
    CoefficientField eta;    // true-jump, > -1
    LevyMeasure levy;

    nlohmann::ordered_json descriptor() const;
    std::string fingerprint() const;
};

// The investor's Markov model: state-dependent volatility gamma(t,s) and
// jump sensitivity gamma_tilde(t,s,z) over the same atoms.
struct MisspecifiedModel {
    RateCurve rate;
    CoefficientField gamma;        // model-vol
    CoefficientField gamma_tilde;  // model-jump
    LevyMeasure levy;
    double epsilon_floor = 0.0;  // rho_tilde' > -1 + epsilon_floor

    nlohmann::ordered_json descriptor() const;
    std::string fingerprint() const;
};

struct ValidationGrid {
    int n_times = 101;
    int n_prices = 201;
    double t_max = 1.0;
    double s_min = 1.0;
    double s_max = 400.0;
};

struct CheckResult {
    std::string name;
    bool pass = true;
    double worst = 0.0;
    double at_t = 0.0, at_s = 0.0, at_z = 0.0;
    nlohmann::ordered_json to_json() const;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
    const CheckResult* find(const std::string& name) const;
    nlohmann::ordered_json to_json() const;
};

struct ValidationLimits {
    double bound_B = 1.0;   // log-moment bounds
    double bound_L = 1e3;   // integral of rho_tilde'^2 against the Levy measure
};

// Samples the standing assumptions on a (t, s) x atoms grid; failures are
// reported, never thrown. Throws ConfigError only for unusable inputs
// (non-positive prices, jump coefficients without atoms).
ValidationReport validate_models(const TrueModel& truth, const MisspecifiedModel& mis,
                                 const ValidationGrid& grid, const ValidationLimits& limits = {});

struct DominationReport {
    CheckResult vol;   // sigma(t) <= gamma(t,s)
    CheckResult jump;  // sgn(gamma_tilde - eta) = sgn(eta), per atom
    bool pass = false;
    nlohmann::ordered_json to_json() const;
};

DominationReport check_domination(const TrueModel& truth, const MisspecifiedModel& mis,
                                  const ValidationGrid& grid);

std::string fnv1a_hex(const std::string& data);

}  // namespace jumphedge::model
