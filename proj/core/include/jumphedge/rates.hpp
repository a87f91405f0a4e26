#pragma once

#include <vector>

#include <json.hpp>

namespace jumphedge::model {

// Deterministic short rate, constant or piecewise-constant on [0, T].
// The money market account is M(t) = exp(integral of r over [0, t]).
class RateCurve {
public:
    static RateCurve constant(double rate);

    // values[i] applies on [breakpoints[i-1], breakpoints[i]) with
    // breakpoints.size() + 1 == values.size(); the last value extends
    // beyond the last breakpoint.
    static RateCurve piecewise(std::vector<double> breakpoints, std::vector<double> values);

    double value(double t) const;

    // Exact integral of r over [t0, t1]; throws ConfigError if t0 > t1.
    double integral(double t0, double t1) const;

    // exp(integral over [t0, t1]): the money-market growth factor M(t1)/M(t0).
    double discount(double t0, double t1) const;

    bool is_zero() const;

    const nlohmann::ordered_json& descriptor() const { return descriptor_; }

private:
    RateCurve() = default;
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    nlohmann::ordered_json descriptor_;
};

// Money-market growth factor over [t0, t1], exact for piecewise-constant rates.
double discount(const RateCurve& r, double t0, double t1);

}  // namespace jumphedge::model
