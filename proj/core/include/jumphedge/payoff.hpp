#pragma once

#include <vector>

#include <json.hpp>

namespace jumphedge::model {

enum class Side { Left, Right };

// Convex payoff with bounded one-sided slopes. Everything is represented
// as a piecewise-linear function: knots k_1 < ... < k_p with p+1 slopes
// (slopes[0] left of the first knot, slopes[p] right of the last) anchored
// by the value at the first knot. Convexity means nondecreasing slopes and
// the derivative bound L is max |slope|.
class Payoff {
public:
    static Payoff call(double strike);
    static Payoff put(double strike);
    static Payoff straddle(double strike);
    static Payoff linear(double slope, double intercept);
    static Payoff piecewise_linear(std::vector<double> knots, std::vector<double> slopes,
                                   double value_at_first_knot);

    double value(double x) const;              // requires x > 0
    double slope(double x, Side side) const;   // one-sided derivative
    double derivative_bound() const { return bound_; }

    const std::vector<double>& knots() const { return knots_; }
    const nlohmann::ordered_json& descriptor() const { return descriptor_; }

private:
    Payoff(std::vector<double> knots, std::vector<double> slopes, double anchor_x,
           double anchor_value, nlohmann::ordered_json descriptor);
    std::vector<double> knots_;
    std::vector<double> slopes_;
    double anchor_x_;
    double anchor_value_;
    double bound_;
    nlohmann::ordered_json descriptor_;
};

}  // namespace jumphedge::model
