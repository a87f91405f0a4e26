#include "jumphedge/payoff.hpp"

#include <algorithm>
#include <cmath>

#include "jumphedge/errors.hpp"

namespace jumphedge::model {

Payoff::Payoff(std::vector<double> knots, std::vector<double> slopes, double anchor_x,
               double anchor_value, nlohmann::ordered_json descriptor)
    : knots_(std::move(knots)),
      slopes_(std::move(slopes)),
      anchor_x_(anchor_x),
      anchor_value_(anchor_value),
      descriptor_(std::move(descriptor)) {
    if (slopes_.size() != knots_.size() + 1)
        throw ConfigError("payoff: need one more slope than knots");
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
        if (!(knots_[i] < knots_[i + 1]))
            throw ConfigError("payoff: knots must be strictly increasing");
    for (const double k : knots_)
        if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("payoff: knots must be positive");
    for (std::size_t i = 0; i + 1 < slopes_.size(); ++i)
        if (slopes_[i] > slopes_[i + 1])
            throw ConfigError("payoff: slopes must be nondecreasing (convexity)");
    bound_ = 0.0;
    for (const double s : slopes_) {
        if (!std::isfinite(s)) throw ConfigError("payoff: non-finite slope");
        bound_ = std::max(bound_, std::abs(s));
    }
}

Payoff Payoff::call(double strike) {
    if (!(strike > 0.0)) throw ConfigError("call payoff: strike must be positive");
    return Payoff({strike}, {0.0, 1.0}, strike, 0.0,
                  {{"kind", "call"}, {"strike", strike}});
}

Payoff Payoff::put(double strike) {
    if (!(strike > 0.0)) throw ConfigError("put payoff: strike must be positive");
    return Payoff({strike}, {-1.0, 0.0}, strike, 0.0,
                  {{"kind", "put"}, {"strike", strike}});
}

Payoff Payoff::straddle(double strike) {
    if (!(strike > 0.0)) throw ConfigError("straddle payoff: strike must be positive");
    return Payoff({strike}, {-1.0, 1.0}, strike, 0.0,
                  {{"kind", "straddle"}, {"strike", strike}});
}

Payoff Payoff::linear(double slope, double intercept) {
    return Payoff({}, {slope}, 0.0, intercept,
                  {{"kind", "linear"}, {"slope", slope}, {"intercept", intercept}});
}

Payoff Payoff::piecewise_linear(std::vector<double> knots, std::vector<double> slopes,
                                double value_at_first_knot) {
    if (knots.empty()) throw ConfigError("piecewise_linear payoff: at least one knot required");
    nlohmann::ordered_json d = {{"kind", "piecewise_linear"},
                                {"knots", knots},
                                {"slopes", slopes},
                                {"value_at_first_knot", value_at_first_knot}};
    const double anchor = knots.front();
    return Payoff(std::move(knots), std::move(slopes), anchor, value_at_first_knot, std::move(d));
}

double Payoff::value(double x) const {
    if (!(x > 0.0)) throw ConfigError("payoff value: x must be positive");
    if (knots_.empty()) return anchor_value_ + slopes_[0] * (x - anchor_x_);
    // Accumulate from the first knot to the segment containing x.
    double v = anchor_value_;
    double pos = knots_.front();
    if (x >= pos) {
        std::size_t i = 1;
        while (i < knots_.size() && knots_[i] <= x) {
            v += slopes_[i] * (knots_[i] - pos);
            pos = knots_[i];
            ++i;
        }
        v += slopes_[i] * (x - pos);
    } else {
        v += slopes_[0] * (x - pos);
    }
    return v;
}

double Payoff::slope(double x, Side side) const {
    if (!(x > 0.0)) throw ConfigError("payoff slope: x must be positive");
    if (knots_.empty()) return slopes_[0];
    const auto idx = (side == Side::Right)
                         ? std::upper_bound(knots_.begin(), knots_.end(), x) - knots_.begin()
                         : std::lower_bound(knots_.begin(), knots_.end(), x) - knots_.begin();
    return slopes_[idx];
}

}  // namespace jumphedge::model
