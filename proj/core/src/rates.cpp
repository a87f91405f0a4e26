#include "jumphedge/rates.hpp"

#include <algorithm>
#include <cmath>

#include "jumphedge/errors.hpp"

namespace jumphedge::model {

RateCurve RateCurve::constant(double rate) {
    if (!std::isfinite(rate)) throw ConfigError("rate curve: non-finite constant rate");
    RateCurve r;
    r.values_ = {rate};
    r.descriptor_ = {{"kind", "constant"}, {"value", rate}};
    return r;
}

RateCurve RateCurve::piecewise(std::vector<double> breakpoints, std::vector<double> values) {
    if (values.size() != breakpoints.size() + 1)
        throw ConfigError("rate curve: need one more value than breakpoints");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw ConfigError("rate curve: breakpoints must be strictly increasing");
    for (double b : breakpoints)
        if (!(b > 0.0) || !std::isfinite(b))
            throw ConfigError("rate curve: breakpoints must be positive and finite");
    for (double v : values)
        if (!std::isfinite(v)) throw ConfigError("rate curve: non-finite rate value");
    RateCurve r;
    r.descriptor_ = {{"kind", "piecewise-constant"},
                     {"breakpoints", breakpoints},
                     {"values", values}};
    r.breakpoints_ = std::move(breakpoints);
    r.values_ = std::move(values);
    return r;
}

double RateCurve::value(double t) const {
    std::size_t i = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) -
                    breakpoints_.begin();
    return values_[i];
}

double RateCurve::integral(double t0, double t1) const {
    if (t0 > t1) throw ConfigError("rate integral: t0 > t1");
    if (breakpoints_.empty()) return values_[0] * (t1 - t0);
    double acc = 0.0;
    double left = t0;
    for (std::size_t i = 0; i < breakpoints_.size() && left < t1; ++i) {
        const double right = std::min(breakpoints_[i], t1);
        if (right > left) acc += values_[i] * (right - left);
        left = std::max(left, std::min(breakpoints_[i], t1));
    }
    if (left < t1) acc += values_.back() * (t1 - left);
    return acc;
}

double RateCurve::discount(double t0, double t1) const { return std::exp(integral(t0, t1)); }

bool RateCurve::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double discount(const RateCurve& r, double t0, double t1) { return r.discount(t0, t1); }

}  // namespace jumphedge::model
