#include "jumphedge/grids.hpp"

#include <cmath>

#include "jumphedge/errors.hpp"

namespace jumphedge::sim {

TimeGrid TimeGrid::uniform(double horizon, int n_steps) { return over(0.0, horizon, n_steps); }

TimeGrid TimeGrid::over(double t0, double t1, int n_steps) {
    if (!(t1 > t0)) throw ConfigError("time grid: horizon must exceed start");
    if (n_steps < 1) throw ConfigError("time grid: need at least one step");
    return TimeGrid{t0, t1, n_steps};
}

int TimeGrid::index_of_time(double t, double tol) const {
    const double k = (t - t0) / dt();
    const int ki = static_cast<int>(std::lround(k));
    if (ki < 0 || ki > n_steps) return -1;
    return (std::abs(node(ki) - t) <= tol * std::max(1.0, std::abs(t1))) ? ki : -1;
}

nlohmann::ordered_json TimeGrid::descriptor() const {
    return {{"t0", t0}, {"t1", t1}, {"n_steps", n_steps}};
}

}  // namespace jumphedge::sim

namespace jumphedge::pide {

void SpaceGrid::validate(double x0) const {
    if (!(x_min > 0.0)) throw ConfigError("space grid: x_min must be positive");
    if (!(x_min < x_max)) throw ConfigError("space grid: x_min must be below x_max");
    if (n_points < 3) throw ConfigError("space grid: need at least 3 points");
    if (x0 > 0.0 && !(x_min < x0 && x0 < x_max))
        throw ConfigError("space grid: x0 must lie strictly inside [x_min, x_max]");
}

std::vector<double> SpaceGrid::nodes() const {
    validate();
    std::vector<double> x(n_points);
    if (spacing == Spacing::Uniform) {
        for (int j = 0; j < n_points; ++j)
            x[j] = x_min + (x_max - x_min) * j / (n_points - 1);
    } else {
        const double l0 = std::log(x_min), l1 = std::log(x_max);
        for (int j = 0; j < n_points; ++j)
            x[j] = std::exp(l0 + (l1 - l0) * j / (n_points - 1));
        x.front() = x_min;
        x.back() = x_max;
    }
    return x;
}

nlohmann::ordered_json SpaceGrid::descriptor() const {
    return {{"x_min", x_min},
            {"x_max", x_max},
            {"n_points", n_points},
            {"spacing", spacing == Spacing::Uniform ? "uniform" : "log-uniform"}};
}

}  // namespace jumphedge::pide
