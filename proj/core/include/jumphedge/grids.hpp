#pragma once

#include <vector>

#include <json.hpp>

namespace jumphedge::sim {

// Uniform time grid on [t0, t1]. Simulated jump times are added on top of
// these nodes per path, so the grid never discretizes jumps.
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    int n_steps = 1;

    static TimeGrid uniform(double horizon, int n_steps);
    static TimeGrid over(double t0, double t1, int n_steps);

    double node(int k) const { return t0 + (t1 - t0) * k / n_steps; }
    double dt() const { return (t1 - t0) / n_steps; }
    double horizon() const { return t1; }

    // Index of the node nearest t if within tol, else -1.
    int index_of_time(double t, double tol = 1e-9) const;

    nlohmann::ordered_json descriptor() const;
};

}  // namespace jumphedge::sim

namespace jumphedge::pide {

enum class Spacing { Uniform, LogUniform };

struct SpaceGrid {
    double x_min = 1.0;
    double x_max = 100.0;
    int n_points = 3;
    Spacing spacing = Spacing::Uniform;

    std::vector<double> nodes() const;
    void validate(double x0 = 0.0) const;  // x0 = 0 skips the interior check

    nlohmann::ordered_json descriptor() const;
};

}  // namespace jumphedge::pide
