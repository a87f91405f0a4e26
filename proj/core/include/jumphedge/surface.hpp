#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "jumphedge/grids.hpp"

namespace jumphedge::pide {

struct SchemeInfo {
    std::string method;
    double jump_cfl = 0.0;         // dt * total atom mass
    int rannacher_half_steps = 0;
    long upwinded_rows = 0;
    long extrapolations = 0;       // jump destinations beyond the grid
    double max_overshoot = 0.0;    // largest relative excursion past an edge
    nlohmann::ordered_json to_json() const;
};

// Backward-solved value surface v(t, x) with right-hand Deltas and second
// differences. Row k is time node k of tgrid; column j is price node j.
//
// Query conventions: values interpolate piecewise-linearly in x (linear
// extrapolation with the edge slopes beyond the grid) and linearly in t.
// delta(t, x) is the slope of the x-segment containing x, i.e. the exact
// right-hand derivative of the interpolant, matching the extracted matrix.
class ValueSurface {
public:
    ValueSurface(sim::TimeGrid tgrid, SpaceGrid xgrid);

    int n_times() const { return tg_.n_steps + 1; }
    int n_prices() const { return static_cast<int>(x_.size()); }
    const sim::TimeGrid& tgrid() const { return tg_; }
    const SpaceGrid& xgrid_spec() const { return xg_; }
    const std::vector<double>& xnodes() const { return x_; }

    double& value_at(int k, int j) { return values_[idx(k, j)]; }
    double value_at(int k, int j) const { return values_[idx(k, j)]; }
    double delta_at(int k, int j) const { return deltas_[idx(k, j)]; }
    double gamma_at(int k, int j) const { return gammas_[idx(k, j)]; }

    // Recomputes the delta and gamma matrices from the value matrix.
    void extract_derivatives();

    double value(double t, double x) const;
    double delta(double t, double x) const;
    double gamma(double t, double x) const;

    // Interpolates within a single row (time node k).
    double row_value(int k, double x) const;
    double row_delta(int k, double x) const;
    double row_gamma(int k, double x) const;

    double max_abs_value() const;

    SchemeInfo scheme;
    std::string cache_key;

    void write_csv(std::ostream& os) const;
    void write_binary(std::ostream& os) const;
    static ValueSurface read_binary(std::istream& is);

    // Index of the x-segment containing x, clamped to [0, n-2].
    int segment_of(double x) const;

private:
    std::size_t idx(int k, int j) const { return static_cast<std::size_t>(k) * x_.size() + j; }
    void time_weights(double t, int& k0, double& beta) const;

    sim::TimeGrid tg_;
    SpaceGrid xg_;
    std::vector<double> x_;
    std::vector<double> values_, deltas_, gammas_;
};

}  // namespace jumphedge::pide
