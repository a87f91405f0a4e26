#include "jumphedge/pide.hpp"

#include <algorithm>
#include <cmath>

#include "jumphedge/errors.hpp"

namespace jumphedge::pide {

namespace {

// Tridiagonal representation of the local operator
//   A[g] = a(t,x) g' + b(t,x) g'' - c(t) g
// with a = x (r - sum gt w), b = x^2 gamma^2 / 2, c = r + sum w.
// Boundary rows drop the diffusion term (zero-gamma boundary condition)
// and use the one-sided first difference.
struct LocalOperator {
    std::vector<double> lo, di, up;

    void build(const model::MisspecifiedModel& mis, const std::vector<double>& x, double t,
               long& upwinded) {
        const int n = static_cast<int>(x.size());
        lo.assign(n, 0.0);
        di.assign(n, 0.0);
        up.assign(n, 0.0);
        const double r = mis.rate.value(t);
        const double mass = mis.levy.total_mass();
        const auto& atoms = mis.levy.atoms();

        for (int j = 0; j < n; ++j) {
            double drift = r;
            for (const auto& atom : atoms)
                drift -= mis.gamma_tilde(t, x[j], atom.mark) * atom.weight;
            const double a = x[j] * drift;
            const double c = r + mass;

            if (j == 0) {
                const double h = x[1] - x[0];
                lo[j] = 0.0;
                di[j] = -a / h - c;
                up[j] = a / h;
                continue;
            }
            if (j == n - 1) {
                const double h = x[n - 1] - x[n - 2];
                lo[j] = -a / h;
                di[j] = a / h - c;
                up[j] = 0.0;
                continue;
            }
            const double g = mis.gamma(t, x[j], 0.0);
            const double b = 0.5 * x[j] * x[j] * g * g;
            const double hm = x[j] - x[j - 1], hp = x[j + 1] - x[j];
            const double l2 = 2.0 / (hm * (hm + hp));
            const double c2 = -2.0 / (hm * hp);
            const double u2 = 2.0 / (hp * (hm + hp));
            // central first derivative
            double l1 = -hp / (hm * (hm + hp));
            double c1 = (hp - hm) / (hm * hp);
            double u1 = hm / (hp * (hm + hp));
            double L = b * l2 + a * l1;
            double U = b * u2 + a * u1;
            if (L < 0.0 || U < 0.0) {
                // upwind fallback keeps the off-diagonals nonnegative
                ++upwinded;
                if (a >= 0.0) {
                    l1 = 0.0; c1 = -1.0 / hp; u1 = 1.0 / hp;
                } else {
                    l1 = -1.0 / hm; c1 = 1.0 / hm; u1 = 0.0;
                }
                L = b * l2 + a * l1;
                U = b * u2 + a * u1;
            }
            lo[j] = L;
            di[j] = b * c2 + a * c1 - c;
            up[j] = U;
        }
    }

    // y = g + w * (A g)
    void apply(const std::vector<double>& g, double w, std::vector<double>& y) const {
        const int n = static_cast<int>(g.size());
        y.resize(n);
        y[0] = g[0] + w * (di[0] * g[0] + up[0] * g[1]);
        for (int j = 1; j < n - 1; ++j)
            y[j] = g[j] + w * (lo[j] * g[j - 1] + di[j] * g[j] + up[j] * g[j + 1]);
        y[n - 1] = g[n - 1] + w * (lo[n - 1] * g[n - 2] + di[n - 1] * g[n - 1]);
    }

    // solve (I - w A) g = rhs (Thomas)
    void solve(const std::vector<double>& rhs, double w, std::vector<double>& g,
               std::vector<double>& cp, std::vector<double>& dp) const {
        const int n = static_cast<int>(rhs.size());
        g.resize(n);
        cp.resize(n);
        dp.resize(n);
        auto low = [&](int j) { return -w * lo[j]; };
        auto diag = [&](int j) { return 1.0 - w * di[j]; };
        auto upp = [&](int j) { return -w * up[j]; };
        cp[0] = upp(0) / diag(0);
        dp[0] = rhs[0] / diag(0);
        for (int j = 1; j < n; ++j) {
            const double m = diag(j) - low(j) * cp[j - 1];
            cp[j] = (j < n - 1) ? upp(j) / m : 0.0;
            dp[j] = (rhs[j] - low(j) * dp[j - 1]) / m;
        }
        g[n - 1] = dp[n - 1];
        for (int j = n - 2; j >= 0; --j) g[j] = dp[j] - cp[j] * g[j + 1];
    }
};

// Piecewise-linear read of a row with linear extrapolation by edge slopes.
double pl_read(const std::vector<double>& x, const std::vector<double>& g, double q,
               SchemeInfo& info) {
    const int n = static_cast<int>(x.size());
    if (q <= x[0]) {
        const double slope = (g[1] - g[0]) / (x[1] - x[0]);
        if (q < x[0]) {
            ++info.extrapolations;
            info.max_overshoot = std::max(info.max_overshoot, (x[0] - q) / (x[n - 1] - x[0]));
        }
        return g[0] + slope * (q - x[0]);
    }
    if (q >= x[n - 1]) {
        const double slope = (g[n - 1] - g[n - 2]) / (x[n - 1] - x[n - 2]);
        if (q > x[n - 1]) {
            ++info.extrapolations;
            info.max_overshoot =
                std::max(info.max_overshoot, (q - x[n - 1]) / (x[n - 1] - x[0]));
        }
        return g[n - 1] + slope * (q - x[n - 1]);
    }
    int j = static_cast<int>(std::upper_bound(x.begin(), x.end(), q) - x.begin()) - 1;
    j = std::clamp(j, 0, n - 2);
    const double w = (q - x[j]) / (x[j + 1] - x[j]);
    return (1.0 - w) * g[j] + w * g[j + 1];
}

// Explicit nonlocal sum: sum_atoms w * g(t, x + x*gt(t,x,z)).
void nonlocal_sum(const model::MisspecifiedModel& mis, const std::vector<double>& x, double t,
                  const std::vector<double>& g, std::vector<double>& out, SchemeInfo& info) {
    const int n = static_cast<int>(x.size());
    out.assign(n, 0.0);
    for (const auto& atom : mis.levy.atoms()) {
        for (int j = 0; j < n; ++j) {
            const double dest = x[j] * (1.0 + mis.gamma_tilde(t, x[j], atom.mark));
            if (!(dest > 0.0))
                throw NumericalError("solve_pide: jump destination is non-positive (gamma_tilde "
                                     "<= -1 on the grid)");
            out[j] += atom.weight * pl_read(x, g, dest, info);
        }
    }
}

}  // namespace

ValueSurface solve_pide(const model::MisspecifiedModel& mis, const model::Payoff& payoff,
                        const sim::TimeGrid& tgrid, const SpaceGrid& xgrid) {
    xgrid.validate();
    if (tgrid.t0 != 0.0) throw ConfigError("solve_pide: surface time grid must start at 0");
    ValueSurface vs(tgrid, xgrid);
    const std::vector<double>& x = vs.xnodes();
    const int n = vs.n_prices();
    const int m = tgrid.n_steps;
    const double dt = tgrid.dt();

    const double mass = mis.levy.total_mass();
    vs.scheme.jump_cfl = dt * mass;
    const bool degenerate = mis.gamma.identically_zero();
    if (vs.scheme.jump_cfl > 1.0)
        throw NumericalError("solve_pide: explicit jump step violates dt * mass <= 1" +
                             std::string(degenerate ? " (degenerate diffusion)" : ""));
    vs.scheme.method = degenerate ? "imex-rannacher-cn (degenerate diffusion)"
                                  : "imex-rannacher-cn";
    vs.scheme.rannacher_half_steps = 2;

    // terminal row: exact payoff evaluation
    for (int j = 0; j < n; ++j) vs.value_at(m, j) = payoff.value(x[j]);

    LocalOperator op_known, op_new;
    std::vector<double> g(n), rhs(n), nl(n), tmp(n), cp(n), dp(n);
    for (int j = 0; j < n; ++j) g[j] = vs.value_at(m, j);

    auto step = [&](double t_known, double t_new, double theta_w) {
        const double d = t_known - t_new;
        nonlocal_sum(mis, x, t_known, g, nl, vs.scheme);
        if (theta_w < 1.0) {
            op_known.build(mis, x, t_known, vs.scheme.upwinded_rows);
            op_known.apply(g, (1.0 - theta_w) * d, rhs);
        } else {
            rhs = g;
        }
        for (int j = 0; j < n; ++j) rhs[j] += d * nl[j];
        op_new.build(mis, x, t_new, vs.scheme.upwinded_rows);
        op_new.solve(rhs, theta_w * d, g, cp, dp);
    };

    for (int k = m - 1; k >= 0; --k) {
        const double t_new = tgrid.node(k);
        const double t_known = tgrid.node(k + 1);
        if (k == m - 1) {
            const double t_half = 0.5 * (t_known + t_new);
            step(t_known, t_half, 1.0);
            step(t_half, t_new, 1.0);
        } else {
            step(t_known, t_new, 0.5);
        }
        for (int j = 0; j < n; ++j) vs.value_at(k, j) = g[j];
    }

    vs.extract_derivatives();
    vs.cache_key = model::fnv1a_hex(mis.descriptor().dump() + payoff.descriptor().dump() +
                                    tgrid.descriptor().dump() + xgrid.descriptor().dump());
    return vs;
}

sim::McResult mc_price(const model::MisspecifiedModel& mis, const model::Payoff& payoff, double t,
                       double x, double horizon, int n_paths, std::uint64_t seed, int n_steps) {
    if (t > horizon) throw ConfigError("mc_price: t beyond horizon");
    if (t == horizon) return {payoff.value(x), 0.0, n_paths};
    const auto grid = sim::TimeGrid::over(t, horizon, n_steps);
    const auto ps = sim::simulate_misspecified(mis, x, grid, n_paths, seed);
    const double df = 1.0 / mis.rate.discount(t, horizon);
    return sim::mc_estimate(
        ps, [&](const sim::Path& p) { return payoff.value(p.terminal()) * df; });
}

nlohmann::ordered_json ConvexityReport::to_json() const {
    return {{"min_second_difference", min_second_difference},
            {"scale", scale},
            {"tol", tol},
            {"at_time_index", at_k},
            {"at_price_index", at_j},
            {"pass", pass}};
}

ConvexityReport convexity_report(const ValueSurface& vs, double tol_factor) {
    ConvexityReport rep;
    rep.scale = vs.max_abs_value();
    rep.tol = tol_factor * std::max(rep.scale, 1e-300);
    rep.min_second_difference = HUGE_VAL;
    const auto& x = vs.xnodes();
    for (int k = 0; k < vs.n_times(); ++k) {
        for (int j = 1; j + 1 < vs.n_prices(); ++j) {
            const double hm = x[j] - x[j - 1], hp = x[j + 1] - x[j];
            const double sd = (vs.delta_at(k, j) - vs.delta_at(k, j - 1)) * 0.5 * (hm + hp);
            if (sd < rep.min_second_difference) {
                rep.min_second_difference = sd;
                rep.at_k = k;
                rep.at_j = j;
            }
        }
    }
    rep.pass = rep.min_second_difference >= -rep.tol;
    return rep;
}

nlohmann::ordered_json DeltaBoundReport::to_json() const {
    return {{"max_abs_delta", max_abs_delta}, {"bound", bound}, {"tol", tol}, {"pass", pass}};
}

DeltaBoundReport delta_bound_report(const ValueSurface& vs, const model::Payoff& payoff,
                                    double tol) {
    DeltaBoundReport rep;
    rep.bound = payoff.derivative_bound();
    rep.tol = tol;
    for (int k = 0; k < vs.n_times(); ++k)
        for (int j = 0; j < vs.n_prices(); ++j)
            rep.max_abs_delta = std::max(rep.max_abs_delta, std::abs(vs.delta_at(k, j)));
    rep.pass = rep.max_abs_delta <= rep.bound + tol;
    return rep;
}

}  // namespace jumphedge::pide
