#include "jumphedge/robust.hpp"

#include <algorithm>
#include <cmath>

#include "jumphedge/errors.hpp"
#include "jumphedge/threading.hpp"

namespace jumphedge::robust {

nlohmann::ordered_json FamilySpec::to_json() const {
    const char* names[] = {"singleton", "good_deal", "ball", "explicit"};
    nlohmann::ordered_json j = {{"kind", names[static_cast<int>(kind)]}};
    if (kind == Kind::GoodDeal) j["B"] = good_deal_B;
    if (kind == Kind::Ball) {
        j["B1"] = ball_B1;
        j["B2"] = ball_B2;
    }
    if (!theta_grid.empty()) j["theta_grid"] = theta_grid;
    if (!explicit_theta.empty()) j["theta"] = explicit_theta;
    j["condition_I_bound"] = condition_I_bound;
    return j;
}

nlohmann::ordered_json MeasureFamily::to_json() const {
    nlohmann::ordered_json cands = nlohmann::ordered_json::array();
    for (const auto& mc : candidates)
        cands.push_back({{"psi", mc.psi_summary()}, {"theta", mc.theta_summary()}});
    return {{"spec", spec.to_json()},
            {"candidates", cands},
            {"dropped_infeasible", dropped_infeasible},
            {"dropped_constraint", dropped_constraint},
            {"dropped_condition_I", dropped_condition_I}};
}

namespace {

// Worst ratio of sum rho_tilde^2 (1-theta) w over (1 + s^2) on the grid.
double condition_I_constant(const model::MisspecifiedModel& mis,
                            const std::vector<double>& theta,
                            const model::ValidationGrid& g) {
    double worst = 0.0;
    const auto& atoms = mis.levy.atoms();
    for (int i = 0; i < g.n_times; ++i) {
        const double t = g.t_max * i / (g.n_times - 1);
        for (int j = 0; j < g.n_prices; ++j) {
            const double s = g.s_min + (g.s_max - g.s_min) * j / (g.n_prices - 1);
            double acc = 0.0;
            for (std::size_t a = 0; a < atoms.size(); ++a) {
                const double rho = s * mis.gamma_tilde(t, s, atoms[a].mark);
                acc += rho * rho * (1.0 - theta[a]) * atoms[a].weight;
            }
            worst = std::max(worst, acc / (1.0 + s * s));
        }
    }
    return worst;
}

void cartesian(const std::vector<std::vector<double>>& grids, std::vector<double>& current,
               std::size_t depth, std::vector<std::vector<double>>& out) {
    if (depth == grids.size()) {
        out.push_back(current);
        return;
    }
    for (const double v : grids[depth]) {
        current[depth] = v;
        cartesian(grids, current, depth + 1, out);
    }
}

}  // namespace

MeasureFamily enumerate_family(const model::MisspecifiedModel& mis, const FamilySpec& spec,
                               const model::ValidationGrid& vgrid) {
    MeasureFamily fam;
    fam.spec = spec;

    if (spec.kind == FamilySpec::Kind::Singleton) {
        fam.candidates.push_back(sim::MeasureChange::reference());
        return fam;
    }

    const std::size_t n_atoms = mis.levy.size();
    const bool has_vol = !mis.gamma.identically_zero();
    if (!has_vol && n_atoms == 0)
        throw ConfigError("enumerate_family: neither diffusion nor atoms; only the reference "
                          "measure exists");

    std::vector<std::vector<double>> theta_rows;
    if (spec.kind == FamilySpec::Kind::Explicit) {
        theta_rows = spec.explicit_theta;
    } else {
        auto grids = spec.theta_grid;
        if (grids.empty()) grids.assign(n_atoms, {0.0});
        if (grids.size() != n_atoms)
            throw ConfigError("enumerate_family: need one theta grid per atom");
        std::vector<double> cur(n_atoms, 0.0);
        if (n_atoms == 0)
            theta_rows.push_back({});
        else
            cartesian(grids, cur, 0, theta_rows);
    }

    const sim::FamilyTag tag = spec.kind == FamilySpec::Kind::GoodDeal ? sim::FamilyTag::GoodDeal
                               : spec.kind == FamilySpec::Kind::Ball   ? sim::FamilyTag::Ball
                                                                       : sim::FamilyTag::Explicit;

    for (auto& theta : theta_rows) {
        if (theta.size() != n_atoms)
            throw ConfigError("enumerate_family: theta row arity mismatch");
        bool feasible = true;
        for (const double th : theta) feasible = feasible && th < 1.0;
        if (!feasible) {
            ++fam.dropped_infeasible;
            continue;
        }
        sim::MeasureChange mc = sim::MeasureChange::reference();
        try {
            mc = sim::MeasureChange::solve_psi(mis, theta, 0.0, vgrid.s_min, tag);
        } catch (const ConfigError&) {
            ++fam.dropped_infeasible;
            continue;
        }
        if (mc.max_residual(mis, vgrid) > 1e-10) {
            ++fam.dropped_infeasible;
            continue;
        }
        const double psi = mc.psi_summary();
        if (spec.kind == FamilySpec::Kind::GoodDeal) {
            double sharpe = psi * psi;
            const auto& atoms = mis.levy.atoms();
            for (std::size_t a = 0; a < n_atoms; ++a)
                sharpe += theta[a] * theta[a] * atoms[a].weight;
            if (sharpe > spec.good_deal_B) {
                ++fam.dropped_constraint;
                continue;
            }
        } else if (spec.kind == FamilySpec::Kind::Ball) {
            bool ok = std::abs(psi) <= spec.ball_B1;
            for (const double th : theta) ok = ok && std::abs(th) <= spec.ball_B2;
            if (!ok) {
                ++fam.dropped_constraint;
                continue;
            }
        }
        if (condition_I_constant(mis, theta, vgrid) > spec.condition_I_bound) {
            ++fam.dropped_condition_I;
            continue;
        }
        fam.candidates.push_back(std::move(mc));
    }

    if (fam.candidates.empty()) throw ConfigError("enumerate_family: empty feasible set");
    return fam;
}

RobustSurface robust_price(const model::MisspecifiedModel& mis, const model::Payoff& payoff,
                           const MeasureFamily& family, const sim::TimeGrid& tgrid,
                           const pide::SpaceGrid& xgrid) {
    if (family.candidates.empty()) throw ConfigError("robust_price: empty family");
    const std::size_t n_cand = family.candidates.size();
    std::vector<pide::ValueSurface> surfaces;
    surfaces.reserve(n_cand);
    // placeholder construction, then parallel solves into the slots
    for (std::size_t c = 0; c < n_cand; ++c) surfaces.emplace_back(tgrid, xgrid);
    parallel_for(n_cand, [&](std::size_t c) {
        const auto& mc = family.candidates[c];
        const auto theta = mc.theta_summary();
        std::vector<double> scale(theta.size());
        for (std::size_t a = 0; a < theta.size(); ++a) scale[a] = 1.0 - theta[a];
        model::MisspecifiedModel tilted = mis;
        tilted.levy = mis.levy.scaled(scale);
        surfaces[c] = pide::solve_pide(tilted, payoff, tgrid, xgrid);
    });

    RobustSurface rs(surfaces.front());
    rs.candidates = std::move(surfaces);
    const int nt = rs.upper.n_times(), nx = rs.upper.n_prices();
    rs.argmax.assign(static_cast<std::size_t>(nt) * nx, 0);
    for (int k = 0; k < nt; ++k)
        for (int j = 0; j < nx; ++j) {
            double best = rs.candidates[0].value_at(k, j);
            std::int16_t arg = 0;
            for (std::size_t c = 1; c < n_cand; ++c) {
                const double v = rs.candidates[c].value_at(k, j);
                if (v > best) {
                    best = v;
                    arg = static_cast<std::int16_t>(c);
                }
            }
            rs.upper.value_at(k, j) = best;
            rs.argmax[static_cast<std::size_t>(k) * nx + j] = arg;
        }
    rs.upper.extract_derivatives();
    rs.upper.scheme.method = "pointwise-max of " + std::to_string(n_cand) + " candidates";
    return rs;
}

hedge::SubmartingaleReport robust_hedge_test(const model::TrueModel& truth,
                                             const model::MisspecifiedModel& mis,
                                             const RobustSurface& rs,
                                             const MeasureFamily& family,
                                             const model::ValidationGrid& vgrid,
                                             const sim::TimeGrid& path_grid,
                                             const hedge::HedgeOptions& options, int n_paths,
                                             std::uint64_t seed) {
    if (!truth.rate.is_zero() || !mis.rate.is_zero())
        throw ConfigError("robust_hedge_test: requires a zero interest rate");
    const auto dom = model::check_domination(truth, mis, vgrid);
    if (!dom.pass) throw ConfigError("robust_hedge_test: domination condition fails");

    hedge::SubmartingaleReport rep;
    rep.checkpoints = options.checkpoints;
    rep.all_pass = true;
    for (const auto& mc : family.candidates) {
        const auto paths = sim::simulate_true_under_Q(truth, mc, path_grid, n_paths, seed);
        const auto hr = hedge::run_delta_hedge(paths, rs.upper, truth.rate, options);
        hedge::MeasureVerdict v;
        v.label = mc.label();
        v.psi = mc.psi_summary();
        v.theta = mc.theta_summary();
        v.n_excluded = hr.n_excluded;
        v.nonnegative_pass = true;
        v.monotone_pass = true;
        for (std::size_t c = 0; c < options.checkpoints.size(); ++c) {
            const auto st = hr.stats(c);
            v.means.push_back(st.mean);
            v.stderrs.push_back(st.stderr_);
            if (st.mean < -3.0 * st.stderr_) v.nonnegative_pass = false;
        }
        for (std::size_t c = 0; c + 1 < options.checkpoints.size(); ++c) {
            const auto st = hr.diff_stats(c);
            v.diff_means.push_back(st.mean);
            v.diff_stderrs.push_back(st.stderr_);
            if (st.mean < -3.0 * st.stderr_) v.monotone_pass = false;
        }
        rep.all_pass = rep.all_pass && v.nonnegative_pass && v.monotone_pass;
        rep.measures.push_back(std::move(v));
    }
    return rep;
}

}  // namespace jumphedge::robust
