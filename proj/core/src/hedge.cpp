#include "jumphedge/hedge.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "jumphedge/errors.hpp"
#include "jumphedge/threading.hpp"

namespace jumphedge::hedge {

namespace {

std::vector<int> checkpoint_nodes(const sim::TimeGrid& grid,
                                  const std::vector<double>& checkpoints) {
    std::vector<int> nodes;
    nodes.reserve(checkpoints.size());
    for (const double cp : checkpoints) {
        const int k = grid.index_of_time(cp);
        if (k < 0)
            throw ConfigError("checkpoint " + std::to_string(cp) +
                              " does not coincide with a path-grid node");
        nodes.push_back(k);
    }
    if (!std::is_sorted(nodes.begin(), nodes.end()))
        throw ConfigError("checkpoints must be increasing");
    return nodes;
}

struct Bounds {
    double lo, hi;
    bool inside(double s) const { return s >= lo && s <= hi; }
};

Bounds exclusion_bounds(const pide::ValueSurface& vs, double budget) {
    const double w = vs.xgrid_spec().x_max - vs.xgrid_spec().x_min;
    return {vs.xgrid_spec().x_min - budget * w, vs.xgrid_spec().x_max + budget * w};
}

CheckpointStats stats_of(const std::vector<double>& xs) {
    CheckpointStats st;
    const std::size_t n = xs.size();
    if (n == 0) return st;
    double sum = 0.0;
    for (const double v : xs) sum += v;
    st.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (const double v : xs) {
            const double d = v - st.mean;
            ss += d * d;
        }
        st.stderr_ = std::sqrt(ss / (static_cast<double>(n) * (static_cast<double>(n) - 1.0)));
    }
    return st;
}

}  // namespace

CheckpointStats HedgeResult::stats(std::size_t cp) const {
    std::vector<double> xs;
    xs.reserve(outcomes.size());
    for (const auto& o : outcomes)
        if (!o.excluded) xs.push_back(o.error_disc[cp]);
    return stats_of(xs);
}

CheckpointStats HedgeResult::diff_stats(std::size_t cp) const {
    std::vector<double> xs;
    xs.reserve(outcomes.size());
    for (const auto& o : outcomes)
        if (!o.excluded) xs.push_back(o.error_disc[cp + 1] - o.error_disc[cp]);
    return stats_of(xs);
}

sim::McResult HedgeResult::terminal_error_stats() const {
    std::vector<double> xs;
    xs.reserve(outcomes.size());
    for (const auto& o : outcomes)
        if (!o.excluded) xs.push_back(o.terminal_error);
    const auto st = stats_of(xs);
    return {st.mean, st.stderr_, static_cast<int>(xs.size())};
}

nlohmann::ordered_json HedgeResult::to_json() const {
    nlohmann::ordered_json means = nlohmann::ordered_json::array();
    nlohmann::ordered_json errs = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        const auto st = stats(c);
        means.push_back(st.mean);
        errs.push_back(st.stderr_);
    }
    const auto term = terminal_error_stats();
    return {{"checkpoints", checkpoints},
            {"initial_value", initial_value},
            {"means", means},
            {"stderrs", errs},
            {"terminal_error_mean", term.mean},
            {"terminal_error_stderr", term.stderr_},
            {"n_paths", outcomes.size()},
            {"n_excluded", n_excluded}};
}

void HedgeResult::write_terminal_csv(std::ostream& os) const {
    os << "path_id,terminal_error,excluded\n";
    char buf[96];
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%d\n", i, outcomes[i].terminal_error,
                      outcomes[i].excluded ? 1 : 0);
        os << buf;
    }
}

HedgeResult run_delta_hedge(const sim::PathSet& true_paths, const pide::ValueSurface& vs,
                            const model::RateCurve& rate, const HedgeOptions& options) {
    if (true_paths.paths.empty()) throw ConfigError("run_delta_hedge: empty path set");
    if (true_paths.grid.t0 != 0.0)
        throw ConfigError("run_delta_hedge: paths must start at time 0");
    if (std::abs(true_paths.grid.t1 - vs.tgrid().t1) > 1e-12)
        throw ConfigError("run_delta_hedge: paths and surface have different horizons");
    const auto cp_nodes = checkpoint_nodes(true_paths.grid, options.checkpoints);
    const Bounds bounds = exclusion_bounds(vs, options.extrapolation_budget);
    const double T = true_paths.grid.t1;

    HedgeResult hr;
    hr.checkpoints = options.checkpoints;
    hr.discount_T = rate.discount(0.0, T);
    hr.outcomes.resize(true_paths.size());

    parallel_for(true_paths.size(), [&](std::size_t p) {
        const sim::Path& path = true_paths.paths[p];
        PathOutcome& out = hr.outcomes[p];
        if (path.truncated) {
            out.excluded = true;
            return;
        }
        out.error_disc.assign(cp_nodes.size(), 0.0);
        const double x0 = path.values.front();
        const double v0 = vs.value(0.0, x0);
        double p_disc = v0;
        std::size_t cp = 0;
        // discounted stock at the previous event
        double m_prev = 1.0;
        double s_tilde_prev = x0;
        for (std::size_t i = 1; i < path.times.size(); ++i) {
            const double t_prev = path.times[i - 1];
            const double s_prev = path.values[i - 1];
            if (!bounds.inside(s_prev)) {
                out.excluded = true;
                return;
            }
            const double delta_prev = vs.delta(t_prev, s_prev);
            const double m_i = (path.times[i] == t_prev)
                                   ? m_prev
                                   : m_prev * rate.discount(t_prev, path.times[i]);
            const double s_tilde_i = path.values[i] / m_i;
            p_disc += delta_prev * (s_tilde_i - s_tilde_prev);
            m_prev = m_i;
            s_tilde_prev = s_tilde_i;
            while (cp < cp_nodes.size() &&
                   static_cast<std::int32_t>(i) == path.node_event[cp_nodes[cp]]) {
                out.error_disc[cp] =
                    p_disc - vs.value(path.times[i], path.values[i]) / m_i;
                ++cp;
            }
        }
        const double s_T = path.values.back();
        if (!bounds.inside(s_T)) {
            out.excluded = true;
            return;
        }
        // checkpoints at t = 0 (if any) are exactly zero by construction
        for (std::size_t c = 0; c < cp_nodes.size(); ++c)
            if (cp_nodes[c] == 0) out.error_disc[c] = 0.0;
        out.terminal_value = s_T;
        out.terminal_surface = vs.value(T, s_T);
        out.trading_pnl = p_disc - v0;
        out.terminal_error = (p_disc - out.terminal_surface / hr.discount_T) * hr.discount_T;
    });

    hr.initial_value = vs.value(0.0, true_paths.paths.front().values.front());
    for (const auto& o : hr.outcomes)
        if (o.excluded) ++hr.n_excluded;
    return hr;
}

double terminal_identity_residual(const HedgeResult& hr, const model::Payoff& payoff) {
    double sum_e = 0.0, sum_h = 0.0, sum_pnl = 0.0;
    long n = 0;
    for (const auto& o : hr.outcomes) {
        if (o.excluded) continue;
        sum_e += o.terminal_error / hr.discount_T;
        sum_h += payoff.value(o.terminal_value) / hr.discount_T;
        sum_pnl += o.trading_pnl;
        ++n;
    }
    if (n == 0) return 0.0;
    const double inv = 1.0 / static_cast<double>(n);
    return std::abs(sum_e * inv - (hr.initial_value + sum_pnl * inv - sum_h * inv));
}

CheckpointStats DecompositionResult::sum_stats(std::size_t cp) const {
    std::vector<double> xs;
    xs.reserve(per_path.size());
    for (std::size_t p = 0; p < per_path.size(); ++p)
        if (!excluded[p]) xs.push_back(per_path[p][cp].sum());
    return stats_of(xs);
}

DecompositionResult hedging_error_decomposed(const sim::PathSet& true_paths,
                                             const pide::ValueSurface& vs,
                                             const model::TrueModel& truth,
                                             const model::MisspecifiedModel& mis,
                                             const HedgeOptions& options) {
    const auto cp_nodes = checkpoint_nodes(true_paths.grid, options.checkpoints);
    const Bounds bounds = exclusion_bounds(vs, options.extrapolation_budget);
    const auto& atoms = mis.levy.atoms();
    const auto& true_atoms = truth.levy.atoms();
    if (atoms.size() != true_atoms.size())
        throw ConfigError("hedging_error_decomposed: models must share Levy atoms");
    for (std::size_t a = 0; a < atoms.size(); ++a)
        if (atoms[a].mark != true_atoms[a].mark || atoms[a].weight != true_atoms[a].weight)
            throw ConfigError("hedging_error_decomposed: models must share Levy atoms");

    DecompositionResult res;
    res.checkpoints = options.checkpoints;
    res.per_path.resize(true_paths.size());
    res.excluded.assign(true_paths.size(), 0);

    parallel_for(true_paths.size(), [&](std::size_t p) {
        const sim::Path& path = true_paths.paths[p];
        auto& rows = res.per_path[p];
        rows.assign(cp_nodes.size(), DecompositionTerms{});
        if (path.truncated) {
            res.excluded[p] = 1;
            return;
        }
        DecompositionTerms acc;
        std::size_t cp = 0, jp = 0;
        double m_prev = 1.0;
        for (std::size_t i = 1; i < path.times.size(); ++i) {
            const double a_t = path.times[i - 1];
            const double s = path.values[i - 1];
            if (!bounds.inside(s)) {
                res.excluded[p] = 1;
                return;
            }
            const double dt = path.times[i] - a_t;
            if (dt > 0.0) {
                const double g = mis.gamma(a_t, s, 0.0);
                const double sg = truth.sigma(a_t, s, 0.0);
                acc.quadratic +=
                    0.5 * vs.gamma(a_t, s) * s * s * (g * g - sg * sg) / m_prev * dt;
                const double v_s = vs.value(a_t, s);
                const double d_s = vs.delta(a_t, s);
                for (const auto& atom : atoms) {
                    const double gt = mis.gamma_tilde(a_t, s, atom.mark);
                    const double et = truth.eta(a_t, s, atom.mark);
                    const double v_gt = vs.value(a_t, s * (1.0 + gt));
                    const double v_et = vs.value(a_t, s * (1.0 + et));
                    acc.compensator +=
                        atom.weight * (v_gt - v_et + d_s * s * (et - gt)) / m_prev * dt;
                    acc.martingale +=
                        atom.weight * (v_et - v_s - s * et * d_s) / m_prev * dt;
                }
            }
            const double m_i =
                (dt == 0.0) ? m_prev : m_prev * truth.rate.discount(a_t, path.times[i]);
            if (jp < path.jumps.size() &&
                static_cast<std::size_t>(path.jumps[jp].event_index) == i) {
                const auto& j = path.jumps[jp];
                const double t_j = path.times[i];
                const double s_left = j.value_before;
                const double v_post = vs.value(t_j, path.values[i]);
                const double v_left = vs.value(t_j, s_left);
                const double d_left = vs.delta(t_j, s_left);
                const double ds = path.values[i] - s_left;
                acc.martingale -= (v_post - v_left - ds * d_left) / m_i;
                ++jp;
            }
            m_prev = m_i;
            while (cp < cp_nodes.size() &&
                   static_cast<std::int32_t>(i) == path.node_event[cp_nodes[cp]]) {
                rows[cp] = acc;
                ++cp;
            }
        }
        for (std::size_t c = 0; c < cp_nodes.size(); ++c)
            if (cp_nodes[c] == 0) rows[c] = DecompositionTerms{};
    });

    for (const char e : res.excluded)
        if (e) ++res.n_excluded;
    return res;
}

nlohmann::ordered_json PiReport::to_json() const {
    return {{"steps_checked", steps_checked},
            {"decreases", decreases},
            {"increases", increases},
            {"min_increment", min_increment},
            {"max_increment", max_increment},
            {"tol", tol},
            {"nondecreasing_pass", nondecreasing_pass},
            {"nonincreasing_pass", nonincreasing_pass}};
}

PiReport pi_monotonicity_check(const sim::PathSet& true_paths, const pide::ValueSurface& vs,
                               const model::TrueModel& truth,
                               const model::MisspecifiedModel& mis, double tol_scale) {
    PiReport rep;
    rep.tol = tol_scale * std::max(vs.max_abs_value(), 1e-300);
    rep.min_increment = HUGE_VAL;
    rep.max_increment = -HUGE_VAL;
    const auto& atoms = mis.levy.atoms();

    std::vector<double> mins(true_paths.size(), HUGE_VAL), maxs(true_paths.size(), -HUGE_VAL);
    std::vector<long> decs(true_paths.size(), 0), incs(true_paths.size(), 0),
        steps(true_paths.size(), 0);

    parallel_for(true_paths.size(), [&](std::size_t p) {
        const sim::Path& path = true_paths.paths[p];
        if (path.truncated) return;
        for (std::size_t i = 1; i < path.times.size(); ++i) {
            const double a_t = path.times[i - 1];
            const double dt = path.times[i] - a_t;
            if (dt <= 0.0) continue;
            const double s = path.values[i - 1];
            const double g = mis.gamma(a_t, s, 0.0);
            const double sg = truth.sigma(a_t, s, 0.0);
            double inc = 0.5 * vs.gamma(a_t, s) * s * s * (g * g - sg * sg);
            const double d_s = vs.delta(a_t, s);
            for (const auto& atom : atoms) {
                const double gt = mis.gamma_tilde(a_t, s, atom.mark);
                const double et = truth.eta(a_t, s, atom.mark);
                inc += atom.weight * (vs.value(a_t, s * (1.0 + gt)) -
                                      vs.value(a_t, s * (1.0 + et)) + d_s * s * (et - gt));
            }
            inc *= dt;
            mins[p] = std::min(mins[p], inc);
            maxs[p] = std::max(maxs[p], inc);
            if (inc < -rep.tol) ++decs[p];
            if (inc > rep.tol) ++incs[p];
            ++steps[p];
        }
    });
    for (std::size_t p = 0; p < true_paths.size(); ++p) {
        rep.min_increment = std::min(rep.min_increment, mins[p]);
        rep.max_increment = std::max(rep.max_increment, maxs[p]);
        rep.decreases += decs[p];
        rep.increases += incs[p];
        rep.steps_checked += steps[p];
    }
    rep.nondecreasing_pass = rep.decreases == 0;
    rep.nonincreasing_pass = rep.increases == 0;
    return rep;
}

nlohmann::ordered_json MeasureVerdict::to_json() const {
    return {{"measure", label},
            {"psi", psi},
            {"theta", theta},
            {"means", means},
            {"stderrs", stderrs},
            {"diff_means", diff_means},
            {"diff_stderrs", diff_stderrs},
            {"n_excluded", n_excluded},
            {"nonnegative_pass", nonnegative_pass},
            {"monotone_pass", monotone_pass}};
}

nlohmann::ordered_json SubmartingaleReport::to_json() const {
    nlohmann::ordered_json per = nlohmann::ordered_json::array();
    for (const auto& m : measures) per.push_back(m.to_json());
    return {{"checkpoints", checkpoints}, {"per_measure", per}, {"pass", all_pass}};
}

SubmartingaleReport submartingale_test(const model::TrueModel& truth,
                                       const model::MisspecifiedModel& mis,
                                       const pide::ValueSurface& vs,
                                       const std::vector<sim::MeasureChange>& measures,
                                       const model::ValidationGrid& vgrid,
                                       const sim::TimeGrid& path_grid,
                                       const HedgeOptions& options, int n_paths,
                                       std::uint64_t seed) {
    const auto dom = model::check_domination(truth, mis, vgrid);
    if (!dom.pass)
        throw ConfigError("submartingale_test: domination condition fails on the grid");

    SubmartingaleReport rep;
    rep.checkpoints = options.checkpoints;
    rep.all_pass = true;
    for (const auto& mc : measures) {
        if (!mc.theta_nonnegative(mis, vgrid))
            throw ConfigError("submartingale_test: measure is not in Q0 (theta < 0 somewhere)");
        if (mc.max_residual(mis, vgrid) > 1e-10)
            throw ConfigError("submartingale_test: measure fails the martingale condition");

        const auto paths = sim::simulate_true_under_Q(truth, mc, path_grid, n_paths, seed);
        const auto hr = run_delta_hedge(paths, vs, truth.rate, options);

        MeasureVerdict v;
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

nlohmann::ordered_json PriceDominationReport::to_json() const {
    return {{"model_price", model_price},
            {"true_mc_mean", true_mc_mean},
            {"true_mc_stderr", true_mc_stderr},
            {"pass", pass}};
}

PriceDominationReport price_domination_check(const pide::ValueSurface& vs,
                                             const model::TrueModel& truth,
                                             const model::Payoff& payoff,
                                             const sim::TimeGrid& grid, int n_paths,
                                             std::uint64_t seed) {
    PriceDominationReport rep;
    rep.model_price = vs.value(0.0, truth.x0);
    const auto paths = sim::simulate_true(truth, grid, n_paths, seed);
    const double m_T = truth.rate.discount(0.0, grid.t1);
    const auto mc = sim::mc_estimate(
        paths, [&](const sim::Path& p) { return payoff.value(p.terminal()) / m_T; });
    rep.true_mc_mean = mc.mean;
    rep.true_mc_stderr = mc.stderr_;
    rep.pass = rep.model_price >= rep.true_mc_mean - 3.0 * rep.true_mc_stderr;
    return rep;
}

}  // namespace jumphedge::hedge
