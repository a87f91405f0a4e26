#include "jumphedge/sim.hpp"

#include <algorithm>
#include <cmath>

#include "jumphedge/errors.hpp"
#include "jumphedge/rng.hpp"
#include "jumphedge/threading.hpp"

namespace jumphedge::sim {

bool Path::is_jump_event(std::size_t i) const {
    for (const auto& j : jumps)
        if (static_cast<std::size_t>(j.event_index) == i) return true;
    return false;
}

void write_paths_csv(const PathSet& ps, std::ostream& os) {
    os << "path_id,time,value,is_jump,atom_index\n";
    char buf[128];
    for (std::size_t p = 0; p < ps.paths.size(); ++p) {
        const Path& path = ps.paths[p];
        std::size_t jp = 0;
        for (std::size_t i = 0; i < path.times.size(); ++i) {
            int is_jump = 0, atom = -1;
            if (jp < path.jumps.size() &&
                static_cast<std::size_t>(path.jumps[jp].event_index) == i) {
                is_jump = 1;
                atom = path.jumps[jp].atom;
                ++jp;
            }
            std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%d,%d\n", p, path.times[i],
                          path.values[i], is_jump, atom);
            os << buf;
        }
    }
}

namespace {

enum class FatalPolicy { Throw, Truncate };

struct EngineSpec {
    const model::RateCurve* rate;
    const model::CoefficientField* vol;
    const model::CoefficientField* jump;
    const model::LevyMeasure* levy;
    const MeasureChange* tilt = nullptr;  // nullptr: reference measure
    bool flow = false;
    FatalPolicy fatal = FatalPolicy::Throw;
    std::string model_fingerprint;
    std::string measure_label = "P";
};

struct Proposal {
    double time;
    std::int32_t atom;
};

// Piecewise-constant proposal intensity for one atom. Exact under constant
// or piecewise-in-t tilts; an upper bound (w * (1 - theta_floor)) when the
// tilt is state-dependent, with thinning applied at acceptance time.
struct IntensityProfile {
    std::vector<double> breakpoints;  // shared segment ends (may be empty)
    std::vector<double> rates;        // one per segment
    bool thinning = false;
    double bound_rate(double t) const {
        const std::size_t i =
            std::upper_bound(breakpoints.begin(), breakpoints.end(), t) - breakpoints.begin();
        return rates[i];
    }
};

IntensityProfile make_profile(const EngineSpec& spec, std::size_t atom_index, double weight) {
    IntensityProfile p;
    if (spec.tilt == nullptr || spec.tilt->is_reference()) {
        p.rates = {weight};
        return p;
    }
    const MeasureChange& mc = *spec.tilt;
    if (mc.state_dependent()) {
        if (mc.n_atoms() <= atom_index)
            throw ConfigError("simulate under Q: theta floor missing for an atom");
        const double floor = mc.theta_floor(atom_index);
        if (!(floor < 1.0)) throw ConfigError("simulate under Q: theta floor must be < 1");
        p.rates = {weight * (1.0 - floor)};
        p.thinning = true;
        return p;
    }
    // Piecewise-in-t thetas give exact piecewise intensities.
    const auto& desc = mc.descriptor();
    if (desc.value("kind", "") == std::string("piecewise")) {
        p.breakpoints = desc.at("breakpoints").get<std::vector<double>>();
        for (std::size_t seg = 0; seg <= p.breakpoints.size(); ++seg) {
            const double t_probe =
                seg < p.breakpoints.size()
                    ? (seg == 0 ? 0.0 : p.breakpoints[seg - 1])
                    : (p.breakpoints.empty() ? 0.0 : p.breakpoints.back());
            const double th = mc.theta(t_probe, 1.0, atom_index, 0.0);
            const double rate = weight * (1.0 - th);
            if (rate < 0.0) throw ConfigError("simulate under Q: (1 - theta) w is negative");
            p.rates.push_back(rate);
        }
        return p;
    }
    const double th = mc.theta(0.0, 1.0, atom_index, 0.0);
    const double rate = weight * (1.0 - th);
    if (rate < 0.0) throw ConfigError("simulate under Q: (1 - theta) w is negative");
    p.rates = {rate};
    return p;
}

// Exact arrivals of an inhomogeneous (piecewise-constant) Poisson clock on
// [t0, t1), one Exp(1) draw per arrival attempt via hazard accumulation.
void draw_arrivals(CounterRng& rng, const IntensityProfile& prof, double t0, double t1,
                   std::int32_t atom, std::vector<Proposal>& out) {
    double t = t0;
    while (t < t1) {
        double budget = rng.next_exponential();
        double pos = t;
        bool emitted = false;
        while (pos < t1) {
            const double rate = prof.bound_rate(pos);
            double seg_end = t1;
            for (const double b : prof.breakpoints)
                if (b > pos && b < seg_end) seg_end = b;
            if (rate <= 0.0) {
                pos = seg_end;
                continue;
            }
            const double span = (seg_end - pos) * rate;
            if (budget <= span) {
                pos += budget / rate;
                if (pos < t1) {
                    out.push_back({pos, atom});
                    emitted = true;
                }
                break;
            }
            budget -= span;
            pos = seg_end;
        }
        if (!emitted) return;
        t = pos;
    }
}

struct EventRecorder {
    Path* path;
    bool store_dw;
    void start(double t, double v) {
        path->times.push_back(t);
        path->values.push_back(v);
        if (store_dw) path->dW.push_back(0.0);
    }
    void event(double t, double v, double dw) {
        path->times.push_back(t);
        path->values.push_back(v);
        if (store_dw) path->dW.push_back(dw);
    }
    void jump(std::int32_t atom, double before) {
        path->jumps.push_back(
            {static_cast<std::int32_t>(path->times.size() - 1), atom, before});
    }
    void node() {
        path->node_event.push_back(static_cast<std::int32_t>(path->times.size() - 1));
    }
};

// Simulates one path (or one coupled pair when states.size() == 2) on the
// event-augmented grid. Returns false if truncated.
bool simulate_one(const EngineSpec& spec, const TimeGrid& grid, std::uint64_t seed,
                  std::uint64_t stream, const std::vector<double>& x0s,
                  const std::vector<IntensityProfile>& profiles, std::vector<Path*> out,
                  std::vector<double>* xi_out) {
    CounterRng rng(seed, stream);
    const auto& atoms = spec.levy->atoms();
    const bool has_diffusion = !spec.vol->identically_zero();
    const bool tilted = spec.tilt != nullptr && !spec.tilt->is_reference();

    std::vector<Proposal> proposals;
    for (std::size_t a = 0; a < atoms.size(); ++a)
        draw_arrivals(rng, profiles[a], grid.t0, grid.t1, static_cast<std::int32_t>(a),
                      proposals);
    std::stable_sort(proposals.begin(), proposals.end(),
                     [](const Proposal& l, const Proposal& r) {
                         return l.time != r.time ? l.time < r.time : l.atom < r.atom;
                     });

    std::vector<double> S = x0s;
    double xi = 1.0;
    std::vector<EventRecorder> rec;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i]->stream_id = stream;
        rec.push_back({out[i], has_diffusion});
        rec[i].start(grid.t0, S[i]);
        rec[i].node();
    }
    if (xi_out) xi_out->push_back(xi);

    double t = grid.t0;

    auto advance = [&](double to) {
        const double dt = to - t;
        if (dt <= 0.0) return;
        double dw = 0.0;
        if (has_diffusion) dw = std::sqrt(dt) * rng.next_normal();
        const double rate_int = spec.rate->integral(t, to);
        // xi factor uses the left value of the primary state.
        if (spec.flow) {
            const double s_left = S[0];
            const double rp = spec.vol->rho_prime(t, s_left, 0.0);
            double comp = 0.0;
            for (const auto& a : atoms) comp += spec.jump->rho_prime(t, s_left, a.mark) * a.weight;
            xi *= std::exp((-comp - 0.5 * rp * rp) * dt + rp * dw);
        }
        for (std::size_t i = 0; i < S.size(); ++i) {
            const double s_left = S[i];
            const double vol = spec.vol->operator()(t, s_left, 0.0);
            double comp = 0.0;
            for (const auto& a : atoms)
                comp += spec.jump->operator()(t, s_left, a.mark) * a.weight;
            double drift = rate_int - (comp + 0.5 * vol * vol) * dt;
            if (tilted) drift -= vol * spec.tilt->psi(t, s_left) * dt;
            S[i] *= std::exp(drift + vol * dw);
            if (!std::isfinite(S[i]) || S[i] <= 0.0)
                throw NumericalError("simulation produced a non-finite or non-positive price");
        }
        t = to;
        for (std::size_t i = 0; i < S.size(); ++i) rec[i].event(t, S[i], dw);
        if (xi_out) xi_out->push_back(xi);
    };

    auto apply_jump = [&](const Proposal& pr) -> bool {
        // returns false if the path must truncate
        if (profiles[pr.atom].thinning) {
            const double u = rng.next_uniform();
            const double th = spec.tilt->theta(pr.time, S[0], pr.atom, atoms[pr.atom].mark);
            if (!(th < 1.0)) throw ConfigError("simulate under Q: theta >= 1 sampled");
            const double p =
                (1.0 - th) / (1.0 - spec.tilt->theta_floor(pr.atom));
            if (p > 1.0 + 1e-12)
                throw NumericalError("simulate under Q: theta fell below its declared floor");
            if (u > p) return true;  // proposal rejected, nothing happens
        }
        const double z = atoms[pr.atom].mark;
        // check all states first so that truncation is joint
        for (const double s_left : S) {
            if (1.0 + spec.jump->operator()(pr.time, s_left, z) <= 0.0) {
                if (spec.fatal == FatalPolicy::Throw)
                    throw NumericalError(
                        "jump factor (1 + coefficient) is non-positive; price would die");
                return false;
            }
        }
        if (spec.flow) {
            const double rpj = spec.jump->rho_prime(pr.time, S[0], z);
            if (1.0 + rpj <= 0.0) {
                if (spec.fatal == FatalPolicy::Throw)
                    throw NumericalError("flow derivative: rho_tilde' <= -1 encountered");
                return false;
            }
            xi *= 1.0 + rpj;
        }
        for (std::size_t i = 0; i < S.size(); ++i) {
            const double before = S[i];
            S[i] = before * (1.0 + spec.jump->operator()(pr.time, before, z));
            rec[i].event(pr.time, S[i], 0.0);
            rec[i].jump(pr.atom, before);
        }
        if (xi_out) xi_out->push_back(xi);
        return true;
    };

    std::size_t pi = 0;
    for (int k = 1; k <= grid.n_steps; ++k) {
        const double t_node = grid.node(k);
        while (pi < proposals.size() && proposals[pi].time < t_node) {
            advance(proposals[pi].time);
            if (!apply_jump(proposals[pi])) {
                for (auto* p : out) {
                    p->truncated = true;
                    p->truncated_time = proposals[pi].time;
                }
                return false;
            }
            ++pi;
        }
        advance(t_node);
        for (auto& r : rec) r.node();
    }
    return true;
}

PathSet run_engine(const EngineSpec& spec, const TimeGrid& grid, double x0, int n_paths,
                   std::uint64_t seed, FlowPathSet* flow_out = nullptr,
                   CoupledPathSet* coupled_out = nullptr, double y0 = 0.0) {
    if (n_paths < 1) throw ConfigError("simulate: need at least one path");
    if (!(x0 > 0.0)) throw ConfigError("simulate: initial price must be positive");

    std::vector<IntensityProfile> profiles;
    const auto& atoms = spec.levy->atoms();
    profiles.reserve(atoms.size());
    for (std::size_t a = 0; a < atoms.size(); ++a)
        profiles.push_back(make_profile(spec, a, atoms[a].weight));

    PathSet ps;
    ps.grid = grid;
    ps.model_fingerprint = spec.model_fingerprint;
    ps.measure_label = spec.measure_label;
    ps.seed = seed;
    ps.paths.resize(n_paths);

    if (coupled_out) {
        coupled_out->lower = ps;
        coupled_out->upper = ps;
        parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t i) {
            std::vector<Path*> out = {&coupled_out->lower.paths[i],
                                      &coupled_out->upper.paths[i]};
            simulate_one(spec, grid, seed, i, {x0, y0}, profiles, out, nullptr);
        });
        return ps;  // unused by the coupled entry point
    }

    if (flow_out) flow_out->xi.resize(n_paths);
    parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t i) {
        std::vector<Path*> out = {&ps.paths[i]};
        simulate_one(spec, grid, seed, i, {x0}, profiles, out,
                     flow_out ? &flow_out->xi[i] : nullptr);
    });
    return ps;
}

}  // namespace

PathSet simulate_true(const model::TrueModel& truth, const TimeGrid& grid, int n_paths,
                      std::uint64_t seed) {
    EngineSpec spec{&truth.rate, &truth.sigma, &truth.eta, &truth.levy};
    spec.model_fingerprint = truth.fingerprint();
    return run_engine(spec, grid, truth.x0, n_paths, seed);
}

PathSet simulate_misspecified(const model::MisspecifiedModel& mis, double x0,
                              const TimeGrid& grid, int n_paths, std::uint64_t seed) {
    EngineSpec spec{&mis.rate, &mis.gamma, &mis.gamma_tilde, &mis.levy};
    spec.model_fingerprint = mis.fingerprint();
    return run_engine(spec, grid, x0, n_paths, seed);
}

CoupledPathSet simulate_coupled(const model::MisspecifiedModel& mis, double x, double y,
                                const TimeGrid& grid, int n_pairs, std::uint64_t seed) {
    if (!(0.0 < x && x < y)) throw ConfigError("simulate_coupled: require 0 < x < y");
    EngineSpec spec{&mis.rate, &mis.gamma, &mis.gamma_tilde, &mis.levy};
    spec.model_fingerprint = mis.fingerprint();
    spec.fatal = FatalPolicy::Truncate;
    CoupledPathSet out;
    run_engine(spec, grid, x, n_pairs, seed, nullptr, &out, y);
    return out;
}

FlowPathSet simulate_flow_derivative(const model::MisspecifiedModel& mis, double x0,
                                     const TimeGrid& grid, int n_paths, std::uint64_t seed) {
    EngineSpec spec{&mis.rate, &mis.gamma, &mis.gamma_tilde, &mis.levy};
    spec.model_fingerprint = mis.fingerprint();
    spec.flow = true;
    FlowPathSet out;
    out.base = run_engine(spec, grid, x0, n_paths, seed, &out);
    return out;
}

PathSet simulate_under_Q(const model::MisspecifiedModel& mis, const MeasureChange& mc, double x0,
                         const TimeGrid& grid, int n_paths, std::uint64_t seed) {
    EngineSpec spec{&mis.rate, &mis.gamma, &mis.gamma_tilde, &mis.levy};
    spec.tilt = &mc;
    spec.model_fingerprint = mis.fingerprint();
    spec.measure_label = mc.label();
    return run_engine(spec, grid, x0, n_paths, seed);
}

PathSet simulate_true_under_Q(const model::TrueModel& truth, const MeasureChange& mc,
                              const TimeGrid& grid, int n_paths, std::uint64_t seed) {
    EngineSpec spec{&truth.rate, &truth.sigma, &truth.eta, &truth.levy};
    spec.tilt = &mc;
    spec.model_fingerprint = truth.fingerprint();
    spec.measure_label = mc.label();
    return run_engine(spec, grid, truth.x0, n_paths, seed);
}

double density_process(const MeasureChange& mc, const Path& path,
                       const model::LevyMeasure& levy) {
    if (path.truncated) throw ConfigError("density_process: truncated path");
    const auto& atoms = levy.atoms();
    const bool has_dw = !path.dW.empty();
    if (!has_dw && !mc.psi_is_zero() && !mc.is_reference())
        throw ConfigError("density_process: psi is nonzero but the path carries no Brownian "
                          "increments");

    double log_xi = 0.0;
    std::size_t jp = 0;
    for (std::size_t i = 1; i < path.times.size(); ++i) {
        const double a = path.times[i - 1];
        const double dt = path.times[i] - a;
        const double s_left = path.values[i - 1];
        if (dt > 0.0) {
            if (has_dw) {
                const double psi = mc.psi(a, s_left);
                log_xi += -psi * path.dW[i] - 0.5 * psi * psi * dt;
            }
            for (std::size_t at = 0; at < atoms.size(); ++at)
                log_xi += mc.theta(a, s_left, at, atoms[at].mark) * atoms[at].weight * dt;
        }
        if (jp < path.jumps.size() &&
            static_cast<std::size_t>(path.jumps[jp].event_index) == i) {
            const auto& j = path.jumps[jp];
            const double th =
                mc.theta(path.times[i], j.value_before, j.atom, atoms[j.atom].mark);
            if (!(th < 1.0)) throw NumericalError("density_process: theta >= 1 at a jump");
            log_xi += std::log1p(-th);
            ++jp;
        }
    }
    return std::exp(log_xi);
}

McResult mc_estimate(const PathSet& ps, const std::function<double(const Path&)>& functional) {
    if (ps.paths.size() < 2) throw ConfigError("mc_estimate: need at least two paths");
    const std::size_t n = ps.paths.size();
    std::vector<double> f(n);
    parallel_for(n, [&](std::size_t i) { f[i] = functional(ps.paths[i]); });
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(f[i])) throw NumericalError("mc_estimate: non-finite functional value");
        sum += f[i];
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = f[i] - mean;
        ss += d * d;
    }
    McResult r;
    r.mean = mean;
    r.stderr_ = std::sqrt(ss / (static_cast<double>(n) * (static_cast<double>(n) - 1.0)));
    r.n = static_cast<int>(n);
    return r;
}

}  // namespace jumphedge::sim
