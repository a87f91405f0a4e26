#include "jumphedge/model.hpp"

#include <cmath>
#include <cstdint>

#include "jumphedge/errors.hpp"

namespace jumphedge::model {

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

nlohmann::ordered_json TrueModel::descriptor() const {
    return {{"x0", x0},
            {"rate", rate.descriptor()},
            {"sigma", sigma.descriptor()},
            {"eta", eta.descriptor()},
            {"levy", levy.descriptor()}};
}

std::string TrueModel::fingerprint() const { return fnv1a_hex(descriptor().dump()); }

nlohmann::ordered_json MisspecifiedModel::descriptor() const {
    return {{"rate", rate.descriptor()},
            {"gamma", gamma.descriptor()},
            {"gamma_tilde", gamma_tilde.descriptor()},
            {"levy", levy.descriptor()},
            {"epsilon_floor", epsilon_floor}};
}

std::string MisspecifiedModel::fingerprint() const { return fnv1a_hex(descriptor().dump()); }

nlohmann::ordered_json CheckResult::to_json() const {
    return {{"name", name}, {"pass", pass},   {"worst", worst},
            {"t", at_t},    {"s", at_s},      {"z", at_z}};
}

bool ValidationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const CheckResult* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

nlohmann::ordered_json ValidationReport::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) arr.push_back(c.to_json());
    return {{"pass", all_pass()}, {"checks", arr}};
}

nlohmann::ordered_json DominationReport::to_json() const {
    return {{"pass", pass}, {"vol", vol.to_json()}, {"jump", jump.to_json()}};
}

namespace {

struct GridIter {
    const ValidationGrid& g;
    double t(int i) const { return g.t_max * i / (g.n_times - 1); }
    double s(int j) const {
        return g.s_min + (g.s_max - g.s_min) * j / (g.n_prices - 1);
    }
};

void check_grid(const ValidationGrid& grid) {
    if (grid.n_times < 2 || grid.n_prices < 2)
        throw ConfigError("validation grid: need at least 2 times and 2 prices");
    if (!(grid.s_min > 0.0)) throw ConfigError("validation grid: non-positive prices in grid");
    if (!(grid.s_min < grid.s_max)) throw ConfigError("validation grid: s_min must be < s_max");
}

// Tracks the worst (minimum or maximum) sampled value and where it occurred.
struct Worst {
    bool minimize;
    double value;
    double t = 0, s = 0, z = 0;
    explicit Worst(bool minimize_)
        : minimize(minimize_), value(minimize_ ? HUGE_VAL : -HUGE_VAL) {}
    void update(double v, double t_, double s_, double z_) {
        const bool better = minimize ? (v < value) : (v > value);
        if (better) {
            value = v;
            t = t_;
            s = s_;
            z = z_;
        }
    }
    CheckResult result(const std::string& name, bool pass) const {
        return {name, pass, value, t, s, z};
    }
};

}  // namespace

ValidationReport validate_models(const TrueModel& truth, const MisspecifiedModel& mis,
                                 const ValidationGrid& grid, const ValidationLimits& limits) {
    check_grid(grid);
    if (mis.levy.empty() && !mis.gamma_tilde.identically_zero())
        throw ConfigError("validate_models: jump coefficient is nonzero but atom list is empty");
    if (truth.levy.empty() && !truth.eta.identically_zero())
        throw ConfigError("validate_models: true jump coefficient is nonzero but atom list is empty");
    if (!(truth.x0 > 0.0)) throw ConfigError("validate_models: x0 must be positive");

    const GridIter it{grid};
    ValidationReport rep;

    Worst eta_floor(true);              // eta > -1
    Worst gt_floor(true);               // gamma_tilde > -1
    Worst rho_floor(true);              // rho_tilde' > -1 + eps
    Worst gamma_max(false);             // boundedness constant for gamma
    Worst rho_prime_max(false);         // max |rho'|
    Worst rho_tilde_prime_sq(false);    // sum of rho_tilde'^2 * w
    Worst log_moment(false);            // sum ln(1+gt)^2 w
    Worst log_gap(false);               // sum (gt - ln(1+gt)) w
    Worst sq_int(false);                // sigma^2 + sum eta^2 w (integrability proxy)

    const auto& atoms = mis.levy.atoms();
    for (int i = 0; i < grid.n_times; ++i) {
        const double t = it.t(i);
        for (int j = 0; j < grid.n_prices; ++j) {
            const double s = it.s(j);
            gamma_max.update(mis.gamma(t, s, 0.0), t, s, 0.0);
            rho_prime_max.update(std::abs(mis.gamma.rho_prime(t, s, 0.0)), t, s, 0.0);

            double sum_rp2 = 0.0, sum_log2 = 0.0, sum_gap = 0.0;
            for (const auto& a : atoms) {
                const double gt = mis.gamma_tilde(t, s, a.mark);
                const double rp = mis.gamma_tilde.rho_prime(t, s, a.mark);
                gt_floor.update(gt, t, s, a.mark);
                rho_floor.update(rp, t, s, a.mark);
                sum_rp2 += rp * rp * a.weight;
                if (gt > -1.0) {
                    const double lg = std::log1p(gt);
                    sum_log2 += lg * lg * a.weight;
                    sum_gap += (gt - lg) * a.weight;
                } else {
                    sum_log2 = HUGE_VAL;
                    sum_gap = HUGE_VAL;
                }
            }
            rho_tilde_prime_sq.update(sum_rp2, t, s, 0.0);
            log_moment.update(sum_log2, t, s, 0.0);
            log_gap.update(sum_gap, t, s, 0.0);
        }

        double sq = truth.sigma(t, 0.0, 0.0);
        sq *= sq;
        for (const auto& a : truth.levy.atoms()) {
            const double e = truth.eta(t, 0.0, a.mark);
            eta_floor.update(e, t, 0.0, a.mark);
            sq += e * e * a.weight;
        }
        sq_int.update(sq, t, 0.0, 0.0);
    }

    const bool no_true_jumps = truth.levy.empty();
    const bool no_mis_jumps = atoms.empty();
    rep.checks.push_back(eta_floor.result("eta > -1", no_true_jumps || eta_floor.value > -1.0));
    rep.checks.push_back(
        gt_floor.result("gamma_tilde > -1", no_mis_jumps || gt_floor.value > -1.0));
    rep.checks.push_back(rho_floor.result(
        "rho_tilde' > -1 + epsilon",
        no_mis_jumps || rho_floor.value > -1.0 + mis.epsilon_floor));
    rep.checks.push_back(
        gamma_max.result("gamma bounded above", std::isfinite(gamma_max.value)));
    rep.checks.push_back(
        rho_prime_max.result("|rho'| bounded", std::isfinite(rho_prime_max.value)));
    rep.checks.push_back(rho_tilde_prime_sq.result("integral rho_tilde'^2 <= L",
                                                   rho_tilde_prime_sq.value <= limits.bound_L));
    rep.checks.push_back(
        log_moment.result("integral ln(1+gamma_tilde)^2 <= B", log_moment.value <= limits.bound_B));
    rep.checks.push_back(log_gap.result("integral gamma_tilde - ln(1+gamma_tilde) <= B",
                                        log_gap.value <= limits.bound_B));
    rep.checks.push_back(
        sq_int.result("square integrability proxy finite", std::isfinite(sq_int.value)));
    return rep;
}

DominationReport check_domination(const TrueModel& truth, const MisspecifiedModel& mis,
                                  const ValidationGrid& grid) {
    check_grid(grid);
    const GridIter it{grid};
    DominationReport rep;

    // worst margin gamma - sigma (must be >= 0 everywhere)
    Worst vol_margin(true);
    // worst signed violation of the jump ordering (must be >= 0):
    //   eta >= 0 requires gamma_tilde - eta >= 0, eta < 0 requires eta - gamma_tilde >= 0
    Worst jump_margin(true);

    bool any_atom = false;
    for (int i = 0; i < grid.n_times; ++i) {
        const double t = it.t(i);
        const double sig = truth.sigma(t, 0.0, 0.0);
        for (int j = 0; j < grid.n_prices; ++j) {
            const double s = it.s(j);
            vol_margin.update(mis.gamma(t, s, 0.0) - sig, t, s, 0.0);
            for (const auto& a : mis.levy.atoms()) {
                any_atom = true;
                const double e = truth.eta(t, 0.0, a.mark);
                const double g = mis.gamma_tilde(t, s, a.mark);
                const double margin = (e >= 0.0) ? (g - e) : (e - g);
                jump_margin.update(margin, t, s, a.mark);
            }
        }
    }

    rep.vol = vol_margin.result("sigma <= gamma", vol_margin.value >= 0.0);
    rep.jump = jump_margin.result("sgn(gamma_tilde - eta) = sgn(eta)",
                                  !any_atom || jump_margin.value >= 0.0);
    rep.pass = rep.vol.pass && rep.jump.pass;
    return rep;
}

}  // namespace jumphedge::model
