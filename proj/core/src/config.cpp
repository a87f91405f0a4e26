#include <fstream>

#include "jumphedge/cli.hpp"
#include "jumphedge/errors.hpp"

namespace jumphedge::cli {

namespace {

using nlohmann::ordered_json;

// Cursor into a JSON document that reports schema violations with the path
// of the offending node.
struct Cur {
    const ordered_json* j;
    std::string path;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("config schema: " + (path.empty() ? "/" : path) + ": " + what);
    }
    bool has(const std::string& key) const { return j->is_object() && j->contains(key); }
    Cur at(const std::string& key) const {
        if (!j->is_object()) fail("expected an object");
        if (!j->contains(key)) fail("missing required field '" + key + "'");
        return {&(*j)[key], path + "/" + key};
    }
    Cur item(std::size_t i) const {
        return {&(*j)[i], path + "[" + std::to_string(i) + "]"};
    }
    double number() const {
        if (!j->is_number()) fail("expected a number");
        return j->get<double>();
    }
    double number_or(const std::string& key, double fallback) const {
        return has(key) ? at(key).number() : fallback;
    }
    int integer() const {
        if (!j->is_number_integer()) fail("expected an integer");
        return j->get<int>();
    }
    std::uint64_t uint64() const {
        if (!j->is_number_unsigned() && !j->is_number_integer()) fail("expected an integer seed");
        const auto v = j->get<std::int64_t>();
        if (v < 0) fail("expected a nonnegative seed");
        return static_cast<std::uint64_t>(v);
    }
    std::string str() const {
        if (!j->is_string()) fail("expected a string");
        return j->get<std::string>();
    }
    std::size_t array_size() const {
        if (!j->is_array()) fail("expected an array");
        return j->size();
    }
    std::vector<double> numbers() const {
        std::vector<double> out;
        out.reserve(array_size());
        for (std::size_t i = 0; i < j->size(); ++i) out.push_back(item(i).number());
        return out;
    }
};

model::RateCurve parse_rate(const Cur& c) {
    const std::string kind = c.at("kind").str();
    if (kind == "constant") return model::RateCurve::constant(c.at("value").number());
    if (kind == "piecewise-constant")
        return model::RateCurve::piecewise(c.at("breakpoints").numbers(),
                                           c.at("values").numbers());
    c.fail("unknown rate kind '" + kind + "' (constant | piecewise-constant)");
}

model::CoefficientField parse_coefficient(const Cur& c, model::CoefficientKind kind,
                                          bool allow_state_dependent) {
    const std::string k = c.at("kind").str();
    if (k == "constant")
        return model::CoefficientField::constant(kind, c.at("value").number());
    if (k == "piecewise_time")
        return model::CoefficientField::piecewise_time(kind, c.at("breakpoints").numbers(),
                                                       c.at("values").numbers());
    if (!allow_state_dependent)
        c.fail("true-model coefficients must not depend on the price (constant | "
               "piecewise_time)");
    if (k == "affine_in_s")
        return model::CoefficientField::affine_in_s(kind, c.at("a").number(),
                                                    c.at("b").number());
    if (k == "rho_affine")
        return model::CoefficientField::rho_affine(kind, c.at("c").number(),
                                                   c.at("d").number());
    c.fail("unknown coefficient kind '" + k +
           "' (constant | piecewise_time | affine_in_s | rho_affine)");
}

model::LevyMeasure parse_levy(const Cur& c) {
    std::vector<model::LevyAtom> atoms;
    const Cur arr = c.at("atoms");
    for (std::size_t i = 0; i < arr.array_size(); ++i) {
        const Cur a = arr.item(i);
        atoms.push_back({a.at("z").number(), a.at("w").number()});
    }
    return model::LevyMeasure(std::move(atoms));
}

model::Payoff parse_payoff(const Cur& c) {
    const std::string k = c.at("kind").str();
    if (k == "call") return model::Payoff::call(c.at("strike").number());
    if (k == "put") return model::Payoff::put(c.at("strike").number());
    if (k == "straddle") return model::Payoff::straddle(c.at("strike").number());
    if (k == "linear")
        return model::Payoff::linear(c.at("slope").number(), c.at("intercept").number());
    if (k == "piecewise_linear")
        return model::Payoff::piecewise_linear(c.at("knots").numbers(),
                                               c.at("slopes").numbers(),
                                               c.at("value_at_first_knot").number());
    c.fail("unknown payoff kind '" + k +
           "' (call | put | straddle | linear | piecewise_linear)");
}

}  // namespace

ExperimentConfig parse_config(const ordered_json& doc) {
    Cur root{&doc, ""};
    ExperimentConfig cfg;
    cfg.raw = doc;

    const int version = static_cast<int>(root.at("schema_version").number());
    if (version != 1) root.at("schema_version").fail("unsupported schema version");

    cfg.experiment = root.at("experiment").str();
    static const char* kinds[] = {"validate", "price", "hedge", "robust", "poisson",
                                  "acceptance-suite"};
    if (std::find(std::begin(kinds), std::end(kinds), cfg.experiment) == std::end(kinds))
        root.at("experiment").fail("unknown experiment kind");

    if (cfg.experiment == "acceptance-suite") {
        if (root.has("criteria"))
            for (const double v : root.at("criteria").numbers())
                cfg.criteria.push_back(static_cast<int>(v));
        if (root.has("seed")) cfg.seed = root.at("seed").uint64();
        cfg.seed_set = true;  // the suite pins its own seeds
        return cfg;
    }

    cfg.horizon = root.at("horizon").number();
    if (!(cfg.horizon > 0.0)) root.at("horizon").fail("horizon must be positive");

    if (root.has("true_model")) {
        const Cur t = root.at("true_model");
        model::TrueModel tm{t.at("x0").number(), parse_rate(t.at("rate")),
                            parse_coefficient(t.at("sigma"), model::CoefficientKind::TrueVol,
                                              false),
                            parse_coefficient(t.at("eta"), model::CoefficientKind::TrueJump,
                                              false),
                            parse_levy(t.at("levy"))};
        if (!(tm.x0 > 0.0)) t.at("x0").fail("x0 must be positive");
        cfg.truth = std::move(tm);
        cfg.x0 = cfg.truth->x0;
    }
    if (root.has("x0")) cfg.x0 = root.at("x0").number();

    if (root.has("misspecified_model")) {
        const Cur m = root.at("misspecified_model");
        model::MisspecifiedModel mm{
            parse_rate(m.at("rate")),
            parse_coefficient(m.at("gamma"), model::CoefficientKind::ModelVol, true),
            parse_coefficient(m.at("gamma_tilde"), model::CoefficientKind::ModelJump, true),
            parse_levy(m.at("levy")), m.number_or("epsilon_floor", 0.0)};
        cfg.mis = std::move(mm);
    }

    if (root.has("payoff")) cfg.payoff = parse_payoff(root.at("payoff"));

    const Cur grids = root.at("grids");
    {
        const Cur t = grids.at("time");
        cfg.pide_time = sim::TimeGrid::uniform(cfg.horizon, t.at("n_steps").integer());
        const Cur s = grids.at("space");
        cfg.space.x_min = s.at("x_min").number();
        cfg.space.x_max = s.at("x_max").number();
        cfg.space.n_points = s.at("n_points").integer();
        const std::string spacing =
            s.has("spacing") ? s.at("spacing").str() : std::string("uniform");
        if (spacing == "uniform")
            cfg.space.spacing = pide::Spacing::Uniform;
        else if (spacing == "log-uniform")
            cfg.space.spacing = pide::Spacing::LogUniform;
        else
            s.at("spacing").fail("unknown spacing (uniform | log-uniform)");
        cfg.space.validate();
        const int sim_steps =
            grids.has("sim_time") ? grids.at("sim_time").at("n_steps").integer() : 256;
        cfg.sim_time = sim::TimeGrid::uniform(cfg.horizon, sim_steps);
        cfg.vgrid.t_max = cfg.horizon;
        cfg.vgrid.s_min = cfg.space.x_min;
        cfg.vgrid.s_max = cfg.space.x_max;
        if (grids.has("validation")) {
            const Cur v = grids.at("validation");
            cfg.vgrid.n_times = static_cast<int>(v.number_or("n_times", 101));
            cfg.vgrid.n_prices = static_cast<int>(v.number_or("n_prices", 201));
            cfg.vgrid.s_min = v.number_or("s_min", cfg.vgrid.s_min);
            cfg.vgrid.s_max = v.number_or("s_max", cfg.vgrid.s_max);
        }
    }
    cfg.vlimits.bound_B = root.number_or("validation_bound_B", 1.0);
    cfg.vlimits.bound_L = root.number_or("validation_bound_L", 1e3);

    if (root.has("measures")) {
        const Cur m = root.at("measures").at("theta");
        for (std::size_t i = 0; i < m.array_size(); ++i)
            cfg.measure_theta.push_back(m.item(i).numbers());
    }

    if (root.has("family")) {
        const Cur f = root.at("family");
        robust::FamilySpec spec;
        const std::string k = f.at("kind").str();
        if (k == "singleton")
            spec.kind = robust::FamilySpec::Kind::Singleton;
        else if (k == "good_deal") {
            spec.kind = robust::FamilySpec::Kind::GoodDeal;
            spec.good_deal_B = f.at("B").number();
        } else if (k == "ball") {
            spec.kind = robust::FamilySpec::Kind::Ball;
            spec.ball_B1 = f.at("B1").number();
            spec.ball_B2 = f.at("B2").number();
        } else if (k == "explicit")
            spec.kind = robust::FamilySpec::Kind::Explicit;
        else
            f.at("kind").fail("unknown family kind (singleton | good_deal | ball | explicit)");
        if (f.has("theta_grid")) {
            const Cur g = f.at("theta_grid");
            for (std::size_t i = 0; i < g.array_size(); ++i)
                spec.theta_grid.push_back(g.item(i).numbers());
        }
        if (f.has("theta")) {
            const Cur g = f.at("theta");
            for (std::size_t i = 0; i < g.array_size(); ++i)
                spec.explicit_theta.push_back(g.item(i).numbers());
        }
        spec.condition_I_bound = f.number_or("condition_I_bound", 1e3);
        cfg.family = std::move(spec);
    }

    cfg.n_paths = static_cast<int>(root.number_or("n_paths", 10000));
    if (cfg.n_paths < 1) root.at("n_paths").fail("n_paths must be positive");
    if (!root.has("seed")) root.fail("missing required field 'seed' (no wall-clock defaults)");
    cfg.seed = root.at("seed").uint64();
    cfg.seed_set = true;
    if (root.has("checkpoints")) cfg.checkpoints = root.at("checkpoints").numbers();
    cfg.cross_check_budget = root.number_or("cross_check_budget", 0.02);
    cfg.extrapolation_budget = root.number_or("extrapolation_budget", 0.10);
    if (root.has("use_cache")) cfg.use_cache = root.at("use_cache").j->get<bool>();

    // per-experiment requirements
    auto need = [&](bool ok, const char* what) {
        if (!ok) throw ConfigError("config schema: experiment '" + cfg.experiment +
                                   "' requires " + what);
    };
    if (cfg.experiment == "validate") {
        need(cfg.truth.has_value(), "true_model");
        need(cfg.mis.has_value(), "misspecified_model");
    } else if (cfg.experiment == "price") {
        need(cfg.mis.has_value(), "misspecified_model");
        need(cfg.payoff.has_value(), "payoff");
        need(cfg.x0 > 0.0, "x0 (top level or via true_model)");
    } else if (cfg.experiment == "hedge") {
        need(cfg.truth.has_value(), "true_model");
        need(cfg.mis.has_value(), "misspecified_model");
        need(cfg.payoff.has_value(), "payoff");
        need(!cfg.checkpoints.empty(), "checkpoints");
    } else if (cfg.experiment == "robust") {
        need(cfg.truth.has_value(), "true_model");
        need(cfg.mis.has_value(), "misspecified_model");
        need(cfg.payoff.has_value(), "payoff");
        need(cfg.family.has_value(), "family");
        need(!cfg.checkpoints.empty(), "checkpoints");
    } else if (cfg.experiment == "poisson") {
        need(cfg.truth.has_value(), "true_model");
        need(cfg.mis.has_value(), "misspecified_model");
        need(cfg.payoff.has_value(), "payoff");
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw ConfigError("cannot open config file: " + file.string());
    ordered_json doc;
    try {
        doc = ordered_json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

}  // namespace jumphedge::cli
