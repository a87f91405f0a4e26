#include "jumphedge/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "jumphedge/errors.hpp"

namespace jumphedge::model {

namespace {
const char* kind_name(CoefficientKind k) {
    switch (k) {
        case CoefficientKind::TrueVol: return "true-vol";
        case CoefficientKind::TrueJump: return "true-jump";
        case CoefficientKind::ModelVol: return "model-vol";
        case CoefficientKind::ModelJump: return "model-jump";
    }
    return "?";
}
}  // namespace

CoefficientField CoefficientField::constant(CoefficientKind kind, double value) {
    if (!std::isfinite(value)) throw ConfigError("coefficient: non-finite constant");
    CoefficientField f;
    f.kind_ = kind;
    f.eval_ = [value](double, double, double) { return value; };
    f.rho_prime_ = [value](double, double, double) { return value; };
    f.identically_zero_ = (value == 0.0);
    f.descriptor_ = {{"kind", "constant"}, {"for", kind_name(kind)}, {"value", value}};
    return f;
}

CoefficientField CoefficientField::affine_in_s(CoefficientKind kind, double a, double b) {
    CoefficientField f;
    f.kind_ = kind;
    f.eval_ = [a, b](double, double s, double) { return a + b * s; };
    f.rho_prime_ = [a, b](double, double s, double) { return a + 2.0 * b * s; };
    f.identically_zero_ = (a == 0.0 && b == 0.0);
    f.depends_on_s_ = (b != 0.0);
    f.descriptor_ = {{"kind", "affine_in_s"}, {"for", kind_name(kind)}, {"a", a}, {"b", b}};
    return f;
}

CoefficientField CoefficientField::rho_affine(CoefficientKind kind, double c, double d) {
    CoefficientField f;
    f.kind_ = kind;
    f.eval_ = [c, d](double, double s, double) { return c + d / s; };
    f.rho_prime_ = [c](double, double, double) { return c; };
    f.identically_zero_ = (c == 0.0 && d == 0.0);
    f.depends_on_s_ = (d != 0.0);
    f.descriptor_ = {{"kind", "rho_affine"}, {"for", kind_name(kind)}, {"c", c}, {"d", d}};
    return f;
}

CoefficientField CoefficientField::piecewise_time(CoefficientKind kind,
                                                  std::vector<double> breakpoints,
                                                  std::vector<double> values) {
    if (values.size() != breakpoints.size() + 1)
        throw ConfigError("coefficient piecewise_time: need one more value than breakpoints");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw ConfigError("coefficient piecewise_time: breakpoints must increase");
    CoefficientField f;
    f.kind_ = kind;
    auto lookup = [bp = breakpoints, vals = values](double t) {
        const std::size_t i = std::upper_bound(bp.begin(), bp.end(), t) - bp.begin();
        return vals[i];
    };
    f.eval_ = [lookup](double t, double, double) { return lookup(t); };
    f.rho_prime_ = [lookup](double t, double, double) { return lookup(t); };
    f.identically_zero_ =
        std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
    f.descriptor_ = {{"kind", "piecewise_time"},
                     {"for", kind_name(kind)},
                     {"breakpoints", breakpoints},
                     {"values", values}};
    return f;
}

CoefficientField CoefficientField::custom(CoefficientKind kind, std::string name, Evaluator eval,
                                          Evaluator analytic_rho_prime) {
    if (!eval) throw ConfigError("coefficient custom: evaluator required");
    CoefficientField f;
    f.kind_ = kind;
    f.eval_ = std::move(eval);
    f.rho_prime_ = std::move(analytic_rho_prime);
    f.depends_on_s_ = true;  // conservative
    f.descriptor_ = {{"kind", "custom"}, {"for", kind_name(kind)}, {"name", name}};
    return f;
}

double CoefficientField::rho_prime(double t, double s, double z) const {
    if (rho_prime_) return rho_prime_(t, s, z);
    const double h = 1e-5 * std::max(s, 1e-8);
    const double up = (s + h) * eval_(t, s + h, z);
    const double dn = (s - h) * eval_(t, s - h, z);
    return (up - dn) / (2.0 * h);
}

}  // namespace jumphedge::model
