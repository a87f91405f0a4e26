#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace jumphedge::model {

enum class CoefficientKind { TrueVol, TrueJump, ModelVol, ModelJump };

// A volatility or jump-sensitivity coefficient f(t, s, z). True-model
// coefficients ignore s; volatility coefficients ignore z. rho_prime is
// the derivative d/ds [s * f(t, s, z)] used by the flow-derivative
// process; it falls back to a central difference with step 1e-5 * s
// when no analytic form is attached.
class CoefficientField {
public:
    using Evaluator = std::function<double(double t, double s, double z)>;

    static CoefficientField constant(CoefficientKind kind, double value);

    // f(t,s,z) = a + b*s, so rho = a*s + b*s^2 and rho' = a + 2*b*s.
    static CoefficientField affine_in_s(CoefficientKind kind, double a, double b);

    // rho(t,s,z) = c*s + d, i.e. f(t,s,z) = c + d/s with rho' = c.
    // With c = -2, d = 4 this is the pathological coefficient whose
    // rho' = -2 breaks the flow-monotonicity floor.
    static CoefficientField rho_affine(CoefficientKind kind, double c, double d);

    // Piecewise-constant in t, constant in s and z.
    static CoefficientField piecewise_time(CoefficientKind kind, std::vector<double> breakpoints,
                                           std::vector<double> values);

    static CoefficientField custom(CoefficientKind kind, std::string name, Evaluator eval,
                                   Evaluator analytic_rho_prime = {});

    double operator()(double t, double s, double z) const { return eval_(t, s, z); }
    double rho_prime(double t, double s, double z) const;

    bool has_analytic_derivative() const { return static_cast<bool>(rho_prime_); }
    bool identically_zero() const { return identically_zero_; }
    bool depends_on_s() const { return depends_on_s_; }
    CoefficientKind kind() const { return kind_; }
    const nlohmann::ordered_json& descriptor() const { return descriptor_; }

private:
    CoefficientField() = default;
    CoefficientKind kind_ = CoefficientKind::ModelVol;
    Evaluator eval_;
    Evaluator rho_prime_;
    bool identically_zero_ = false;
    bool depends_on_s_ = false;
    nlohmann::ordered_json descriptor_;
};

}  // namespace jumphedge::model
