#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "teg/quadrature.hpp"

namespace teg {

class PropertyModel;

namespace family {

struct Constant {
    double c;
};
// a*T + b
struct Linear {
    double a, b;
};
// c / T
struct Reciprocal {
    double c;
};
// c0 * (1 + c1*ln(T/T_ref))
struct LogAffine {
    double c0, c1, T_ref;
};
// v_pivot below T_pivot, M*(T - T_pivot) + v_pivot above.
struct ClampedLinear {
    double M, T_pivot, v_pivot;
};
// Lo*T / partner(T). With the partner set to rho this is a kappa obeying
// rho*kappa = Lo*T exactly.
struct WiedemannFranz {
    double Lo;
    std::shared_ptr<const PropertyModel> partner;
};
// v_pivot below T_pivot, M*(K(T) - K(T_pivot)) + v_pivot above, where K' = kappa.
// This is the clamped profile written in transformed coordinates: rho(K^-1(u))
// is exactly piecewise linear in u for any kappa.
struct ClampedTransformLinear {
    double M, T_pivot, v_pivot;
    std::shared_ptr<const PropertyModel> kappa;
};
struct Knot {
    double T, value;
};
// Piecewise linear through the knots; the last value is held above the last knot.
struct Table {
    std::vector<Knot> knots;
};

}  // namespace family

/// A positive scalar function of temperature: thermal conductivity kappa(T)
/// in W/(m K) or electrical resistivity rho(T) in Ohm m. Immutable.
class PropertyModel {
public:
    using Family = std::variant<family::Constant, family::Linear, family::Reciprocal,
                                family::LogAffine, family::ClampedLinear,
                                family::WiedemannFranz, family::ClampedTransformLinear,
                                family::Table>;

    static PropertyModel constant(double c);
    static PropertyModel linear(double a, double b);
    static PropertyModel reciprocal(double c);
    static PropertyModel log_affine(double c0, double c1, double T_ref);
    static PropertyModel clamped_linear(double M, double T_pivot, double v_pivot);
    static PropertyModel wiedemann_franz(double Lo, PropertyModel partner);
    static PropertyModel clamped_transform_linear(double M, double T_pivot, double v_pivot,
                                                  PropertyModel kappa);
    static PropertyModel table(std::vector<family::Knot> knots);

    /// Value at T. Throws DomainError below domain_low() and NonPositiveValue
    /// if the parameters produce a value <= 0 there.
    double operator()(double T) const;

    /// Value without domain or sign checks, for inner loops already confined
    /// to a validated range.
    double value_unchecked(double T) const;

    /// Evaluation is valid for T > domain_low() (T >= for tables).
    double domain_low() const;
    bool domain_inclusive() const;

    /// Integral over [a, b], closed form where the family has one.
    double integral(double a, double b, const QuadratureOptions& opts = {}) const;
    std::optional<double> exact_integral(double a, double b) const;

    /// Temperatures where the model is not differentiable.
    std::vector<double> breakpoints() const;

    /// p such that value ~ T^p (up to logarithms) as T -> infinity.
    double asymptotic_power() const;

    bool smooth() const;

    /// Throws InvalidModel unless the model is strictly positive and finite on
    /// [T_lo, infinity).
    void validate(double T_lo) const;

    std::string_view family_name() const;
    const Family& family() const { return family_; }

    friend bool operator==(const PropertyModel& a, const PropertyModel& b);

private:
    explicit PropertyModel(Family f) : family_(std::move(f)) {}
    Family family_;
};

/// Constant Seebeck coefficient alpha0 (V/K) with kappa and rho.
struct MaterialPair {
    PropertyModel kappa;
    PropertyModel rho;
    double alpha0 = 0.0;

    /// Both models valid on [T_c, infinity) and the product rho*kappa not
    /// integrable at infinity.
    void validate(double T_c) const;
};

/// u = K(T) = T_c + int_{T_c}^T kappa(s) ds and its inverse.
class KTransform {
public:
    KTransform(PropertyModel kappa, double T_c);

    double forward(double T) const;
    /// Bracketed Newton with bisection fallback; |K(T) - u| <= tol_inverse.
    double inverse(double u) const;
    /// sup of K on [T_c, infinity); +infinity for every built-in family.
    double k_infinity() const { return k_inf_; }
    double base_temperature() const { return T_c_; }
    const PropertyModel& kappa() const { return kappa_; }

    static constexpr double tol_inverse = 1e-12;

private:
    PropertyModel kappa_;
    double T_c_;
    double k_inf_;
};

double eval_property(const PropertyModel& model, double T);
double k_forward(const KTransform& kt, double T);
double k_inverse(const KTransform& kt, double u);

/// int_{T_lo}^{T_hi} rho*kappa dT. Closed form for family products that
/// admit one, adaptive Gauss-Kronrod otherwise.
double rho_kappa_integral(const MaterialPair& pair, double T_lo, double T_hi,
                          const QuadratureOptions& opts = {});
std::optional<double> rho_kappa_integral_exact(const MaterialPair& pair, double T_lo,
                                               double T_hi);

}  // namespace teg
