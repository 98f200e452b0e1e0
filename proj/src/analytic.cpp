#include "teg/analytic.hpp"

#include <cmath>

#include "teg/errors.hpp"

namespace teg {
namespace {

void require_gradient(const GeneratorSpec& spec) {
    if (!(spec.T_h > spec.T_c))
        throw DegenerateError("T_h == T_c: figure of merit and efficiency are undefined");
}

void require_seebeck(const GeneratorSpec& spec) {
    require_gradient(spec);
    if (spec.pair.alpha0 == 0.0) throw ZeroSeebeck("alpha0 == 0: figure of merit is zero");
}

void require_voltage(const GeneratorSpec& spec) {
    if (spec.voltage() == 0.0) throw ZeroVoltage("Seebeck voltage is zero");
}

void require_gamma(double gamma) {
    if (!(gamma >= 0) || !std::isfinite(gamma))
        throw InvalidModel("load ratio gamma must be finite and >= 0");
}

}  // namespace

void GeneratorSpec::validate() const {
    if (!(T_c > 0) || !std::isfinite(T_c)) throw InvalidModel("T_c must be positive");
    if (!(T_h >= T_c) || !std::isfinite(T_h)) throw InvalidModel("T_h must satisfy T_h >= T_c");
    if (!(L > 0) || !std::isfinite(L)) throw InvalidModel("L must be positive");
    if (!(A_c > 0) || !std::isfinite(A_c)) throw InvalidModel("A_c must be positive");
    pair.validate(T_c);
}

double GeneratorSpec::coupling_integral() const { return rho_kappa_integral(pair, T_c, T_h); }

double figure_of_merit(const GeneratorSpec& spec) {
    require_seebeck(spec);
    const double r = spec.coupling_integral();
    return spec.pair.alpha0 * spec.pair.alpha0 * spec.delta_T() / r;
}

double efficiency_from_z(double z, double T_h, double T_c, double gamma) {
    const double carnot = (T_h - T_c) / T_h;
    const double g1 = gamma + 1.0;
    return carnot * gamma / (g1 + g1 * g1 / (z * T_h) - 0.5 * carnot);
}

double efficiency(const GeneratorSpec& spec, double gamma) {
    require_gamma(gamma);
    return efficiency_from_z(figure_of_merit(spec), spec.T_h, spec.T_c, gamma);
}

MaxEfficiency max_efficiency_from_z(double z, double T_h, double T_c) {
    const double carnot = (T_h - T_c) / T_h;
    const double root = std::sqrt(1.0 + z * 0.5 * (T_h + T_c));
    return {carnot * (root - 1.0) / (root + T_c / T_h), root};
}

MaxEfficiency max_efficiency(const GeneratorSpec& spec) {
    return max_efficiency_from_z(figure_of_merit(spec), spec.T_h, spec.T_c);
}

double shooting_function_from_r(double r, double theta) {
    const double s = std::sqrt(theta * theta + 2.0 * r);
    // theta + s cancels for theta << 0; the conjugate form does not.
    return theta >= 0 ? theta + s : 2.0 * r / (s - theta);
}

double shooting_function_I(const GeneratorSpec& spec, double theta) {
    require_gradient(spec);
    return shooting_function_from_r(spec.coupling_integral(), theta);
}

double theta_star(const GeneratorSpec& spec, double gamma) {
    require_gamma(gamma);
    require_voltage(spec);
    const double c = std::abs(spec.voltage()) / (1.0 + gamma);
    return 0.5 * c - spec.coupling_integral() / c;
}

double hot_side_relative_flux(const GeneratorSpec& spec, double gamma) {
    return -theta_star(spec, gamma);
}

bool is_strictly_decreasing(const GeneratorSpec& spec, double gamma) {
    require_gamma(gamma);
    require_voltage(spec);
    const double g1 = 1.0 + gamma;
    return figure_of_merit(spec) * spec.delta_T() <= 2.0 * g1 * g1;
}

ShermanCheck sherman_flux_check(const GeneratorSpec& spec) {
    require_voltage(spec);
    const auto [eta_max, gamma_opt] = max_efficiency(spec);
    const double r = spec.coupling_integral();
    const double lhs = hot_side_relative_flux(spec, gamma_opt);
    // 1 - (1 - eta)^2 == eta (2 - eta), which keeps precision for small eta.
    const double rhs = (1.0 - eta_max) / std::sqrt(eta_max * (2.0 - eta_max)) * std::sqrt(2.0 * r);
    return {lhs, rhs};
}

PerformanceReport performance_report(const GeneratorSpec& spec, double gamma) {
    PerformanceReport rep{};
    rep.z = figure_of_merit(spec);
    rep.gamma = gamma;
    rep.eta_of_gamma = efficiency(spec, gamma);
    const auto best = max_efficiency(spec);
    rep.eta_max = best.eta_max;
    rep.gamma_opt = best.gamma_opt;
    rep.hot_flux_rel = hot_side_relative_flux(spec, gamma);
    rep.decreasing = is_strictly_decreasing(spec, gamma);
    rep.voltage = spec.voltage();
    rep.coupling_integral = spec.coupling_integral();
    return rep;
}

}  // namespace teg
