#pragma once

#include "teg/materials.hpp"

namespace teg {

/// One thermoelectric leg: material, boundary temperatures (K), length L (m)
/// and cross-section A_c (m^2). T(0) = T_h on the hot side, T(L) = T_c.
struct GeneratorSpec {
    MaterialPair pair;
    double T_h = 0.0;
    double T_c = 0.0;
    double L = 1.0;
    double A_c = 1.0;

    /// T_h >= T_c > 0, L > 0, A_c > 0 and a material valid on [T_c, inf).
    void validate() const;

    double delta_T() const { return T_h - T_c; }
    double T_mean() const { return 0.5 * (T_h + T_c); }
    /// Seebeck voltage alpha0 * (T_h - T_c), signed.
    double voltage() const { return pair.alpha0 * delta_T(); }
    /// int_{T_c}^{T_h} rho*kappa dT.
    double coupling_integral() const;
};

struct MaxEfficiency {
    double eta_max;
    double gamma_opt;
};

struct ShermanCheck {
    double lhs;  // hot-side relative Fourier flux at gamma_opt
    double rhs;  // (1 - eta_max)/sqrt(1 - (1 - eta_max)^2) * sqrt(2 r)
};

struct PerformanceReport {
    double z;
    double gamma;
    double eta_of_gamma;
    double eta_max;
    double gamma_opt;
    double hot_flux_rel;
    bool decreasing;
    double voltage;  // signed
    double coupling_integral;
};

// Closed forms below need T_h > T_c and alpha0 != 0 unless noted. They throw
// DegenerateError when T_h == T_c and ZeroSeebeck / ZeroVoltage when alpha0 == 0.

/// z = alpha0^2 / ((1/dT) int rho*kappa dT), in 1/K.
double figure_of_merit(const GeneratorSpec& spec);

/// Efficiency at load ratio gamma >= 0.
double efficiency(const GeneratorSpec& spec, double gamma);
/// Same formula from precomputed z, for sweeps.
double efficiency_from_z(double z, double T_h, double T_c, double gamma);

MaxEfficiency max_efficiency(const GeneratorSpec& spec);
MaxEfficiency max_efficiency_from_z(double z, double T_h, double T_c);

/// I(theta) = theta + sqrt(theta^2 + 2 r): the nonlocal constraint value of
/// the shooting trajectory that leaves u_h with slope theta. Needs T_h > T_c only.
double shooting_function_I(const GeneratorSpec& spec, double theta);
double shooting_function_from_r(double r, double theta);

/// The unique theta with I(theta) = |V|/(1 + gamma).
double theta_star(const GeneratorSpec& spec, double gamma);

/// -kappa(T_h) T_x(0) / J for the ratio-mode solution; equals -theta_star.
double hot_side_relative_flux(const GeneratorSpec& spec, double gamma);

/// True iff z dT <= 2 (1 + gamma)^2.
bool is_strictly_decreasing(const GeneratorSpec& spec, double gamma);

ShermanCheck sherman_flux_check(const GeneratorSpec& spec);

PerformanceReport performance_report(const GeneratorSpec& spec, double gamma);

}  // namespace teg
