#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "teg/ivp.hpp"

namespace teg {

/// Fixed external load R_load (ohm) instead of a load ratio. The steady
/// states are the roots of H(theta) = I(theta) + S_load y_c(theta) = |V| with
/// S_load = R_load A_c / L.
struct LoadResistanceProblem {
    GeneratorSpec spec;
    double R_load = 0.0;

    double S_load() const { return R_load * spec.A_c / spec.L; }
    /// R_load > 0, spec valid and V != 0.
    void validate() const;
};

/// rho_hat(u) = rho(K^-1(u)) when it is rho_h below u_h and rho_h + M (u - u_h)
/// above, which admits closed-form trajectories (parabola below u_h,
/// trigonometric arc above).
struct PiecewiseRhoHat {
    double rho_h;
    double slope;    // M in u-units, 0 for constant rho
    double delta_u;  // u_h - u_c
};

std::optional<PiecewiseRhoHat> piecewise_rho_hat(const GeneratorSpec& spec);

/// Closed-form y_c(theta), H(theta) and H'(theta) when piecewise_rho_hat applies.
std::optional<double> hitting_time_exact(const GeneratorSpec& spec, double theta);
std::optional<double> H_of_theta_exact(const LoadResistanceProblem& prob, double theta);
std::optional<double> H_prime_exact(const LoadResistanceProblem& prob, double theta);

/// Closed-form I plus the numerically detected hitting time.
class LoadModel {
public:
    explicit LoadModel(LoadResistanceProblem prob, IvpOptions opts = {});

    double H(double theta) const;
    double hitting_time(double theta) const;
    const LoadResistanceProblem& problem() const { return prob_; }
    const Shooter& shooter() const { return shooter_; }

private:
    LoadResistanceProblem prob_;
    Shooter shooter_;
    double r_;
};

double H_of_theta(const LoadResistanceProblem& prob, double theta, const IvpOptions& opts = {});

struct ScanOptions {
    std::size_t samples = 2048;
    double tol_root = 1e-9;
    // Extremum of H - |V| within this distance of zero counts as a double
    // root. Nonpositive selects max(10 tol_root, 100 tol_ode |V|).
    double tol_tangent = 0.0;
    unsigned threads = 0;  // 0: hardware concurrency
    IvpOptions ivp;
};

struct LoadRoot {
    double theta;
    double y_c;
    double R_total;      // R_internal + R_load
    double R_internal;
    double gamma_equiv;  // R_load / R_internal
    double eta;
    double residual;     // |H(theta) - |V||
    bool tangent;        // double root located as an extremum touching |V|
    TemperatureSolution solution;
};

struct ScanDiagnostics {
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    std::size_t samples = 0;
    std::size_t sign_changes = 0;
    std::size_t tangencies = 0;
    std::size_t merged = 0;
    bool floor_hit = false;
    double tol_tangent = 0.0;
    std::vector<std::string> notes;
};

struct SolutionSet {
    std::vector<LoadRoot> roots;  // sorted by theta
    ScanDiagnostics diagnostics;
    std::vector<std::pair<double, double>> h_curve;  // (theta, H) scan samples
};

/// All roots of H(theta) = |V| resolved by a uniform scan over
/// [theta_lo, |V|] with bracket refinement. "All" means all at the scan
/// resolution. Throws ScanIncomplete when the scan brackets nothing.
SolutionSet enumerate_solutions(const LoadResistanceProblem& prob, const ScanOptions& opts = {});

struct NonuniqueConstruction {
    LoadResistanceProblem problem;
    double theta_1;          // H'(theta_1) < 0 when s_ratio > 51/13
    double M;                // slope of rho_hat above u_h
    double s_ratio;          // S_load / rho_h
    double H_prime_theta_1;  // 3/2 - (13/34) s_ratio
    bool guaranteed;         // s_ratio > 51/13
    std::vector<double> predicted_roots;  // closed-form roots of H = |V|
};

/// Builds a clamped resistivity, load and Seebeck coefficient for which the
/// fixed-load problem has at least two solutions, for the kappa of `base`:
/// theta_1 / sqrt(theta_1^2 + 2 rho_h du) = 1/2, M theta_1^2 / rho_h^2 = 16,
/// S_load = s_ratio rho_h and |V| = H(theta_1). alpha0 comes out positive.
NonuniqueConstruction construct_nonunique_example(const GeneratorSpec& base, double rho_h,
                                                  double s_ratio = 4.0);

}  // namespace teg
