#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "teg/analytic.hpp"

namespace teg {

struct IvpOptions {
    double tol_ode = 1e-10;      // relative local error per accepted step
    double tol_event = 1e-12;    // |u(y_c) - u_c|
    std::size_t max_steps = 1'000'000;
    double fixed_step = 0.0;     // > 0 switches off step-size control
    std::size_t n_out = 256;     // output grid has n_out + 1 points
};

/// One accepted point of the shooting trajectory. `resistance` is the running
/// integral of rho_hat(u) over [0, y].
struct TrajectorySample {
    double y;
    double T;
    double u;
    double u_y;
    double resistance;
};

/// Solution of u'' + rho_hat(u) = 0, u(0) = u_h, u'(0) = theta, up to the
/// unique y_c with u(y_c) = u_c.
struct UTrajectory {
    double theta = 0.0;
    double y_c = 0.0;
    std::optional<double> y_peak;  // u_y = 0, present iff theta > 0
    double u_h = 0.0;
    double u_c = 0.0;
    std::vector<TrajectorySample> samples;  // accepted steps; front at y=0, back at y_c
    std::size_t rejected_steps = 0;

    /// int_0^{y_c} rho_hat(u(y)) dy accumulated along the trajectory.
    double shooting_integral() const { return samples.back().resistance; }
    double end_slope() const { return samples.back().u_y; }
};

/// Integrates the u-space IVP for one spec. The state carried internally is
/// (T, u_y, int rho dy) with T' = u_y / kappa(T); u = K(T) is reported per sample.
/// Accepted steps are truncated at material breakpoints so no step straddles a kink.
class Shooter {
public:
    Shooter(GeneratorSpec spec, IvpOptions opts = {});

    /// Throws NumericalBlowup if the cold-side event is not reached in max_steps.
    UTrajectory integrate(double theta) const;

    /// State at y in [0, y_c] via a single Runge-Kutta sub-step from the
    /// preceding accepted sample.
    TrajectorySample state_at(const UTrajectory& traj, double y) const;

    const GeneratorSpec& spec() const { return spec_; }
    const KTransform& k_transform() const { return kt_; }
    const IvpOptions& options() const { return opts_; }

    /// u = K(T), extended linearly below T_c so tiny event overshoots stay finite.
    double u_of(double T) const;

private:
    struct State {
        double T, w, q;
    };
    State rhs(const State& s) const;
    // One Dormand-Prince step; writes the 4th/5th order difference to err.
    State step(const State& s, const State& k1, double h, State* err, State* k_end) const;
    TrajectorySample sample(double y, const State& s) const;

    GeneratorSpec spec_;
    IvpOptions opts_;
    KTransform kt_;
    double u_h_;
    double r_;
    std::vector<double> kinks_;  // material breakpoints above T_c; steps end on them
};

UTrajectory integrate_ivp(const GeneratorSpec& spec, double theta, const IvpOptions& opts = {});

struct GridPoint {
    double x;
    double T;
    double q;  // heat flux -kappa T_x + alpha0 T J, W/m^2
};

struct TemperatureSolution {
    std::vector<GridPoint> grid;
    double theta = 0.0;
    double y_c = 0.0;
    double J = 0.0;           // signed like V, A/m^2
    double voltage = 0.0;
    double R_internal = 0.0;  // (1/A_c) int_0^L rho(T(x)) dx
    double R_total = 0.0;
    double q_h = 0.0;
    double q_c = 0.0;
    double eta_numeric = 0.0;
    double current_residual = 0.0;  // |J - V/(R_total A_c)| / |J|, 0 when J == 0
    UTrajectory trajectory;         // raw adaptive steps; empty when V == 0
};

/// Unique steady state at load ratio gamma: shoots with theta_star, rescales
/// x = (L/y_c) y, and takes |J| = y_c / L. For V == 0 returns the profile
/// linear in K with J = 0.
TemperatureSolution solve_ratio_mode(const GeneratorSpec& spec, double gamma,
                                     const IvpOptions& opts = {});

/// Physical solution reconstructed from one cold-side-matching trajectory.
/// `R_external` is the load in ohms; the J = V/(R A_c) residual is recorded,
/// not enforced.
TemperatureSolution reconstruct_solution(const Shooter& shooter, UTrajectory traj,
                                         double R_external);

/// Flux-ratio efficiency (q_h - q_c) / q_h. Zero when J == 0; throws
/// NonPositiveHotFlux when q_h <= 0.
double numeric_efficiency(const TemperatureSolution& sol);

struct ResidualReport {
    double ode_residual = 0.0;  // max |Delta^2 K(T_i) + rho(T_i) J^2 h^2| / (h^2 scale)
    double hot_boundary_error = 0.0;
    double cold_boundary_error = 0.0;
    double resistance_residual = 0.0;  // grid quadrature of R_internal vs reported, relative
    double current_residual = 0.0;     // |J R_total A_c - V| / |V|
};

/// Discrete checks of (K(T))_xx + rho J^2 = 0, the boundary values and the
/// nonlocal resistance constraint on the solution grid.
ResidualReport verify_solution(const TemperatureSolution& sol, const GeneratorSpec& spec);

/// Bound the normalized ODE residual of verify_solution should meet on an
/// n_out-interval grid: second order in h for smooth materials, first order
/// across kinks of piecewise models.
double residual_tolerance(const GeneratorSpec& spec, std::size_t n_out);

}  // namespace teg
