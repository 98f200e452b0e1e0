#pragma once

// Closed-form profiles for kappa = k0 and a resistivity that is rho_h up to
// T_h and rho_h + M (T - T_h) above it. Written directly from the ODE, with
// no library calls.

#include <cmath>
#include <vector>

namespace teg::testing {

struct ClampedProblem {
    double k0 = 1.0;
    double rho_h = 2.0;
    double M = 48.0;  // slope of rho in T
    double T_h = 2.0;
    double T_c = 1.0;
    double L = 1.0;
};

/// alpha0 that puts the three-solution instance (k0 = 1, rho_h = 2, M = 48,
/// R_load = 8) on its middle root theta = sqrt(3)/2.
inline double three_solution_alpha0() {
    return -1.5 * std::sqrt(3.0) + 2.5 * std::sqrt(19.0) + 4.0 / std::sqrt(3.0) * std::atan(3.0);
}

/// Profile in u = k0 (T - T_c) + T_c for initial slope theta, then mapped to
/// x in [0, L] by x = L y / y_c.
class ClampedProfile {
public:
    ClampedProfile(const ClampedProblem& p, double theta) : p_(p), theta_(theta) {
        const double du = p.k0 * (p.T_h - p.T_c);
        m_ = p.M / p.k0;
        w_ = std::sqrt(m_);
        y_arc_ = theta > 0 ? 2.0 / w_ * std::atan(w_ * theta / p.rho_h) : 0.0;
        const double slope = theta > 0 ? -theta : theta;
        descent_ = (slope + std::sqrt(slope * slope + 2.0 * p.rho_h * du)) / p.rho_h;
        y_c_ = y_arc_ + descent_;
    }

    double y_c() const { return y_c_; }

    double T_at(double x) const {
        const double y = x / p_.L * y_c_;
        const double u_h = p_.T_c + p_.k0 * (p_.T_h - p_.T_c);
        double u;
        if (y < y_arc_) {
            const double v0 = p_.rho_h / m_;
            u = u_h - v0 + v0 * std::cos(w_ * y) + theta_ / w_ * std::sin(w_ * y);
        } else {
            const double s = y - y_arc_;
            const double slope = theta_ > 0 ? -theta_ : theta_;
            u = u_h + slope * s - 0.5 * p_.rho_h * s * s;
        }
        return p_.T_c + (u - p_.T_c) / p_.k0;
    }

private:
    ClampedProblem p_;
    double theta_;
    double m_, w_, y_arc_, descent_, y_c_;
};

}  // namespace teg::testing
