#pragma once

#include <functional>
#include <span>

namespace teg {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    int max_subdivisions = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
    bool converged = true;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature of f over [a, b].
///
/// Intervals with the largest error estimate are bisected until the summed
/// estimate drops below max(abs_tol, rel_tol*|I|). `breakpoints` lying inside
/// (a, b) seed the initial partition, which is how piecewise material
/// models keep their kinks on interval boundaries. Reversed bounds give the
/// negated integral.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           std::span<const double> breakpoints = {},
                           const QuadratureOptions& opts = {});

}  // namespace teg
