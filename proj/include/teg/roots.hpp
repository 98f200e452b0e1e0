#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace teg {

struct BracketRoot {
    double x;
    double fx;
    int iterations;
};

/// Illinois-modified regula falsi on a sign-changing bracket [a, b].
/// Stops when |f| <= ftol or the bracket is narrower than xtol.
template <class F>
BracketRoot refine_bracket(F&& f, double a, double b, double fa, double fb, double ftol,
                           double xtol, int max_iter = 200) {
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    int side = 0;
    double x = a, fx = fa;
    for (int it = 1; it <= max_iter; ++it) {
        x = (a * fb - b * fa) / (fb - fa);
        // Fall back to bisection when the secant lands outside or on an end.
        if (!(x > std::min(a, b) && x < std::max(a, b))) x = 0.5 * (a + b);
        fx = f(x);
        if (std::abs(fx) <= ftol || std::abs(b - a) <= xtol) return {x, fx, it};
        if ((fx > 0) == (fb > 0)) {
            b = x;
            fb = fx;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = x;
            fa = fx;
            if (side == 1) fb *= 0.5;
            side = 1;
        }
    }
    return {x, fx, max_iter};
}

/// Golden-section search for a local minimum of f on [a, b].
template <class F>
std::pair<double, double> golden_minimize(F&& f, double a, double b, double xtol,
                                          int max_iter = 200) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && std::abs(b - a) > xtol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace teg
