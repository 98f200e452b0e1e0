#include "teg/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "teg/errors.hpp"
#include "teg/roots.hpp"

namespace teg {
namespace {

// Dormand-Prince 5(4) tableau. The system is autonomous, so the c_i nodes never appear.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

Shooter::Shooter(GeneratorSpec spec, IvpOptions opts)
    : spec_(std::move(spec)), opts_(opts), kt_(spec_.pair.kappa, spec_.T_c) {
    spec_.validate();
    u_h_ = kt_.forward(spec_.T_h);
    r_ = spec_.coupling_integral();
    for (const PropertyModel* m : {&spec_.pair.kappa, &spec_.pair.rho})
        for (double T : m->breakpoints())
            if (T > spec_.T_c) kinks_.push_back(T);
    std::sort(kinks_.begin(), kinks_.end());
    kinks_.erase(std::unique(kinks_.begin(), kinks_.end()), kinks_.end());
}

double Shooter::u_of(double T) const {
    if (T >= spec_.T_c) return kt_.forward(T);
    return spec_.T_c + spec_.pair.kappa.value_unchecked(spec_.T_c) * (T - spec_.T_c);
}

Shooter::State Shooter::rhs(const State& s) const {
    // Trial stages of the step that crosses the cold-side event can dip below
    // T_c. The models are continued there while they stay in their domain and
    // positive, otherwise frozen at T_c; freezing alone costs accuracy in y_c.
    auto eval = [&](const PropertyModel& m) {
        const double T = s.T;
        if (T >= spec_.T_c) return m.value_unchecked(T);
        const bool inside = m.domain_inclusive() ? T >= m.domain_low() : T > m.domain_low();
        if (inside) {
            const double v = m.value_unchecked(T);
            if (v > 0.0 && std::isfinite(v)) return v;
        }
        return m.value_unchecked(spec_.T_c);
    };
    const double kappa = eval(spec_.pair.kappa);
    const double rho = eval(spec_.pair.rho);
    return {s.w / kappa, -rho, rho};
}

Shooter::State Shooter::step(const State& s, const State& k1, double h, State* err,
                             State* k_end) const {
    auto comb = [&](std::initializer_list<std::pair<double, const State*>> terms) {
        State out = s;
        for (auto [c, k] : terms) {
            out.T += h * c * k->T;
            out.w += h * c * k->w;
            out.q += h * c * k->q;
        }
        return out;
    };
    const State k2 = rhs(comb({{a21, &k1}}));
    const State k3 = rhs(comb({{a31, &k1}, {a32, &k2}}));
    const State k4 = rhs(comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = rhs(comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = rhs(comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State next = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    if (err || k_end) {
        const State k7 = rhs(next);
        if (k_end) *k_end = k7;
        if (err) {
            err->T = h * (e1 * k1.T + e3 * k3.T + e4 * k4.T + e5 * k5.T + e6 * k6.T + e7 * k7.T);
            err->w = h * (e1 * k1.w + e3 * k3.w + e4 * k4.w + e5 * k5.w + e6 * k6.w + e7 * k7.w);
            err->q = h * (e1 * k1.q + e3 * k3.q + e4 * k4.q + e5 * k5.q + e6 * k6.q + e7 * k7.q);
        }
    }
    return next;
}

TrajectorySample Shooter::sample(double y, const State& s) const {
    return {y, s.T, u_of(s.T), s.w, s.q};
}

UTrajectory Shooter::integrate(double theta) const {
    if (!(spec_.T_h > spec_.T_c))
        throw DegenerateError("shooting requires T_h > T_c (u_h == u_c otherwise)");
    if (!std::isfinite(theta)) throw InvalidModel("shooting slope must be finite");

    const double T_c = spec_.T_c;
    const double slope_scale = std::abs(theta) + std::sqrt(theta * theta + 2.0 * r_);
    const double tol = opts_.tol_ode;
    const State scale{spec_.T_h, slope_scale, slope_scale};
    const double event_ftol = opts_.tol_event / spec_.pair.kappa.value_unchecked(T_c);

    UTrajectory traj;
    traj.theta = theta;
    traj.u_h = u_h_;
    traj.u_c = T_c;

    State s{spec_.T_h, theta, 0.0};
    State k1 = rhs(s);
    double y = 0.0;
    traj.samples.push_back(sample(0.0, s));

    const bool fixed = opts_.fixed_step > 0.0;
    double h = fixed ? opts_.fixed_step : 0.01 * (u_h_ - T_c) / slope_scale;

    auto sub_step = [&](const State& from, const State& k_from, double dh) {
        return step(from, k_from, dh, nullptr, nullptr);
    };

    for (std::size_t n = 0;; ++n) {
        if (n >= opts_.max_steps)
            throw NumericalBlowup("cold-side event not reached within max_steps; check the material model");
        State err{}, k7{};
        const State next = step(s, k1, h, &err, &k7);

        double err_norm = 0.0;
        if (!fixed) {
            auto comp = [&](double e, double a, double b, double sc) {
                const double w = tol * (sc + std::max(std::abs(a), std::abs(b)));
                const double q = e / w;
                return q * q;
            };
            err_norm = std::sqrt((comp(err.T, s.T, next.T, scale.T) + comp(err.w, s.w, next.w, scale.w) +
                                  comp(err.q, s.q, next.q, scale.q)) /
                                 3.0);
            if (!std::isfinite(err_norm)) err_norm = 1e10;
        }

        if (fixed || err_norm <= 1.0) {
            // Stop at the first kink crossed inside the step.
            double h_eff = h;
            double kink = 0.0;
            for (double Tb : kinks_) {
                if (!((s.T - Tb) * (next.T - Tb) < 0)) continue;
                auto f = [&](double dh) { return sub_step(s, k1, dh).T - Tb; };
                auto root = refine_bracket(f, 0.0, h, s.T - Tb, next.T - Tb, 4 * kEps * Tb,
                                           4 * kEps * (y + h));
                if (root.x > 0 && root.x < h_eff) {
                    h_eff = root.x;
                    kink = Tb;
                }
            }
            State nxt = next, k_next = k7;
            if (h_eff < h) {
                nxt = sub_step(s, k1, h_eff);
                // Snap onto the kink so rounding cannot make the next step cross it again.
                nxt.T = kink;
                k_next = rhs(nxt);
            }
            if (theta > 0 && !traj.y_peak && s.w > 0 && nxt.w <= 0) {
                auto f = [&](double dh) { return sub_step(s, k1, dh).w; };
                auto root = refine_bracket(f, 0.0, h_eff, s.w, nxt.w,
                                           opts_.tol_event, 4 * kEps * (y + h_eff));
                traj.y_peak = y + root.x;
            }
            if (nxt.T <= T_c) {
                auto f = [&](double dh) { return sub_step(s, k1, dh).T - T_c; };
                auto root = refine_bracket(f, 0.0, h_eff, s.T - T_c, nxt.T - T_c, event_ftol,
                                           4 * kEps * (y + h_eff));
                const State end = root.x == h_eff ? nxt : sub_step(s, k1, root.x);
                traj.y_c = y + root.x;
                traj.samples.push_back(sample(traj.y_c, end));
                return traj;
            }
            y += h_eff;
            s = nxt;
            k1 = k_next;
            traj.samples.push_back(sample(y, s));
            if (!fixed) {
                const double factor = err_norm == 0.0 ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
                h *= std::clamp(factor, 0.2, 5.0);
            }
        } else {
            ++traj.rejected_steps;
            h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.25));
            if (h <= 8 * kEps * std::max(y, 1.0))
                throw NumericalBlowup("step size underflow while shooting");
        }
    }
}

TrajectorySample Shooter::state_at(const UTrajectory& traj, double y) const {
    const auto& smp = traj.samples;
    if (y <= smp.front().y) return smp.front();
    if (y >= smp.back().y) return smp.back();
    auto it = std::upper_bound(smp.begin(), smp.end(), y,
                               [](double v, const TrajectorySample& s) { return v < s.y; });
    const TrajectorySample& from = *(it - 1);
    if (from.y == y) return from;
    const State s{from.T, from.u_y, from.resistance};
    const State next = step(s, rhs(s), y - from.y, nullptr, nullptr);
    return sample(y, next);
}

UTrajectory integrate_ivp(const GeneratorSpec& spec, double theta, const IvpOptions& opts) {
    return Shooter(spec, opts).integrate(theta);
}

TemperatureSolution reconstruct_solution(const Shooter& shooter, UTrajectory traj,
                                         double R_external) {
    const GeneratorSpec& spec = shooter.spec();
    const std::size_t n = std::max<std::size_t>(shooter.options().n_out, 2);
    const double V = spec.voltage();

    TemperatureSolution sol;
    sol.voltage = V;
    sol.theta = traj.theta;
    sol.y_c = traj.y_c;
    const double absJ = traj.y_c / spec.L;
    sol.J = V < 0 ? -absJ : absJ;
    sol.R_internal = spec.L / traj.y_c * traj.shooting_integral() / spec.A_c;
    sol.R_total = sol.R_internal + R_external;

    sol.grid.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(n);
        const TrajectorySample st =
            k == n ? traj.samples.back() : shooter.state_at(traj, traj.y_c * frac);
        // -kappa T_x = -|J| u_y
        const double q = -absJ * st.u_y + spec.pair.alpha0 * st.T * sol.J;
        sol.grid.push_back({spec.L * frac, st.T, q});
    }
    sol.q_h = sol.grid.front().q;
    sol.q_c = sol.grid.back().q;
    sol.eta_numeric = sol.q_h > 0 ? (sol.q_h - sol.q_c) / sol.q_h
                                  : std::numeric_limits<double>::quiet_NaN();
    sol.current_residual =
        V == 0.0 ? 0.0 : std::abs(sol.J - V / (sol.R_total * spec.A_c)) / std::abs(sol.J);
    sol.trajectory = std::move(traj);
    return sol;
}

namespace {

TemperatureSolution zero_voltage_solution(const GeneratorSpec& spec, double gamma,
                                          std::size_t n) {
    const KTransform kt(spec.pair.kappa, spec.T_c);
    const double u_h = kt.forward(spec.T_h);
    const double u_c = spec.T_c;
    const double flux = (u_h - u_c) / spec.L;

    TemperatureSolution sol;
    sol.grid.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(n);
        const double T = k == n ? spec.T_c : kt.inverse(u_h + (u_c - u_h) * frac);
        sol.grid.push_back({spec.L * frac, T, flux});
    }
    // dx = L kappa dT / (u_h - u_c) along the K-linear profile.
    sol.R_internal = spec.T_h == spec.T_c
                         ? spec.pair.rho(spec.T_c) * spec.L / spec.A_c
                         : spec.L * spec.coupling_integral() / (u_h - u_c) / spec.A_c;
    sol.R_total = (1.0 + gamma) * sol.R_internal;
    sol.q_h = sol.q_c = flux;
    return sol;
}

}  // namespace

TemperatureSolution solve_ratio_mode(const GeneratorSpec& spec, double gamma,
                                     const IvpOptions& opts) {
    spec.validate();
    if (!(gamma >= 0) || !std::isfinite(gamma))
        throw InvalidModel("load ratio gamma must be finite and >= 0");
    if (spec.voltage() == 0.0)
        return zero_voltage_solution(spec, gamma, std::max<std::size_t>(opts.n_out, 2));

    const Shooter shooter(spec, opts);
    UTrajectory traj = shooter.integrate(theta_star(spec, gamma));
    const double R_internal = spec.L / traj.y_c * traj.shooting_integral() / spec.A_c;
    return reconstruct_solution(shooter, std::move(traj), gamma * R_internal);
}

double numeric_efficiency(const TemperatureSolution& sol) {
    if (sol.J == 0.0) return 0.0;
    if (!(sol.q_h > 0))
        throw NonPositiveHotFlux("hot-side heat flux is not positive; the leg is not generating");
    return (sol.q_h - sol.q_c) / sol.q_h;
}

ResidualReport verify_solution(const TemperatureSolution& sol, const GeneratorSpec& spec) {
    ResidualReport rep;
    const auto& g = sol.grid;
    if (g.size() < 3) return rep;
    const std::size_t n = g.size() - 1;
    const double h = spec.L / static_cast<double>(n);
    const KTransform kt(spec.pair.kappa, spec.T_c);
    const double kappa_c = spec.pair.kappa.value_unchecked(spec.T_c);

    std::vector<double> u(n + 1), rho(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double T = g[i].T;
        u[i] = T >= spec.T_c ? kt.forward(T) : spec.T_c + kappa_c * (T - spec.T_c);
        rho[i] = spec.pair.rho.value_unchecked(std::max(T, spec.T_c));
    }

    const double J2 = sol.J * sol.J;
    double scale = std::abs(u.front() - u.back()) / (spec.L * spec.L);
    for (double r : rho) scale = std::max(scale, r * J2);
    if (!(scale > 0)) scale = 1.0;

    double worst = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double res = u[i + 1] - 2.0 * u[i] + u[i - 1] + rho[i] * J2 * h * h;
        worst = std::max(worst, std::abs(res));
    }
    rep.ode_residual = worst / (h * h * scale);
    rep.hot_boundary_error = std::abs(g.front().T - spec.T_h);
    rep.cold_boundary_error = std::abs(g.back().T - spec.T_c);

    // Composite Simpson when the interval count is even, trapezoid otherwise.
    double integral = 0.0;
    if (n % 2 == 0) {
        for (std::size_t i = 0; i + 2 <= n; i += 2) integral += rho[i] + 4.0 * rho[i + 1] + rho[i + 2];
        integral *= h / 3.0;
    } else {
        for (std::size_t i = 0; i < n; ++i) integral += 0.5 * (rho[i] + rho[i + 1]);
        integral *= h;
    }
    const double R_grid = integral / spec.A_c;
    rep.resistance_residual = std::abs(R_grid - sol.R_internal) / sol.R_internal;

    const double V = spec.voltage();
    rep.current_residual =
        V == 0.0 ? std::abs(sol.J) : std::abs(sol.J * sol.R_total * spec.A_c - V) / std::abs(V);
    return rep;
}

double residual_tolerance(const GeneratorSpec& spec, std::size_t n_out) {
    const double h = 1.0 / static_cast<double>(std::max<std::size_t>(n_out, 2));
    const bool smooth = spec.pair.kappa.smooth() && spec.pair.rho.smooth();
    // Measured worst cases on random specs: about 2 h^2 smooth, 0.25 h with kinks.
    return smooth ? 10.0 * h * h : 5.0 * h;
}

}  // namespace teg
