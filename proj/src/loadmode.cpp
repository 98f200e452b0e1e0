#include "teg/loadmode.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "teg/errors.hpp"
#include "teg/roots.hpp"

namespace teg {

void LoadResistanceProblem::validate() const {
    spec.validate();
    if (!(R_load > 0) || !std::isfinite(R_load)) throw InvalidModel("R_load must be positive");
    if (spec.voltage() == 0.0)
        throw ZeroVoltage("fixed-load enumeration needs a nonzero Seebeck voltage");
}

std::optional<PiecewiseRhoHat> piecewise_rho_hat(const GeneratorSpec& spec) {
    const KTransform kt(spec.pair.kappa, spec.T_c);
    const double du = kt.forward(spec.T_h) - spec.T_c;
    const auto& rho = spec.pair.rho.family();
    if (auto c = std::get_if<family::Constant>(&rho)) return PiecewiseRhoHat{c->c, 0.0, du};
    if (auto cl = std::get_if<family::ClampedLinear>(&rho); cl && cl->T_pivot == spec.T_h) {
        if (auto k = std::get_if<family::Constant>(&spec.pair.kappa.family()))
            return PiecewiseRhoHat{cl->v_pivot, cl->M / k->c, du};
    }
    if (auto ct = std::get_if<family::ClampedTransformLinear>(&rho);
        ct && ct->T_pivot == spec.T_h && *ct->kappa == spec.pair.kappa)
        return PiecewiseRhoHat{ct->v_pivot, ct->M, du};
    return std::nullopt;
}

namespace {

double descent_time(const PiecewiseRhoHat& p, double theta_nonpos) {
    // Root of u_h + theta y - rho_h y^2 / 2 = u_c in the conjugate form.
    const double s = std::sqrt(theta_nonpos * theta_nonpos + 2.0 * p.rho_h * p.delta_u);
    return 2.0 * p.delta_u / (s - theta_nonpos);
}

double arc_time(const PiecewiseRhoHat& p, double theta) {
    if (p.slope == 0.0) return 2.0 * theta / p.rho_h;
    const double sm = std::sqrt(p.slope);
    return 2.0 / sm * std::atan(sm * theta / p.rho_h);
}

}  // namespace

std::optional<double> hitting_time_exact(const GeneratorSpec& spec, double theta) {
    if (!(spec.T_h > spec.T_c)) return std::nullopt;
    const auto p = piecewise_rho_hat(spec);
    if (!p) return std::nullopt;
    if (theta <= 0) return descent_time(*p, theta);
    return arc_time(*p, theta) + descent_time(*p, -theta);
}

std::optional<double> H_of_theta_exact(const LoadResistanceProblem& prob, double theta) {
    const auto p = piecewise_rho_hat(prob.spec);
    const auto yc = hitting_time_exact(prob.spec, theta);
    if (!p || !yc) return std::nullopt;
    return shooting_function_from_r(p->rho_h * p->delta_u, theta) + prob.S_load() * *yc;
}

std::optional<double> H_prime_exact(const LoadResistanceProblem& prob, double theta) {
    const auto p = piecewise_rho_hat(prob.spec);
    if (!p || !(prob.spec.T_h > prob.spec.T_c)) return std::nullopt;
    const double s = std::sqrt(theta * theta + 2.0 * p->rho_h * p->delta_u);
    const double dI = 1.0 + theta / s;
    double dyc = (1.0 + theta / s) / p->rho_h;
    if (theta > 0)
        dyc = 2.0 / (p->rho_h * (1.0 + p->slope * theta * theta / (p->rho_h * p->rho_h))) +
              (theta / s - 1.0) / p->rho_h;
    return dI + prob.S_load() * dyc;
}

LoadModel::LoadModel(LoadResistanceProblem prob, IvpOptions opts)
    : prob_(std::move(prob)), shooter_((prob_.validate(), prob_.spec), opts) {
    r_ = prob_.spec.coupling_integral();
}

double LoadModel::hitting_time(double theta) const { return shooter_.integrate(theta).y_c; }

double LoadModel::H(double theta) const {
    return shooting_function_from_r(r_, theta) + prob_.S_load() * hitting_time(theta);
}

double H_of_theta(const LoadResistanceProblem& prob, double theta, const IvpOptions& opts) {
    return LoadModel(prob, opts).H(theta);
}

namespace {

std::vector<double> evaluate_all(const LoadModel& model, const std::vector<double>& thetas,
                                 unsigned threads) {
    std::vector<double> out(thetas.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, thetas.size() / 64)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < thetas.size(); ++i) out[i] = model.H(thetas[i]);
        return out;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (thetas.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    const std::size_t end = std::min(thetas.size(), (t + 1) * chunk);
                    for (std::size_t i = t * chunk; i < end; ++i) out[i] = model.H(thetas[i]);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

struct Candidate {
    double theta;
    double g;
    bool tangent;
};

}  // namespace

SolutionSet enumerate_solutions(const LoadResistanceProblem& prob, const ScanOptions& opts) {
    prob.validate();
    if (opts.samples < 3) throw InvalidModel("scan needs at least 3 samples");
    const LoadModel model(prob, opts.ivp);
    const double target = std::abs(prob.spec.voltage());
    const double r = prob.spec.coupling_integral();
    auto g = [&](double theta) { return model.H(theta) - target; };

    SolutionSet set;
    ScanDiagnostics& diag = set.diagnostics;
    diag.samples = opts.samples;
    diag.tol_tangent = opts.tol_tangent > 0
                           ? opts.tol_tangent
                           : std::max(10.0 * opts.tol_root, 100.0 * opts.ivp.tol_ode * target);

    // H(theta) > I(theta) > theta, so g(|V|) > 0.
    diag.theta_hi = target;
    const double floor = -1e3 * std::sqrt(2.0 * r);
    double lo = -0.0625 * std::sqrt(2.0 * r);
    while (g(lo) >= 0) {
        if (lo <= floor) {
            lo = floor;
            diag.floor_hit = true;
            diag.notes.push_back("lower scan bound reached the floor without H < |V|");
            break;
        }
        lo = std::max(2.0 * lo, floor);
    }
    diag.theta_lo = lo;

    const std::size_t n = opts.samples;
    std::vector<double> thetas(n);
    for (std::size_t i = 0; i < n; ++i)
        thetas[i] = lo + (diag.theta_hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const std::vector<double> H = evaluate_all(model, thetas, opts.threads);
    std::vector<double> gs(n);
    set.h_curve.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        gs[i] = H[i] - target;
        set.h_curve.emplace_back(thetas[i], H[i]);
    }
    const double step = thetas[1] - thetas[0];

    std::vector<Candidate> found;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (gs[i] == 0.0) {
            found.push_back({thetas[i], 0.0, false});
            continue;
        }
        if ((gs[i] < 0) != (gs[i + 1] < 0) && gs[i + 1] != 0.0) {
            auto root = refine_bracket(g, thetas[i], thetas[i + 1], gs[i], gs[i + 1], opts.tol_root,
                                       1e-15 * std::max(1.0, std::abs(thetas[i])));
            found.push_back({root.x, root.fx, false});
            ++diag.sign_changes;
        }
    }
    if (gs[n - 1] == 0.0) found.push_back({thetas[n - 1], 0.0, false});

    // Extremum of g on [a, b] in the direction of zero.
    auto extremum = [&](double a, double b, double sign) {
        auto [x, fx] = golden_minimize([&](double t) { return sign * g(t); }, a, b,
                                       1e-10 * std::max(1.0, std::abs(a)));
        return std::pair{x, sign * fx};
    };

    // Touching extrema that the sign scan cannot see.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const bool same_sign = (gs[i - 1] > 0) == (gs[i] > 0) && (gs[i] > 0) == (gs[i + 1] > 0);
        if (!same_sign || gs[i] == 0.0) continue;
        if (!(std::abs(gs[i]) <= std::abs(gs[i - 1]) && std::abs(gs[i]) <= std::abs(gs[i + 1])))
            continue;
        const double sign = gs[i] > 0 ? 1.0 : -1.0;
        auto [x, fx] = extremum(thetas[i - 1], thetas[i + 1], sign);
        if (std::abs(fx) <= diag.tol_tangent) {
            found.push_back({x, fx, true});
            ++diag.tangencies;
            std::ostringstream os;
            os.precision(17);
            os << "tangency at theta=" << x << " with H-|V|=" << fx;
            diag.notes.push_back(os.str());
        }
    }
    std::sort(found.begin(), found.end(),
              [](const Candidate& a, const Candidate& b) { return a.theta < b.theta; });

    // Two sign changes straddling one shallow extremum are a single double root.
    std::vector<Candidate> roots;
    for (std::size_t i = 0; i < found.size(); ++i) {
        if (i + 1 < found.size() && !found[i].tangent && !found[i + 1].tangent &&
            found[i + 1].theta - found[i].theta <= 2.0 * step) {
            const double mid = 0.5 * (found[i].theta + found[i + 1].theta);
            const double sign = g(mid) > 0 ? 1.0 : -1.0;
            auto [x, fx] = extremum(found[i].theta, found[i + 1].theta, sign);
            if (std::abs(fx) <= diag.tol_tangent) {
                roots.push_back({x, fx, true});
                ++diag.tangencies;
                ++diag.merged;
                diag.notes.push_back("merged a root pair straddling a tangency");
                ++i;
                continue;
            }
        }
        if (!roots.empty() && found[i].theta - roots.back().theta <= 10.0 * opts.tol_root) {
            ++diag.merged;
            diag.notes.push_back("merged roots closer than 10 tol_root");
            continue;
        }
        roots.push_back(found[i]);
    }

    if (roots.empty()) {
        std::ostringstream os;
        os.precision(17);
        os << "no root of H(theta) = |V| = " << target << " on [" << diag.theta_lo << ", "
           << diag.theta_hi << "] at " << n << " samples; H(theta_lo) - |V| = " << gs.front();
        throw ScanIncomplete(os.str());
    }

    for (const Candidate& c : roots) {
        UTrajectory traj = model.shooter().integrate(c.theta);
        LoadRoot root{};
        root.theta = c.theta;
        root.y_c = traj.y_c;
        root.tangent = c.tangent;
        root.residual = std::abs(shooting_function_from_r(r, c.theta) + prob.S_load() * traj.y_c - target);
        root.solution = reconstruct_solution(model.shooter(), std::move(traj), prob.R_load);
        root.R_internal = root.solution.R_internal;
        root.R_total = root.solution.R_total;
        root.gamma_equiv = prob.R_load / root.R_internal;
        root.eta = root.solution.eta_numeric;
        set.roots.push_back(std::move(root));
    }
    return set;
}

NonuniqueConstruction construct_nonunique_example(const GeneratorSpec& base, double rho_h,
                                                  double s_ratio) {
    if (!(rho_h > 0) || !std::isfinite(rho_h)) throw InvalidModel("rho_h must be positive");
    if (!(s_ratio > 0) || !std::isfinite(s_ratio)) throw InvalidModel("s_ratio must be positive");
    if (!(base.T_h > base.T_c)) throw DegenerateError("construction needs T_h > T_c");
    base.pair.kappa.validate(base.T_c);

    const KTransform kt(base.pair.kappa, base.T_c);
    const double du = kt.forward(base.T_h) - base.T_c;

    NonuniqueConstruction out{{base, 0.0}, 0.0, 0.0, 0.0, 0.0, false, {}};
    out.theta_1 = std::sqrt(2.0 * rho_h * du / 3.0);
    out.M = 16.0 * rho_h * rho_h / (out.theta_1 * out.theta_1);
    out.s_ratio = s_ratio;
    out.H_prime_theta_1 = 1.5 - 13.0 / 34.0 * s_ratio;
    out.guaranteed = s_ratio > 51.0 / 13.0;

    GeneratorSpec spec = base;
    if (auto k = std::get_if<family::Constant>(&base.pair.kappa.family()))
        spec.pair.rho = PropertyModel::clamped_linear(out.M * k->c, base.T_h, rho_h);
    else
        spec.pair.rho = PropertyModel::clamped_transform_linear(out.M, base.T_h, rho_h, base.pair.kappa);
    spec.pair.alpha0 = 1.0;  // placeholder so the H closed form can be evaluated

    out.problem.spec = spec;
    out.problem.R_load = s_ratio * rho_h * base.L / base.A_c;
    const double V = *H_of_theta_exact(out.problem, out.theta_1);
    out.problem.spec.pair.alpha0 = V / base.delta_T();

    // Closed-form roots: scan the exact H on a fine grid around theta_1.
    auto h = [&](double t) { return *H_of_theta_exact(out.problem, t) - V; };
    const double span = std::max(V, 4.0 * out.theta_1);
    const int n = 20000;
    double prev_t = -span, prev_h = h(prev_t);
    for (int i = 1; i <= n; ++i) {
        const double t = -span + 2.0 * span * i / n;
        const double ht = h(t);
        if (std::abs(t - out.theta_1) < 1e-12 * span) {
            out.predicted_roots.push_back(out.theta_1);
        } else if ((prev_h < 0) != (ht < 0) &&
                   !(std::abs(prev_t - out.theta_1) < 1e-12 * span)) {
            auto root = refine_bracket(h, prev_t, t, prev_h, ht, 1e-13, 1e-15);
            if (std::abs(root.x - out.theta_1) > 1e-9) out.predicted_roots.push_back(root.x);
        }
        prev_t = t;
        prev_h = ht;
    }
    if (std::find(out.predicted_roots.begin(), out.predicted_roots.end(), out.theta_1) ==
        out.predicted_roots.end())
        out.predicted_roots.push_back(out.theta_1);
    std::sort(out.predicted_roots.begin(), out.predicted_roots.end());
    return out;
}

}  // namespace teg
