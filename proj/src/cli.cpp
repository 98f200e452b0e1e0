#include "teg/cli.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "teg/io.hpp"
#include "teg/kernels.hpp"
#include "teg/loadmode.hpp"

namespace teg::cli {

namespace fs = std::filesystem;
using io::json;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return kUsage;
        case ErrorKind::Io: return kIo;
        case ErrorKind::Domain:
        case ErrorKind::NonPositiveValue:
        case ErrorKind::Range:
        case ErrorKind::InvalidModel: return kMaterial;
        case ErrorKind::Degenerate:
        case ErrorKind::ZeroSeebeck:
        case ErrorKind::ZeroVoltage: return kDegenerate;
        case ErrorKind::NumericalBlowup:
        case ErrorKind::NonPositiveHotFlux: return kNumerical;
        case ErrorKind::ScanIncomplete: return kScanIncomplete;
    }
    return kOther;
}

namespace {

struct Args {
    std::string command;
    std::string config;
    std::string out;
    std::optional<double> tol_ode;
    std::optional<std::size_t> scan_samples;
    bool dump_config = false;
};

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

void write_solution(const fs::path& dir, const std::string& stem, const TemperatureSolution& sol,
                    json extra) {
    io::write_text(dir / (stem + ".csv"), io::solution_csv(sol));
    json meta = io::solution_metadata(sol);
    meta.update(extra);
    io::write_json(dir / (stem + ".json"), meta);
}

void write_roots(const fs::path& dir, const SolutionSet& set) {
    io::write_text(dir / "roots.csv", io::roots_csv(set));
    for (std::size_t i = 0; i < set.roots.size(); ++i) {
        const LoadRoot& r = set.roots[i];
        write_solution(dir, "root_" + std::to_string(i), r.solution,
                       {{"gamma_equiv", r.gamma_equiv}, {"tangent", r.tangent},
                        {"residual", r.residual}});
    }
}

void print_roots(std::ostream& out, const SolutionSet& set) {
    out << "roots: " << set.roots.size() << " (scan of " << set.diagnostics.samples
        << " samples on [" << io::format_double(set.diagnostics.theta_lo) << ", "
        << io::format_double(set.diagnostics.theta_hi) << "])\n";
    for (const auto& r : set.roots)
        out << "  theta=" << io::format_double(r.theta) << " R_total=" << io::format_double(r.R_total)
            << " gamma_equiv=" << io::format_double(r.gamma_equiv) << " eta=" << io::format_double(r.eta)
            << (r.tangent ? " (tangent)" : "") << "\n";
}

LoadResistanceProblem load_problem(const io::RunConfig& cfg, const char* command) {
    if (cfg.mode.kind != io::ModeKind::Resistance && cfg.mode.kind != io::ModeKind::Multiplicity)
        throw ConfigError(std::string(command) + " needs a resistance or multiplicity mode");
    return {cfg.spec(), cfg.mode.R_load};
}

void cmd_solve(const io::RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    if (cfg.mode.kind == io::ModeKind::Sweep)
        throw ConfigError("solve needs a ratio, resistance or multiplicity mode; use sweep");
    if (cfg.mode.kind == io::ModeKind::Ratio) {
        const GeneratorSpec spec = cfg.spec();
        const TemperatureSolution sol = solve_ratio_mode(spec, cfg.mode.gamma, cfg.tol.ivp());
        json extra{{"gamma", cfg.mode.gamma}};
        if (spec.T_h > spec.T_c && spec.pair.alpha0 != 0)
            extra["eta_closed_form"] = efficiency(spec, cfg.mode.gamma);
        write_solution(dir, "solution", sol, extra);
        out << "theta=" << io::format_double(sol.theta) << " J=" << io::format_double(sol.J)
            << " R_total=" << io::format_double(sol.R_total)
            << " eta=" << io::format_double(sol.eta_numeric) << "\n";
        return;
    }
    const SolutionSet set = enumerate_solutions(load_problem(cfg, "solve"), cfg.tol.scan());
    write_roots(dir, set);
    print_roots(out, set);
}

void cmd_report(const io::RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const GeneratorSpec spec = cfg.spec();
    spec.validate();
    const MaxEfficiency best = max_efficiency(spec);
    const double gamma = cfg.mode.kind == io::ModeKind::Ratio ? cfg.mode.gamma : best.gamma_opt;
    const PerformanceReport rep = performance_report(spec, gamma);
    const ShermanCheck sh = sherman_flux_check(spec);

    std::vector<double> gammas = cfg.mode.kind == io::ModeKind::Sweep
                                     ? linspace(cfg.mode.gamma_min, cfg.mode.gamma_max, cfg.mode.n)
                                     : linspace(0.0, 4.0 * best.gamma_opt, 1001);
    std::vector<double> etas(gammas.size());
    kernels::efficiency_curve(rep.z, spec.T_h, spec.T_c, gammas, etas);
    const std::size_t k = kernels::argmax(etas);

    json j = io::report_json(rep);
    j["sherman"] = {{"lhs", sh.lhs}, {"rhs", sh.rhs}};
    j["curve_argmax_gamma"] = k < gammas.size() ? json(gammas[k]) : json(nullptr);
    j["kernel"] = std::string(kernels::to_string(kernels::active_isa()));
    io::write_json(dir / "report.json", j);
    io::write_text(dir / "eta_curve.csv", io::eta_curve_csv(gammas, etas));
    out << "z=" << io::format_double(rep.z) << " eta_max=" << io::format_double(rep.eta_max)
        << " gamma_opt=" << io::format_double(rep.gamma_opt) << " eta(" << io::format_double(gamma)
        << ")=" << io::format_double(rep.eta_of_gamma) << (rep.decreasing ? " decreasing" : "")
        << "\n";
}

void cmd_sweep(const io::RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    if (cfg.mode.kind != io::ModeKind::Sweep) throw ConfigError("sweep needs a sweep mode");
    const GeneratorSpec spec = cfg.spec();
    const auto gammas = linspace(cfg.mode.gamma_min, cfg.mode.gamma_max, cfg.mode.n);
    const bool closed = spec.T_h > spec.T_c && spec.pair.alpha0 != 0;
    std::string csv = "gamma,eta_closed_form,eta_numeric,theta,J,R_internal\n";
    double best_eta = -1.0, best_gamma = 0.0;
    for (double g : gammas) {
        const TemperatureSolution sol = solve_ratio_mode(spec, g, cfg.tol.ivp());
        const double cf = closed ? efficiency(spec, g) : 0.0;
        csv += io::format_double(g) + "," + io::format_double(cf) + "," +
               io::format_double(sol.eta_numeric) + "," + io::format_double(sol.theta) + "," +
               io::format_double(sol.J) + "," + io::format_double(sol.R_internal) + "\n";
        if (sol.eta_numeric > best_eta) {
            best_eta = sol.eta_numeric;
            best_gamma = g;
        }
    }
    io::write_text(dir / "sweep.csv", csv);
    out << "points=" << gammas.size() << " best_gamma=" << io::format_double(best_gamma)
        << " best_eta=" << io::format_double(best_eta) << "\n";
}

void cmd_multiplicity(const io::RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const SolutionSet set = enumerate_solutions(load_problem(cfg, "multiplicity"), cfg.tol.scan());
    write_roots(dir, set);
    io::write_text(dir / "h_curve.csv", io::h_curve_csv(set));
    json summary{{"count", set.roots.size()}, {"diagnostics", io::diagnostics_json(set.diagnostics)}};
    io::write_json(dir / "multiplicity.json", summary);
    print_roots(out, set);
}

json error_record(const std::string& kind, const std::string& message, int code,
                  const std::string& command) {
    return {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}, {"command", command}}}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Args args;
    CLI::App app{"Steady-state thermoelectric generator solver", "tegsolve"};
    app.require_subcommand(1, 1);
    const std::pair<const char*, const char*> commands[] = {
        {"solve", "Solve one operating point (ratio or fixed load)"},
        {"report", "Closed-form figure of merit, efficiency and eta(gamma) curve"},
        {"sweep", "Numerical solves over a gamma grid"},
        {"multiplicity", "Enumerate all steady states at a fixed load resistance"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", args.config, "Run configuration (JSON)")->required();
        sub->add_option("--out", args.out, "Output directory (overrides output_dir)");
        sub->add_option("--tol-ode", args.tol_ode, "Integrator tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--scan-samples", args.scan_samples, "Theta samples in the root scan")
            ->check(CLI::Range(std::size_t{3}, std::size_t{100'000'000}));
        sub->add_flag("--dump-config", args.dump_config, "Print the resolved configuration and exit");
        sub->callback([&args, sub] { args.command = sub->get_name(); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << error_record("UsageError", e.what(), kUsage, args.command).dump() << "\n";
        return kUsage;
    }

    fs::path dir;
    try {
        io::RunConfig cfg = io::load_config(args.config);
        if (!args.out.empty()) cfg.output_dir = args.out;
        if (args.tol_ode) cfg.tol.tol_ode = *args.tol_ode;
        if (args.scan_samples) cfg.tol.scan_samples = *args.scan_samples;
        if (args.dump_config) {
            out << io::config_to_json(cfg).dump(2) << "\n";
            return kOk;
        }
        dir = cfg.output_dir;
        if (args.command == "solve") cmd_solve(cfg, dir, out);
        else if (args.command == "report") cmd_report(cfg, dir, out);
        else if (args.command == "sweep") cmd_sweep(cfg, dir, out);
        else cmd_multiplicity(cfg, dir, out);
        return kOk;
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        const json rec = error_record(std::string(to_string(e.kind())), e.what(), code, args.command);
        err << rec.dump() << "\n";
        if (!dir.empty() && e.kind() != ErrorKind::Io) {
            try {
                io::write_json(dir / "error.json", rec);
            } catch (const Error&) {
            }
        }
        return code;
    } catch (const std::exception& e) {
        err << error_record("InternalError", e.what(), kOther, args.command).dump() << "\n";
        return kOther;
    }
}

}  // namespace teg::cli
