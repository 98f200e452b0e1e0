#include "teg/io.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "teg/errors.hpp"

namespace teg::io {

namespace {

namespace fs = std::filesystem;

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

double number(const json& j, const std::string& key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError(where + "." + key + " is required");
    if (!it->is_number()) throw ConfigError(where + "." + key + " must be a number");
    return it->get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

std::size_t count_or(const json& j, const std::string& key, std::size_t fallback,
                     const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer() || it->get<long long>() < 0)
        throw ConfigError(where + "." + key + " must be a nonnegative integer");
    return it->get<std::size_t>();
}

std::string string_field(const json& j, const std::string& key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError(where + "." + key + " is required");
    if (!it->is_string()) throw ConfigError(where + "." + key + " must be a string");
    return it->get<std::string>();
}

using Resolver = std::function<PropertyModel(const std::string&)>;

PropertyModel parse_property(const json& j, const std::string& where, const Resolver& resolve) {
    require_object(j, where);
    reject_unknown(j, {"family", "params"}, where);
    const std::string fam = string_field(j, "family", where);
    const json params = j.contains("params") ? j.at("params") : json::object();
    const std::string pw = where + ".params";
    require_object(params, pw);

    auto nested = [&](const std::string& key) {
        const auto it = params.find(key);
        if (it == params.end()) throw ConfigError(pw + "." + key + " is required");
        if (it->is_string()) {
            if (!resolve) throw ConfigError(pw + "." + key + ": sibling references need a material pair");
            return resolve(it->get<std::string>());
        }
        return parse_property(*it, pw + "." + key, resolve);
    };

    if (fam == "constant") {
        reject_unknown(params, {"c"}, pw);
        return PropertyModel::constant(number(params, "c", pw));
    }
    if (fam == "linear") {
        reject_unknown(params, {"a", "b"}, pw);
        return PropertyModel::linear(number(params, "a", pw), number(params, "b", pw));
    }
    if (fam == "reciprocal") {
        reject_unknown(params, {"c"}, pw);
        return PropertyModel::reciprocal(number(params, "c", pw));
    }
    if (fam == "log_affine") {
        reject_unknown(params, {"c0", "c1", "T_ref"}, pw);
        return PropertyModel::log_affine(number(params, "c0", pw), number(params, "c1", pw),
                                         number(params, "T_ref", pw));
    }
    if (fam == "clamped_linear") {
        reject_unknown(params, {"M", "T_pivot", "v_pivot"}, pw);
        return PropertyModel::clamped_linear(number(params, "M", pw), number(params, "T_pivot", pw),
                                             number(params, "v_pivot", pw));
    }
    if (fam == "wiedemann_franz") {
        reject_unknown(params, {"Lo", "partner"}, pw);
        return PropertyModel::wiedemann_franz(number(params, "Lo", pw), nested("partner"));
    }
    if (fam == "clamped_transform_linear") {
        reject_unknown(params, {"M", "T_pivot", "v_pivot", "kappa"}, pw);
        return PropertyModel::clamped_transform_linear(
            number(params, "M", pw), number(params, "T_pivot", pw), number(params, "v_pivot", pw),
            nested("kappa"));
    }
    if (fam == "table") {
        reject_unknown(params, {"knots"}, pw);
        const auto it = params.find("knots");
        if (it == params.end() || !it->is_array())
            throw ConfigError(pw + ".knots must be an array of [T, value] pairs");
        std::vector<family::Knot> knots;
        for (const auto& k : *it) {
            if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
                throw ConfigError(pw + ".knots entries must be [T, value] number pairs");
            knots.push_back({k[0].get<double>(), k[1].get<double>()});
        }
        return PropertyModel::table(std::move(knots));
    }
    throw ConfigError(where + ": unknown family '" + fam + "'");
}

json to_json_ref(const PropertyModel& m, const std::string& sibling_name,
                 const PropertyModel* sibling);

json nested_json(const PropertyModel& inner, const std::string& sibling_name,
                 const PropertyModel* sibling) {
    if (sibling && inner == *sibling) return sibling_name;
    return to_json_ref(inner, "", nullptr);
}

json to_json_ref(const PropertyModel& m, const std::string& sibling_name,
                 const PropertyModel* sibling) {
    json params = json::object();
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, family::Constant> || std::is_same_v<F, family::Reciprocal>) {
                params["c"] = f.c;
            } else if constexpr (std::is_same_v<F, family::Linear>) {
                params["a"] = f.a;
                params["b"] = f.b;
            } else if constexpr (std::is_same_v<F, family::LogAffine>) {
                params["c0"] = f.c0;
                params["c1"] = f.c1;
                params["T_ref"] = f.T_ref;
            } else if constexpr (std::is_same_v<F, family::ClampedLinear>) {
                params["M"] = f.M;
                params["T_pivot"] = f.T_pivot;
                params["v_pivot"] = f.v_pivot;
            } else if constexpr (std::is_same_v<F, family::WiedemannFranz>) {
                params["Lo"] = f.Lo;
                params["partner"] = nested_json(*f.partner, sibling_name, sibling);
            } else if constexpr (std::is_same_v<F, family::ClampedTransformLinear>) {
                params["M"] = f.M;
                params["T_pivot"] = f.T_pivot;
                params["v_pivot"] = f.v_pivot;
                params["kappa"] = nested_json(*f.kappa, sibling_name, sibling);
            } else {
                json knots = json::array();
                for (const auto& k : f.knots) knots.push_back({k.T, k.value});
                params["knots"] = knots;
            }
        },
        m.family());
    return {{"family", std::string(m.family_name())}, {"params", params}};
}

fs::path resolve_path(const std::string& p, const fs::path& base_dir) {
    const fs::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
}

json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

}  // namespace

PropertyModel property_from_json(const json& j, const std::string& where) {
    return parse_property(j, where, nullptr);
}

json property_to_json(const PropertyModel& m) { return to_json_ref(m, "", nullptr); }

MaterialPair material_from_json(const json& j) {
    require_object(j, "material");
    reject_unknown(j, {"kappa", "rho", "alpha0"}, "material");
    for (const char* key : {"kappa", "rho"})
        if (!j.contains(key)) throw ConfigError(std::string("material.") + key + " is required");
    const double alpha0 = number(j, "alpha0", "material");

    std::vector<std::string> stack;
    Resolver resolve = [&](const std::string& name) -> PropertyModel {
        if (name != "kappa" && name != "rho")
            throw ConfigError("material: reference '" + name + "' must be \"kappa\" or \"rho\"");
        if (std::find(stack.begin(), stack.end(), name) != stack.end())
            throw ConfigError("material: circular reference through '" + name + "'");
        stack.push_back(name);
        PropertyModel m = parse_property(j.at(name), "material." + name, resolve);
        stack.pop_back();
        return m;
    };
    PropertyModel kappa = resolve("kappa");
    PropertyModel rho = resolve("rho");
    return {std::move(kappa), std::move(rho), alpha0};
}

json material_to_json(const MaterialPair& pair) {
    return {{"kappa", to_json_ref(pair.kappa, "rho", &pair.rho)},
            {"rho", to_json_ref(pair.rho, "kappa", &pair.kappa)},
            {"alpha0", pair.alpha0}};
}

MaterialPair load_material_file(const fs::path& path) {
    return material_from_json(parse_json_text(read_text(path), path.string()));
}

std::string_view to_string(ModeKind kind) {
    switch (kind) {
        case ModeKind::Ratio: return "ratio";
        case ModeKind::Resistance: return "resistance";
        case ModeKind::Sweep: return "sweep";
        case ModeKind::Multiplicity: return "multiplicity";
    }
    return "unknown";
}

IvpOptions Tolerances::ivp() const {
    IvpOptions o;
    o.tol_ode = tol_ode;
    o.tol_event = tol_event;
    o.n_out = n_out;
    return o;
}

ScanOptions Tolerances::scan() const {
    ScanOptions s;
    s.samples = scan_samples;
    s.tol_root = tol_root;
    s.threads = threads;
    s.ivp = ivp();
    return s;
}

bool RunConfig::same_run(const RunConfig& o) const {
    return material.kappa == o.material.kappa && material.rho == o.material.rho &&
           material.alpha0 == o.material.alpha0 && T_h == o.T_h && T_c == o.T_c && L == o.L &&
           A_c == o.A_c && mode == o.mode && output_dir == o.output_dir && tol == o.tol;
}

namespace {

ModeConfig parse_mode(const json& j) {
    require_object(j, "mode");
    const std::string type = string_field(j, "type", "mode");
    ModeConfig m;
    if (type == "ratio") {
        reject_unknown(j, {"type", "gamma"}, "mode");
        m.kind = ModeKind::Ratio;
        m.gamma = number(j, "gamma", "mode");
        if (!(m.gamma >= 0) || !std::isfinite(m.gamma)) throw ConfigError("mode.gamma must be >= 0");
    } else if (type == "resistance" || type == "multiplicity") {
        reject_unknown(j, {"type", "R_load"}, "mode");
        m.kind = type == "resistance" ? ModeKind::Resistance : ModeKind::Multiplicity;
        m.R_load = number(j, "R_load", "mode");
        if (!(m.R_load > 0) || !std::isfinite(m.R_load)) throw ConfigError("mode.R_load must be > 0");
    } else if (type == "sweep") {
        reject_unknown(j, {"type", "gamma_min", "gamma_max", "n"}, "mode");
        m.kind = ModeKind::Sweep;
        m.gamma_min = number(j, "gamma_min", "mode");
        m.gamma_max = number(j, "gamma_max", "mode");
        m.n = count_or(j, "n", 0, "mode");
        if (!(m.gamma_min >= 0) || !(m.gamma_max > m.gamma_min) || !std::isfinite(m.gamma_max))
            throw ConfigError("mode: need 0 <= gamma_min < gamma_max");
        if (m.n < 2) throw ConfigError("mode.n must be at least 2");
    } else {
        throw ConfigError("mode.type must be ratio, resistance, sweep or multiplicity");
    }
    return m;
}

json mode_to_json(const ModeConfig& m) {
    json j{{"type", std::string(to_string(m.kind))}};
    switch (m.kind) {
        case ModeKind::Ratio: j["gamma"] = m.gamma; break;
        case ModeKind::Resistance:
        case ModeKind::Multiplicity: j["R_load"] = m.R_load; break;
        case ModeKind::Sweep:
            j["gamma_min"] = m.gamma_min;
            j["gamma_max"] = m.gamma_max;
            j["n"] = m.n;
            break;
    }
    return j;
}

Tolerances parse_tolerances(const json& j) {
    require_object(j, "tolerances");
    reject_unknown(j, {"tol_ode", "tol_event", "tol_root", "n_out", "scan_samples", "threads"},
                   "tolerances");
    Tolerances t;
    const std::string w = "tolerances";
    t.tol_ode = number_or(j, "tol_ode", t.tol_ode, w);
    t.tol_event = number_or(j, "tol_event", t.tol_event, w);
    t.tol_root = number_or(j, "tol_root", t.tol_root, w);
    t.n_out = count_or(j, "n_out", t.n_out, w);
    t.scan_samples = count_or(j, "scan_samples", t.scan_samples, w);
    t.threads = static_cast<unsigned>(count_or(j, "threads", t.threads, w));
    for (double v : {t.tol_ode, t.tol_event, t.tol_root})
        if (!(v > 0) || !std::isfinite(v)) throw ConfigError("tolerances must be positive");
    if (t.n_out < 2) throw ConfigError("tolerances.n_out must be at least 2");
    if (t.scan_samples < 3) throw ConfigError("tolerances.scan_samples must be at least 3");
    return t;
}

}  // namespace

RunConfig config_from_json(const json& j, const fs::path& base_dir) {
    require_object(j, "config");
    reject_unknown(j, {"material", "material_file", "T_h", "T_c", "L", "A_c", "mode", "output_dir",
                       "tolerances"},
                   "config");
    if (j.contains("material") == j.contains("material_file"))
        throw ConfigError("config: give exactly one of material and material_file");
    std::string material_file;
    std::optional<MaterialPair> material;
    if (j.contains("material")) {
        material = material_from_json(j.at("material"));
    } else {
        material_file = string_field(j, "material_file", "config");
        material = load_material_file(resolve_path(material_file, base_dir));
    }
    if (!j.contains("mode")) throw ConfigError("config.mode is required");
    std::string out_dir = "out";
    if (j.contains("output_dir")) out_dir = string_field(j, "output_dir", "config");
    RunConfig cfg{material_file,
                  std::move(*material),
                  number(j, "T_h", "config"),
                  number(j, "T_c", "config"),
                  number_or(j, "L", 1.0, "config"),
                  number_or(j, "A_c", 1.0, "config"),
                  parse_mode(j.at("mode")),
                  out_dir,
                  j.contains("tolerances") ? parse_tolerances(j.at("tolerances")) : Tolerances{}};
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    return {{"material", material_to_json(cfg.material)},
            {"T_h", cfg.T_h},
            {"T_c", cfg.T_c},
            {"L", cfg.L},
            {"A_c", cfg.A_c},
            {"mode", mode_to_json(cfg.mode)},
            {"output_dir", cfg.output_dir},
            {"tolerances",
             {{"tol_ode", cfg.tol.tol_ode},
              {"tol_event", cfg.tol.tol_event},
              {"tol_root", cfg.tol.tol_root},
              {"n_out", cfg.tol.n_out},
              {"scan_samples", cfg.tol.scan_samples},
              {"threads", cfg.tol.threads}}}};
}

RunConfig load_config(const fs::path& path) {
    const json j = parse_json_text(read_text(path), path.string());
    return config_from_json(j, path.parent_path());
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw IoError("cannot write " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string solution_csv(const TemperatureSolution& sol) {
    std::string out = "x,T,q\n";
    for (const auto& p : sol.grid)
        out += format_double(p.x) + "," + format_double(p.T) + "," + format_double(p.q) + "\n";
    return out;
}

json solution_metadata(const TemperatureSolution& sol) {
    return {{"theta", sol.theta},
            {"y_c", sol.y_c},
            {"J", sol.J},
            {"voltage", sol.voltage},
            {"R_internal", sol.R_internal},
            {"R_total", sol.R_total},
            {"q_h", sol.q_h},
            {"q_c", sol.q_c},
            {"eta", sol.eta_numeric},
            {"current_residual", sol.current_residual},
            {"grid_points", sol.grid.size()}};
}

std::string roots_csv(const SolutionSet& set) {
    std::string out = "theta,y_c,R_total,gamma_equiv,eta\n";
    for (const auto& r : set.roots)
        out += format_double(r.theta) + "," + format_double(r.y_c) + "," + format_double(r.R_total) +
               "," + format_double(r.gamma_equiv) + "," + format_double(r.eta) + "\n";
    return out;
}

std::string h_curve_csv(const SolutionSet& set) {
    std::string out = "theta,H\n";
    for (const auto& [t, h] : set.h_curve) out += format_double(t) + "," + format_double(h) + "\n";
    return out;
}

std::string eta_curve_csv(std::span<const double> gamma, std::span<const double> eta) {
    std::string out = "gamma,eta\n";
    for (std::size_t i = 0; i < gamma.size() && i < eta.size(); ++i)
        out += format_double(gamma[i]) + "," + format_double(eta[i]) + "\n";
    return out;
}

json report_json(const PerformanceReport& r) {
    return {{"z", r.z},
            {"gamma", r.gamma},
            {"eta", r.eta_of_gamma},
            {"eta_max", r.eta_max},
            {"gamma_opt", r.gamma_opt},
            {"hot_flux_rel", r.hot_flux_rel},
            {"decreasing", r.decreasing},
            {"voltage", r.voltage},
            {"coupling_integral", r.coupling_integral}};
}

json diagnostics_json(const ScanDiagnostics& d) {
    return {{"theta_lo", d.theta_lo},
            {"theta_hi", d.theta_hi},
            {"samples", d.samples},
            {"sign_changes", d.sign_changes},
            {"tangencies", d.tangencies},
            {"merged", d.merged},
            {"floor_hit", d.floor_hit},
            {"tol_tangent", d.tol_tangent},
            {"notes", d.notes}};
}

}  // namespace teg::io
