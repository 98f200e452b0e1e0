#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "teg/analytic.hpp"
#include "teg/ivp.hpp"
#include "teg/loadmode.hpp"

namespace teg::io {

using json = nlohmann::json;

// Material document:
//   {"kappa": {"family": "...", "params": {...}}, "rho": {...}, "alpha0": x}
// Families that wrap another model (wiedemann_franz.partner,
// clamped_transform_linear.kappa) take either the sibling name "kappa" /
// "rho" or an inline model object. Table knots are [[T, value], ...].
PropertyModel property_from_json(const json& j, const std::string& where = "property");
json property_to_json(const PropertyModel& m);
MaterialPair material_from_json(const json& j);
json material_to_json(const MaterialPair& pair);
MaterialPair load_material_file(const std::filesystem::path& path);

enum class ModeKind { Ratio, Resistance, Sweep, Multiplicity };

std::string_view to_string(ModeKind kind);

struct ModeConfig {
    ModeKind kind = ModeKind::Ratio;
    double gamma = 0.0;      // ratio
    double R_load = 0.0;     // resistance, multiplicity
    double gamma_min = 0.0;  // sweep
    double gamma_max = 0.0;
    std::size_t n = 0;

    friend bool operator==(const ModeConfig&, const ModeConfig&) = default;
};

struct Tolerances {
    double tol_ode = 1e-10;
    double tol_event = 1e-12;
    double tol_root = 1e-9;
    std::size_t n_out = 256;
    std::size_t scan_samples = 2048;
    unsigned threads = 0;

    friend bool operator==(const Tolerances&, const Tolerances&) = default;

    IvpOptions ivp() const;
    ScanOptions scan() const;
};

struct RunConfig {
    std::string material_file;  // as written in the config; empty for inline
    MaterialPair material;
    double T_h;
    double T_c;
    double L;
    double A_c;
    ModeConfig mode;
    std::string output_dir;
    Tolerances tol;

    GeneratorSpec spec() const { return {material, T_h, T_c, L, A_c}; }
    /// Equality of everything that affects results; material_file is provenance only.
    bool same_run(const RunConfig& other) const;
};

/// material_file is resolved against base_dir.
RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir = {});
/// Self-contained form: the material is always written inline.
json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

std::string format_double(double x);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const json& j);

/// x,T,q rows.
std::string solution_csv(const TemperatureSolution& sol);
json solution_metadata(const TemperatureSolution& sol);
/// theta,y_c,R_total,gamma_equiv,eta rows.
std::string roots_csv(const SolutionSet& set);
/// theta,H rows.
std::string h_curve_csv(const SolutionSet& set);
std::string eta_curve_csv(std::span<const double> gamma, std::span<const double> eta);
json report_json(const PerformanceReport& r);
json diagnostics_json(const ScanDiagnostics& d);

}  // namespace teg::io
