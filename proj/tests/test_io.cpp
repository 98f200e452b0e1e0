#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <string>

#include "support/random_specs.hpp"
#include "teg/errors.hpp"
#include "teg/io.hpp"

using namespace teg;
using io::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("teg_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json base_config() {
    return json::parse(R"({
      "material": {
        "kappa": {"family": "constant", "params": {"c": 1.0}},
        "rho": {"family": "constant", "params": {"c": 1.0}},
        "alpha0": 1.0
      },
      "T_h": 2.0, "T_c": 1.0,
      "mode": {"type": "ratio", "gamma": 1.0}
    })");
}

}  // namespace

TEST_CASE("every property family survives a JSON roundtrip") {
    testing::SpecSampler sampler(5);
    for (int kf = 0; kf < 7; ++kf)
        for (int rf = 0; rf < 8; ++rf) {
            if (rf == 6 || (kf == 2 && rf == 2)) continue;
            const auto rs = sampler.sample(kf, rf);
            CAPTURE(rs.kappa_family);
            CAPTURE(rs.rho_family);
            const json j = io::material_to_json(rs.spec.pair);
            const MaterialPair back = io::material_from_json(json::parse(j.dump()));
            CHECK(back.kappa == rs.spec.pair.kappa);
            CHECK(back.rho == rs.spec.pair.rho);
            CHECK(back.alpha0 == rs.spec.pair.alpha0);
        }
}

TEST_CASE("wrapped models reference their sibling or an inline model") {
    const json by_name = json::parse(R"({
      "kappa": {"family": "wiedemann_franz", "params": {"Lo": 2.44e-8, "partner": "rho"}},
      "rho": {"family": "linear", "params": {"a": 1e-5, "b": 2e-8}},
      "alpha0": 2e-4})");
    const MaterialPair a = io::material_from_json(by_name);
    CHECK(a.kappa(400.0) == doctest::Approx(2.44e-8 * 400.0 / (1e-5 * 400.0 + 2e-8)));
    CHECK(io::material_to_json(a)["kappa"]["params"]["partner"] == "rho");

    json inline_doc = by_name;
    inline_doc["kappa"]["params"]["partner"] = json::parse(R"({"family": "constant", "params": {"c": 1e-5}})");
    const MaterialPair b = io::material_from_json(inline_doc);
    CHECK(b.kappa(400.0) == doctest::Approx(2.44e-8 * 400.0 / 1e-5));
    CHECK(io::material_to_json(b)["kappa"]["params"]["partner"].is_object());

    const json cycle = json::parse(R"({
      "kappa": {"family": "wiedemann_franz", "params": {"Lo": 1.0, "partner": "rho"}},
      "rho": {"family": "clamped_transform_linear", "params": {"M": 1, "T_pivot": 2, "v_pivot": 1, "kappa": "kappa"}},
      "alpha0": 1.0})");
    CHECK_THROWS_AS(io::material_from_json(cycle), ConfigError);
}

TEST_CASE("strict parsing") {
    SUBCASE("unknown keys") {
        json j = base_config();
        j["Th"] = 2.0;
        CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
        j = base_config();
        j["material"]["kappa"]["params"]["d"] = 1.0;
        CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
        j = base_config();
        j["mode"]["R_load"] = 1.0;
        CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
    }
    SUBCASE("missing or duplicated material") {
        json j = base_config();
        j.erase("material");
        CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
        j = base_config();
        j["material_file"] = "m.json";
        CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
    }
    SUBCASE("bad values") {
        json j = base_config();
        j["mode"] = json::parse(R"({"type": "resistance", "R_load": -1})");
        CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
        j["mode"] = json::parse(R"({"type": "sweep", "gamma_min": 2, "gamma_max": 1, "n": 10})");
        CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
        j["mode"] = json::parse(R"({"type": "bogus"})");
        CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
        j = base_config();
        j["T_h"] = "hot";
        CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
        j = base_config();
        j["material"]["rho"]["family"] = "quadratic";
        CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
        j = base_config();
        j["tolerances"] = json::parse(R"({"tol_ode": 0})");
        CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
    }
    SUBCASE("defaults") {
        const auto cfg = io::config_from_json(base_config());
        CHECK(cfg.L == 1.0);
        CHECK(cfg.A_c == 1.0);
        CHECK(cfg.output_dir == "out");
        CHECK(cfg.tol == io::Tolerances{});
        CHECK(cfg.mode.kind == io::ModeKind::Ratio);
    }
}

TEST_CASE("dumped config parses back identically") {
    json j = base_config();
    j["material"]["rho"] = json::parse(
        R"({"family": "table", "params": {"knots": [[1.0, 0.5], [1.3, 0.9], [2.0, 1.1]]}})");
    j["mode"] = json::parse(R"({"type": "sweep", "gamma_min": 0.0, "gamma_max": 3.0, "n": 7})");
    j["tolerances"] = json::parse(R"({"tol_ode": 1e-9, "scan_samples": 512})");
    const auto cfg = io::config_from_json(j);
    const json dumped = io::config_to_json(cfg);
    const auto again = io::config_from_json(json::parse(dumped.dump(2)));
    CHECK(again.same_run(cfg));
    CHECK(io::config_to_json(again).dump() == dumped.dump());
}

TEST_CASE("material files resolve against the config directory") {
    const fs::path dir = scratch("files");
    io::write_json(dir / "mat" / "m.json", base_config()["material"]);
    json j = base_config();
    j.erase("material");
    j["material_file"] = "mat/m.json";
    io::write_json(dir / "run.json", j);
    const auto cfg = io::load_config(dir / "run.json");
    CHECK(cfg.material_file == "mat/m.json");
    CHECK(cfg.material.alpha0 == 1.0);

    j["material_file"] = "mat/missing.json";
    io::write_json(dir / "bad.json", j);
    try {
        io::load_config(dir / "bad.json");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("missing.json") != std::string::npos);
    }
    CHECK_THROWS_AS(io::load_config(dir / "nope.json"), IoError);
    io::write_text(dir / "broken.json", "{\"T_h\": ");
    CHECK_THROWS_AS(io::load_config(dir / "broken.json"), ConfigError);
}

TEST_CASE("number formatting roundtrips") {
    for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-308, 0.0, 11.183718799195553}) {
        const std::string s = io::format_double(x);
        CHECK(std::stod(s) == x);
    }
}

TEST_CASE("CSV writers") {
    std::vector<double> g{0.0, 0.5}, e{0.0, 0.125};
    CHECK(io::eta_curve_csv(g, e) == "gamma,eta\n0,0\n0.5,0.125\n");
    SolutionSet set;
    set.h_curve = {{-1.0, 0.25}, {2.0, 3.0}};
    CHECK(io::h_curve_csv(set) == "theta,H\n-1,0.25\n2,3\n");
    CHECK(io::roots_csv(set) == "theta,y_c,R_total,gamma_equiv,eta\n");
}
