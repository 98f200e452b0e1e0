#include "doctest.h"

#include <cmath>

#include "support/oracles.hpp"
#include "support/random_specs.hpp"
#include "teg/errors.hpp"
#include "teg/materials.hpp"

using namespace teg;
using doctest::Approx;

TEST_CASE("family evaluation") {
    CHECK(eval_property(PropertyModel::constant(1.0), 300.0) == 1.0);
    const auto clamped = PropertyModel::clamped_linear(48.0, 2.0, 2.0);
    CHECK(clamped(1.5) == 2.0);
    CHECK(clamped(2.5) == 26.0);
    CHECK(PropertyModel::reciprocal(1.0)(2.0) == 0.5);
    CHECK(PropertyModel::linear(2.0, 1.0)(3.0) == 7.0);
    CHECK(PropertyModel::log_affine(2.0, 0.5, 1.0)(std::exp(1.0)) == Approx(3.0));

    const auto rho = PropertyModel::constant(4.0);
    CHECK(PropertyModel::wiedemann_franz(2.0, rho)(3.0) == Approx(1.5));
}

TEST_CASE("table interpolates and holds the last value") {
    const auto t = PropertyModel::table({{1.0, 2.0}, {3.0, 4.0}, {4.0, 1.0}});
    CHECK(t(1.0) == 2.0);
    CHECK(t(2.0) == Approx(3.0));
    CHECK(t(3.5) == Approx(2.5));
    CHECK(t(10.0) == 1.0);
    CHECK_THROWS_AS(t(0.5), DomainError);
    CHECK_THROWS_AS(PropertyModel::table({{1.0, 2.0}, {1.0, 3.0}}), InvalidModel);
    CHECK_THROWS_AS(PropertyModel::table({{1.0, 2.0}, {2.0, -3.0}}), InvalidModel);
    CHECK_THROWS_AS(PropertyModel::table({}), InvalidModel);
}

TEST_CASE("domain and sign errors") {
    CHECK_THROWS_AS(PropertyModel::reciprocal(1.0)(0.0), DomainError);
    CHECK_THROWS_AS(PropertyModel::constant(1.0)(-1.0), DomainError);
    CHECK_THROWS_AS(PropertyModel::linear(-1.0, 1.0)(2.0), NonPositiveValue);
    CHECK_THROWS_AS(PropertyModel::constant(0.0)(1.0), NonPositiveValue);
    CHECK_THROWS_AS(PropertyModel::constant(NAN), InvalidModel);
    CHECK_THROWS_AS(PropertyModel::log_affine(1.0, 1.0, -2.0), InvalidModel);

    CHECK_THROWS_AS(PropertyModel::linear(-1.0, 10.0).validate(1.0), InvalidModel);
    CHECK_THROWS_AS(PropertyModel::log_affine(1.0, -0.2, 1.0).validate(1.0), InvalidModel);
    CHECK_NOTHROW(PropertyModel::log_affine(1.0, 0.5, 1.0).validate(1.0));
}

TEST_CASE("pair validation rejects an integrable rho*kappa") {
    const MaterialPair bad{PropertyModel::reciprocal(1.0), PropertyModel::reciprocal(1.0), 1.0};
    CHECK_THROWS_AS(bad.validate(1.0), InvalidModel);
    const MaterialPair ok{PropertyModel::reciprocal(1.0), PropertyModel::constant(1.0), 1.0};
    CHECK_NOTHROW(ok.validate(1.0));
}

TEST_CASE("K transform forward and inverse") {
    const KTransform kt(PropertyModel::linear(1.0, 0.0), 1.0);
    CHECK(k_forward(kt, 2.0) == Approx(2.5).epsilon(1e-15));
    CHECK(k_inverse(kt, 2.5) == Approx(2.0).epsilon(1e-12));
    CHECK(kt.forward(1.0) == 1.0);
    CHECK(kt.inverse(1.0) == 1.0);
    CHECK(std::isinf(kt.k_infinity()));
    CHECK_THROWS_AS(kt.forward(0.5), DomainError);
    CHECK_THROWS_AS(kt.inverse(0.5), RangeError);
}

TEST_CASE("closed-form family integrals match Simpson") {
    const std::vector<PropertyModel> models{
        PropertyModel::constant(1.7),
        PropertyModel::linear(0.3, 1.1),
        PropertyModel::reciprocal(5.0),
        PropertyModel::log_affine(1.2, 0.4, 1.5),
        PropertyModel::clamped_linear(3.0, 2.2, 0.7),
        PropertyModel::table({{0.5, 1.0}, {1.8, 3.0}, {2.6, 2.0}}),
        PropertyModel::wiedemann_franz(0.8, PropertyModel::linear(0.5, 0.2)),
        PropertyModel::clamped_transform_linear(2.0, 1.9, 0.9, PropertyModel::linear(0.5, 0.2)),
    };
    for (const auto& m : models) {
        CAPTURE(m.family_name());
        const double oracle = testing::simpson_split([&](double T) { return m(T); }, 1.0, 3.0,
                                                     m.breakpoints(), 4000);
        CHECK(m.integral(1.0, 3.0) == Approx(oracle).epsilon(1e-10));
        CHECK(m.integral(3.0, 1.0) == Approx(-oracle).epsilon(1e-10));
    }
}

TEST_CASE("clamped transform resistivity is affine in K above the pivot") {
    const auto kappa = PropertyModel::linear(1.0, 0.5);
    const auto rho = PropertyModel::clamped_transform_linear(3.0, 2.0, 1.5, kappa);
    const KTransform kt(kappa, 1.0);
    CHECK(rho(1.5) == 1.5);
    CHECK(rho(3.0) == Approx(1.5 + 3.0 * (kt.forward(3.0) - kt.forward(2.0))));
}

TEST_CASE("coupling integral closed forms") {
    const double T_c = 300.0, T_h = 500.0, T_m = 400.0;
    SUBCASE("constant rho times reciprocal kappa") {
        const MaterialPair p{PropertyModel::reciprocal(600.0), PropertyModel::constant(1e-5), 0.0};
        CHECK(rho_kappa_integral(p, T_c, T_h) == Approx(1e-5 * 600.0 * std::log(T_h / T_c)).epsilon(1e-14));
    }
    SUBCASE("log-affine rho times reciprocal kappa") {
        const double rho1 = 0.7;
        const MaterialPair p{PropertyModel::reciprocal(600.0),
                             PropertyModel::log_affine(1e-5, rho1 * rho1, T_m), 0.0};
        const double expect = 1e-5 * 600.0 * (1 + 0.5 * rho1 * rho1 * std::log(T_h * T_c / (T_m * T_m))) *
                              std::log(T_h / T_c);
        REQUIRE(rho_kappa_integral_exact(p, T_c, T_h).has_value());
        CHECK(rho_kappa_integral(p, T_c, T_h) == Approx(expect).epsilon(1e-13));
    }
    SUBCASE("Wiedemann-Franz pair") {
        const auto rho = PropertyModel::linear(2e-8, 1e-6);
        const MaterialPair p{PropertyModel::wiedemann_franz(2.44e-8, rho), rho, 0.0};
        CHECK(rho_kappa_integral(p, T_c, T_h) == Approx(2.44e-8 * 0.5 * (T_h * T_h - T_c * T_c)).epsilon(1e-13));
    }
    SUBCASE("errors") {
        const MaterialPair p{PropertyModel::constant(1.0), PropertyModel::constant(1.0), 0.0};
        CHECK(rho_kappa_integral(p, T_c, T_c) == 0.0);
        CHECK_THROWS_AS(rho_kappa_integral(p, T_h, T_c), DomainError);
    }
}

TEST_CASE("coupling integral matches Simpson for every family pairing") {
    testing::SpecSampler sampler(7);
    for (int kf = 0; kf < 7; ++kf)
        for (int rf = 0; rf < 8; ++rf) {
            if (rf == 6 || (kf == 2 && rf == 2)) continue;  // reciprocal x reciprocal is invalid
            const auto rs = sampler.sample(kf, rf);
            CAPTURE(rs.kappa_family);
            CAPTURE(rs.rho_family);
            const auto& p = rs.spec.pair;
            auto cuts = p.kappa.breakpoints();
            for (double b : p.rho.breakpoints()) cuts.push_back(b);
            const double oracle = testing::simpson_split(
                [&](double T) { return p.kappa(T) * p.rho(T); }, rs.spec.T_c, rs.spec.T_h, cuts, 4000);
            CHECK(rs.spec.coupling_integral() == Approx(oracle).epsilon(1e-10));
        }
}

TEST_CASE("K roundtrip on random kappa models") {
    testing::SpecSampler sampler(11);
    for (int i = 0; i < 100; ++i) {
        const auto rs = sampler.sample();
        const KTransform kt(rs.spec.pair.kappa, rs.spec.T_c);
        for (int j = 0; j < 10; ++j) {
            const double T = rs.spec.T_c + sampler.uniform(0.0, 3.0) * rs.spec.delta_T();
            const double u = kt.forward(T);
            CHECK(std::abs(kt.forward(kt.inverse(u)) - u) <= std::max(KTransform::tol_inverse, 16 * 2.2e-16 * u));
            CHECK(kt.inverse(u) == Approx(T).epsilon(1e-10));
        }
    }
}

TEST_CASE("K is strictly increasing") {
    const KTransform kt(PropertyModel::table({{1.0, 0.1}, {2.0, 5.0}, {3.0, 0.2}}), 1.0);
    double prev = kt.forward(1.0);
    for (double T = 1.01; T < 6.0; T += 0.01) {
        const double u = kt.forward(T);
        CHECK(u > prev);
        prev = u;
    }
}
