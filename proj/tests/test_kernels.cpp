#include "doctest.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "teg/analytic.hpp"
#include "teg/kernels.hpp"

using namespace teg;
namespace k = teg::kernels;

namespace {

std::vector<k::Isa> vector_isas() {
    std::vector<k::Isa> out;
    for (k::Isa isa : {k::Isa::Avx2, k::Isa::Neon})
        if (k::isa_available(isa)) out.push_back(isa);
    return out;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

}  // namespace

TEST_CASE("scalar kernels match the analytic functions exactly") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double z = 1e-4 + 3e-3 * U(rng), T_c = 250 + 100 * U(rng), T_h = T_c * (1.1 + U(rng));
        std::vector<double> g(257), eta(257);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = 6.0 * static_cast<double>(i) / 256;
        k::efficiency_curve(k::Isa::Scalar, z, T_h, T_c, g, eta);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(same_bits(eta[i], efficiency_from_z(z, T_h, T_c, g[i])));

        const double r = 0.1 + 5 * U(rng);
        std::vector<double> th(101), I(101);
        for (std::size_t i = 0; i < th.size(); ++i) th[i] = -20.0 + 0.4 * static_cast<double>(i);
        k::shooting_curve(k::Isa::Scalar, r, th, I);
        for (std::size_t i = 0; i < th.size(); ++i) CHECK(same_bits(I[i], shooting_function_from_r(r, th[i])));
    }
}

TEST_CASE("vector kernels are bit-identical to the scalar reference") {
    const auto isas = vector_isas();
    if (isas.empty()) MESSAGE("no vector variant on this CPU; only the scalar path is exercised");
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (k::Isa isa : isas) {
        CAPTURE(k::to_string(isa));
        // Odd lengths exercise the scalar tails.
        for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u, 10000u}) {
            const double z = 1e-3 * (0.1 + U(rng)), T_c = 1 + 300 * U(rng), T_h = T_c * (1.05 + 2 * U(rng));
            std::vector<double> g(n), ref(n), vec(n);
            for (auto& x : g) x = 8.0 * U(rng);
            if (n > 2) g[1] = 0.0;
            k::efficiency_curve(k::Isa::Scalar, z, T_h, T_c, g, ref);
            k::efficiency_curve(isa, z, T_h, T_c, g, vec);
            for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(ref[i], vec[i]));

            std::vector<double> th(n), Iref(n), Ivec(n);
            for (auto& x : th) x = -50.0 + 100.0 * U(rng);
            if (n > 3) th[2] = 0.0, th[3] = -0.0;
            const double r = 1e-3 + 10 * U(rng);
            k::shooting_curve(k::Isa::Scalar, r, th, Iref);
            k::shooting_curve(isa, r, th, Ivec);
            for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(Iref[i], Ivec[i]));

            std::vector<double> v(n);
            for (auto& x : v) x = std::floor(20 * U(rng));  // many ties
            CHECK(k::argmax(k::Isa::Scalar, v) == k::argmax(isa, v));
        }
    }
}

TEST_CASE("argmax semantics") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<k::Isa> all{k::Isa::Scalar};
    for (k::Isa isa : vector_isas()) all.push_back(isa);
    for (k::Isa isa : all) {
        CAPTURE(k::to_string(isa));
        CHECK(k::argmax(isa, std::vector<double>{}) == 0);
        CHECK(k::argmax(isa, std::vector<double>{nan, nan, nan, nan, nan}) == 5);
        CHECK(k::argmax(isa, std::vector<double>{1, 3, 2, 3, 3, 0, 3, 1, 3}) == 1);
        CHECK(k::argmax(isa, std::vector<double>{nan, 2, nan, 5, 5, nan, 1, 4, 5, nan}) == 3);
        std::vector<double> big(1003, -1.0);
        big[1002] = 7.0;
        CHECK(k::argmax(isa, big) == 1002);
        big[5] = 7.0;
        CHECK(k::argmax(isa, big) == 5);
        big[0] = nan;
        CHECK(k::argmax(isa, big) == 5);
        const double inf = std::numeric_limits<double>::infinity();
        CHECK(k::argmax(isa, std::vector<double>{-inf, -inf, -inf}) == 0);
    }
}

TEST_CASE("dispatch") {
    CHECK(k::isa_available(k::Isa::Scalar));
    CHECK(k::isa_available(k::active_isa()));
    std::vector<double> g{0.0, 1.0};
    std::vector<double> short_out(1);
    CHECK_THROWS_AS(k::efficiency_curve(1e-3, 500, 300, g, short_out), std::invalid_argument);
    for (k::Isa isa : {k::Isa::Avx2, k::Isa::Neon})
        if (!k::isa_available(isa)) {
            std::vector<double> out(2);
            CHECK_THROWS_AS(k::efficiency_curve(isa, 1e-3, 500, 300, g, out), std::invalid_argument);
        }
    CHECK(k::to_string(k::Isa::Scalar) == "scalar");
}

TEST_CASE("forced scalar dispatch") {
    const char* force = std::getenv("TEG_FORCE_SCALAR");
    if (force && std::string(force) == "1")
        CHECK(k::active_isa() == k::Isa::Scalar);
    else
        CHECK((k::active_isa() != k::Isa::Scalar) == !vector_isas().empty());
}
