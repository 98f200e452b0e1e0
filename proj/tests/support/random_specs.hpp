#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "teg/analytic.hpp"
#include "teg/errors.hpp"

namespace teg::testing {

inline constexpr std::array<const char*, 8> kFamilies = {
    "constant", "linear", "reciprocal", "log_affine", "clamped_linear", "table",
    "wiedemann_franz", "clamped_transform_linear"};

struct RandomSpec {
    GeneratorSpec spec;
    std::string kappa_family;
    std::string rho_family;
};

/// Random but valid generator specs. Scales are either unit-like or
/// SI-like; alpha0 is set from a target z*T_m so efficiencies stay moderate.
class SpecSampler {
public:
    explicit SpecSampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    std::mt19937_64& rng() { return rng_; }

    /// kappa_family / rho_family: index into kFamilies or -1 for random.
    /// wiedemann_franz applies to kappa only, clamped_transform_linear to rho only.
    RandomSpec sample(int kappa_family = -1, int rho_family = -1, double zT_lo = 0.2,
                      double zT_hi = 3.0) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const bool si = pick(2) == 1;
            const double T_c = si ? uniform(250.0, 400.0) : uniform(0.5, 2.0);
            const double T_h = T_c * uniform(1.1, 2.5);
            const double k0 = si ? uniform(0.8, 2.5) : uniform(0.5, 2.0);
            const double r0 = si ? uniform(5e-6, 3e-5) : uniform(0.5, 2.0);
            const double L = si ? uniform(1e-3, 5e-3) : uniform(0.5, 2.0);
            const double A_c = si ? uniform(1e-6, 1e-5) : uniform(0.5, 2.0);

            int kf = kappa_family >= 0 ? kappa_family : pick(7);  // no clamped_transform_linear
            int rf = rho_family >= 0 ? rho_family : pick(8);
            if (rf == 6) rf = 0;  // keep wiedemann_franz on the kappa side
            if (kappa_family < 0 && kf == 6 && rho_family < 0 && pick(2) == 0) kf = 0;
            try {
                PropertyModel rho = basic(rf == 7 ? 0 : rf, r0, T_c, T_h);
                PropertyModel kappa = kf == 6 ? PropertyModel::wiedemann_franz(k0 * r0 / (0.5 * (T_h + T_c)), rho)
                                              : basic(kf, k0, T_c, T_h);
                if (rf == 7) {
                    const double T_p = T_c + uniform(0.2, 0.8) * (T_h - T_c);
                    const double dK = kappa.integral(T_c, T_h);
                    rho = PropertyModel::clamped_transform_linear(r0 * uniform(0.5, 3.0) / dK, T_p, r0,
                                                                  kappa);
                }
                GeneratorSpec spec{MaterialPair{kappa, rho, 1.0}, T_h, T_c, L, A_c};
                spec.validate();
                const double zT = uniform(zT_lo, zT_hi);
                const double z = zT / spec.T_mean();
                const double r = spec.coupling_integral();
                const double alpha = std::sqrt(z * r / spec.delta_T());
                spec.pair.alpha0 = pick(4) == 0 ? -alpha : alpha;
                return {spec, kFamilies[kf], kFamilies[rf]};
            } catch (const Error&) {
            }
        }
        throw std::runtime_error("SpecSampler: no valid spec found");
    }

private:
    PropertyModel basic(int f, double s, double T_c, double T_h) {
        const double T_m = 0.5 * (T_c + T_h);
        const double dT = T_h - T_c;
        switch (f) {
            case 0: return PropertyModel::constant(s * uniform(0.5, 2.0));
            case 1: {
                const double slope = s * uniform(0.2, 1.0) / T_m;
                return PropertyModel::linear(slope, s * uniform(0.1, 1.0));
            }
            case 2: return PropertyModel::reciprocal(s * T_m * uniform(0.5, 2.0));
            case 3: return PropertyModel::log_affine(s, uniform(0.05, 0.6), T_c * uniform(0.9, 1.2));
            case 4:
                return PropertyModel::clamped_linear(s * uniform(0.5, 3.0) / dT,
                                                     T_c + uniform(0.2, 0.8) * dT, s);
            case 5: {
                std::vector<family::Knot> knots;
                const int n = 3 + pick(4);
                const double lo = T_c * 0.95, hi = T_h * 1.05;
                for (int i = 0; i < n; ++i)
                    knots.push_back({lo + (hi - lo) * i / (n - 1), s * uniform(0.5, 2.0)});
                return PropertyModel::table(std::move(knots));
            }
            default: return PropertyModel::constant(s);
        }
    }

    std::mt19937_64 rng_;
};

}  // namespace teg::testing
