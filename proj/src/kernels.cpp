#include "teg/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace teg::kernels {

namespace detail {

void efficiency_curve_scalar(double z, double T_h, double T_c, const double* gamma, double* eta,
                             std::size_t n) {
    const double carnot = (T_h - T_c) / T_h;
    const double zt = z * T_h;
    const double half = 0.5 * carnot;
    for (std::size_t i = 0; i < n; ++i) {
        const double g1 = gamma[i] + 1.0;
        eta[i] = carnot * gamma[i] / (g1 + g1 * g1 / zt - half);
    }
}

void shooting_curve_scalar(double r, const double* theta, double* out, std::size_t n) {
    const double two_r = 2.0 * r;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = theta[i];
        const double s = std::sqrt(t * t + two_r);
        out[i] = t >= 0 ? t + s : two_r / (s - t);
    }
}

std::size_t argmax_scalar(const double* v, std::size_t n) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isnan(v[i]) && (best == n || v[i] > v[best])) best = i;
    return best;
}

#if !(defined(__x86_64__) || defined(__i386__))
void efficiency_curve_avx2(double, double, double, const double*, double*, std::size_t) {
    throw std::logic_error("AVX2 kernels not built for this target");
}
void shooting_curve_avx2(double, const double*, double*, std::size_t) {
    throw std::logic_error("AVX2 kernels not built for this target");
}
std::size_t argmax_avx2(const double*, std::size_t) {
    throw std::logic_error("AVX2 kernels not built for this target");
}
#endif

#if !defined(__aarch64__)
void efficiency_curve_neon(double, double, double, const double*, double*, std::size_t) {
    throw std::logic_error("NEON kernels not built for this target");
}
void shooting_curve_neon(double, const double*, double*, std::size_t) {
    throw std::logic_error("NEON kernels not built for this target");
}
std::size_t argmax_neon(const double*, std::size_t) {
    throw std::logic_error("NEON kernels not built for this target");
}
#endif

}  // namespace detail

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() {
    static const Isa isa = [] {
        const char* force = std::getenv("TEG_FORCE_SCALAR");
        if (force && *force && *force != '0') return Isa::Scalar;
        if (isa_available(Isa::Avx2)) return Isa::Avx2;
        if (isa_available(Isa::Neon)) return Isa::Neon;
        return Isa::Scalar;
    }();
    return isa;
}

namespace {

void check_sizes(std::size_t in, std::size_t out) {
    if (in != out) throw std::invalid_argument("kernel input and output sizes differ");
}

void check_isa(Isa isa) {
    if (!isa_available(isa))
        throw std::invalid_argument("kernel variant not available: " + std::string(to_string(isa)));
}

}  // namespace

void efficiency_curve(Isa isa, double z, double T_h, double T_c, std::span<const double> gamma,
                      std::span<double> eta) {
    check_sizes(gamma.size(), eta.size());
    check_isa(isa);
    switch (isa) {
        case Isa::Avx2:
            return detail::efficiency_curve_avx2(z, T_h, T_c, gamma.data(), eta.data(), gamma.size());
        case Isa::Neon:
            return detail::efficiency_curve_neon(z, T_h, T_c, gamma.data(), eta.data(), gamma.size());
        case Isa::Scalar: break;
    }
    detail::efficiency_curve_scalar(z, T_h, T_c, gamma.data(), eta.data(), gamma.size());
}

void efficiency_curve(double z, double T_h, double T_c, std::span<const double> gamma,
                      std::span<double> eta) {
    efficiency_curve(active_isa(), z, T_h, T_c, gamma, eta);
}

void shooting_curve(Isa isa, double r, std::span<const double> theta, std::span<double> out) {
    check_sizes(theta.size(), out.size());
    check_isa(isa);
    switch (isa) {
        case Isa::Avx2: return detail::shooting_curve_avx2(r, theta.data(), out.data(), theta.size());
        case Isa::Neon: return detail::shooting_curve_neon(r, theta.data(), out.data(), theta.size());
        case Isa::Scalar: break;
    }
    detail::shooting_curve_scalar(r, theta.data(), out.data(), theta.size());
}

void shooting_curve(double r, std::span<const double> theta, std::span<double> out) {
    shooting_curve(active_isa(), r, theta, out);
}

std::size_t argmax(Isa isa, std::span<const double> values) {
    check_isa(isa);
    switch (isa) {
        case Isa::Avx2: return detail::argmax_avx2(values.data(), values.size());
        case Isa::Neon: return detail::argmax_neon(values.data(), values.size());
        case Isa::Scalar: break;
    }
    return detail::argmax_scalar(values.data(), values.size());
}

std::size_t argmax(std::span<const double> values) { return argmax(active_isa(), values); }

}  // namespace teg::kernels
