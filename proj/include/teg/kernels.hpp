#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Batch kernels for the closed-form sweeps. Each has a scalar reference
// version and vector variants that must agree with it bit for bit: the
// vector code uses the same operation order and no fused multiply-add.

namespace teg::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

/// Best variant the running CPU supports. TEG_FORCE_SCALAR=1 in the
/// environment pins the scalar path.
Isa active_isa();
bool isa_available(Isa isa);

/// eta[i] = efficiency_from_z(z, T_h, T_c, gamma[i]).
void efficiency_curve(double z, double T_h, double T_c, std::span<const double> gamma,
                      std::span<double> eta);
void efficiency_curve(Isa isa, double z, double T_h, double T_c, std::span<const double> gamma,
                      std::span<double> eta);

/// out[i] = shooting_function_from_r(r, theta[i]).
void shooting_curve(double r, std::span<const double> theta, std::span<double> out);
void shooting_curve(Isa isa, double r, std::span<const double> theta, std::span<double> out);

/// Index of the first maximum, ignoring NaNs. Returns values.size() when
/// there is no non-NaN entry.
std::size_t argmax(std::span<const double> values);
std::size_t argmax(Isa isa, std::span<const double> values);

namespace detail {

void efficiency_curve_scalar(double z, double T_h, double T_c, const double* gamma, double* eta,
                             std::size_t n);
void shooting_curve_scalar(double r, const double* theta, double* out, std::size_t n);
std::size_t argmax_scalar(const double* v, std::size_t n);

void efficiency_curve_avx2(double z, double T_h, double T_c, const double* gamma, double* eta,
                           std::size_t n);
void shooting_curve_avx2(double r, const double* theta, double* out, std::size_t n);
std::size_t argmax_avx2(const double* v, std::size_t n);

void efficiency_curve_neon(double z, double T_h, double T_c, const double* gamma, double* eta,
                           std::size_t n);
void shooting_curve_neon(double r, const double* theta, double* out, std::size_t n);
std::size_t argmax_neon(const double* v, std::size_t n);

}  // namespace detail

}  // namespace teg::kernels
