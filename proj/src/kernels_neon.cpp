#include "teg/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <limits>

namespace teg::kernels::detail {

void efficiency_curve_neon(double z, double T_h, double T_c, const double* gamma, double* eta,
                           std::size_t n) {
    const double carnot = (T_h - T_c) / T_h;
    const double zt = z * T_h;
    const double half = 0.5 * carnot;
    const float64x2_t vc = vdupq_n_f64(carnot);
    const float64x2_t vzt = vdupq_n_f64(zt);
    const float64x2_t vhalf = vdupq_n_f64(half);
    const float64x2_t one = vdupq_n_f64(1.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t g = vld1q_f64(gamma + i);
        const float64x2_t g1 = vaddq_f64(g, one);
        float64x2_t den = vaddq_f64(g1, vdivq_f64(vmulq_f64(g1, g1), vzt));
        den = vsubq_f64(den, vhalf);
        vst1q_f64(eta + i, vdivq_f64(vmulq_f64(vc, g), den));
    }
    efficiency_curve_scalar(z, T_h, T_c, gamma + i, eta + i, n - i);
}

void shooting_curve_neon(double r, const double* theta, double* out, std::size_t n) {
    const float64x2_t two_r = vdupq_n_f64(2.0 * r);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t t = vld1q_f64(theta + i);
        const float64x2_t s = vsqrtq_f64(vaddq_f64(vmulq_f64(t, t), two_r));
        const float64x2_t pos = vaddq_f64(t, s);
        const float64x2_t neg = vdivq_f64(two_r, vsubq_f64(s, t));
        const uint64x2_t ge = vcgezq_f64(t);
        vst1q_f64(out + i, vbslq_f64(ge, pos, neg));
    }
    shooting_curve_scalar(r, theta + i, out + i, n - i);
}

std::size_t argmax_neon(const double* v, std::size_t n) {
    float64x2_t best = vdupq_n_f64(-std::numeric_limits<double>::infinity());
    float64x2_t best_idx = vdupq_n_f64(-1.0);
    float64x2_t idx = {0.0, 1.0};
    const float64x2_t two = vdupq_n_f64(2.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t x = vld1q_f64(v + i);
        const uint64x2_t gt = vcgtq_f64(x, best);
        const uint64x2_t unset = vandq_u64(vcltzq_f64(best_idx), vceqq_f64(x, x));
        const uint64x2_t take = vorrq_u64(gt, unset);
        best = vbslq_f64(take, x, best);
        best_idx = vbslq_f64(take, idx, best_idx);
        idx = vaddq_f64(idx, two);
    }
    double lane_v[2];
    double lane_i[2];
    vst1q_f64(lane_v, best);
    vst1q_f64(lane_i, best_idx);
    std::size_t out = n;
    double out_v = 0.0;
    for (int l = 0; l < 2; ++l) {
        if (lane_i[l] < 0) continue;
        const auto li = static_cast<std::size_t>(lane_i[l]);
        if (out == n || lane_v[l] > out_v || (lane_v[l] == out_v && li < out)) {
            out = li;
            out_v = lane_v[l];
        }
    }
    for (; i < n; ++i)
        if (!std::isnan(v[i]) && (out == n || v[i] > out_v)) {
            out = i;
            out_v = v[i];
        }
    return out;
}

}  // namespace teg::kernels::detail

#endif
