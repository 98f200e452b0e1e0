// Compiled with -mavx2 (without -mfma); only reached after a runtime CPU check.
#include "teg/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace teg::kernels::detail {

void efficiency_curve_avx2(double z, double T_h, double T_c, const double* gamma, double* eta,
                           std::size_t n) {
    const double carnot = (T_h - T_c) / T_h;
    const double zt = z * T_h;
    const double half = 0.5 * carnot;
    const __m256d vc = _mm256_set1_pd(carnot);
    const __m256d vzt = _mm256_set1_pd(zt);
    const __m256d vhalf = _mm256_set1_pd(half);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d g = _mm256_loadu_pd(gamma + i);
        const __m256d g1 = _mm256_add_pd(g, one);
        __m256d den = _mm256_add_pd(g1, _mm256_div_pd(_mm256_mul_pd(g1, g1), vzt));
        den = _mm256_sub_pd(den, vhalf);
        _mm256_storeu_pd(eta + i, _mm256_div_pd(_mm256_mul_pd(vc, g), den));
    }
    efficiency_curve_scalar(z, T_h, T_c, gamma + i, eta + i, n - i);
}

void shooting_curve_avx2(double r, const double* theta, double* out, std::size_t n) {
    const __m256d two_r = _mm256_set1_pd(2.0 * r);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_loadu_pd(theta + i);
        const __m256d s = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(t, t), two_r));
        const __m256d pos = _mm256_add_pd(t, s);
        const __m256d neg = _mm256_div_pd(two_r, _mm256_sub_pd(s, t));
        const __m256d ge = _mm256_cmp_pd(t, zero, _CMP_GE_OQ);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(neg, pos, ge));
    }
    shooting_curve_scalar(r, theta + i, out + i, n - i);
}

std::size_t argmax_avx2(const double* v, std::size_t n) {
    // Per-lane first maximum; indices carried as doubles (exact below 2^53).
    __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    __m256d best_idx = _mm256_set1_pd(-1.0);
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d four = _mm256_set1_pd(4.0);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(v + i);
        const __m256d gt = _mm256_cmp_pd(x, best, _CMP_GT_OQ);
        const __m256d unset = _mm256_and_pd(_mm256_cmp_pd(best_idx, zero, _CMP_LT_OQ),
                                            _mm256_cmp_pd(x, x, _CMP_ORD_Q));
        const __m256d take = _mm256_or_pd(gt, unset);
        best = _mm256_blendv_pd(best, x, take);
        best_idx = _mm256_blendv_pd(best_idx, idx, take);
        idx = _mm256_add_pd(idx, four);
    }
    alignas(32) double lane_v[4];
    alignas(32) double lane_i[4];
    _mm256_store_pd(lane_v, best);
    _mm256_store_pd(lane_i, best_idx);
    std::size_t out = n;
    double out_v = 0.0;
    for (int l = 0; l < 4; ++l) {
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
