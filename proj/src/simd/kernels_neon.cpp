#include "lwreg/simd/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstdint>

namespace lwreg::simd::detail {

namespace {

// Same reduction and polynomial as the AVX2 exp.
inline float64x2_t exp_nonpositive(float64x2_t x) {
    const float64x2_t lower = vdupq_n_f64(-708.0);
    const uint64x2_t underflow = vcltq_f64(x, lower);
    x = vmaxq_f64(x, lower);

    const float64x2_t k = vrndnq_f64(vmulq_f64(x, vdupq_n_f64(1.4426950408889634074)));
    float64x2_t r = vfmsq_f64(x, k, vdupq_n_f64(6.93145751953125e-1));
    r = vfmsq_f64(r, k, vdupq_n_f64(1.42860682030941723212e-6));

    static constexpr double c[14] = {1.0,
                                     1.0,
                                     1.0 / 2,
                                     1.0 / 6,
                                     1.0 / 24,
                                     1.0 / 120,
                                     1.0 / 720,
                                     1.0 / 5040,
                                     1.0 / 40320,
                                     1.0 / 362880,
                                     1.0 / 3628800,
                                     1.0 / 39916800,
                                     1.0 / 479001600,
                                     1.0 / 6227020800.0};
    float64x2_t p = vdupq_n_f64(c[13]);
    for (int i = 12; i >= 0; --i) p = vfmaq_f64(vdupq_n_f64(c[i]), p, r);

    const int64x2_t expo = vshlq_n_s64(vaddq_s64(vcvtq_s64_f64(k), vdupq_n_s64(1023)), 52);
    const float64x2_t result = vmulq_f64(p, vreinterpretq_f64_s64(expo));
    return vreinterpretq_f64_u64(vbicq_u64(vreinterpretq_u64_f64(result), underflow));
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) s = std::fma(a[i], b[i], s);
    return s;
}

double weighted_square_sum_neon(const double* w, const double* v, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t vv = vld1q_f64(v + i);
        acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(w + i), vv), vv);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += w[i] * v[i] * v[i];
    return s;
}

double max_abs_neon(const double* v, std::size_t n) {
    float64x2_t m = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(v + i)));
    double r = vmaxvq_f64(m);
    for (; i < n; ++i) r = std::fmax(r, std::fabs(v[i]));
    return r;
}

void minkowski_inner_neon(const double* const a[4], const double* const b[4], double* out,
                          std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t s = vmulq_f64(vld1q_f64(a[0] + i), vld1q_f64(b[0] + i));
        s = vfmsq_f64(s, vld1q_f64(a[1] + i), vld1q_f64(b[1] + i));
        s = vfmsq_f64(s, vld1q_f64(a[2] + i), vld1q_f64(b[2] + i));
        s = vfmsq_f64(s, vld1q_f64(a[3] + i), vld1q_f64(b[3] + i));
        vst1q_f64(out + i, s);
    }
    for (; i < n; ++i)
        out[i] = a[0][i] * b[0][i] - a[1][i] * b[1][i] - a[2][i] * b[2][i] - a[3][i] * b[3][i];
}

template <bool Derivative>
void bump_neon(const double* s, double* out, std::size_t n, double norm) {
    const float64x2_t one = vdupq_n_f64(1.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t u = vfmaq_f64(vdupq_n_f64(-3.0), vdupq_n_f64(2.0), vld1q_f64(s + i));
        const float64x2_t q = vfmsq_f64(one, u, u);
        const uint64x2_t inside = vcgtq_f64(q, vdupq_n_f64(0.0));
        const float64x2_t qsafe = vbslq_f64(inside, q, one);
        float64x2_t val = vmulq_f64(vdupq_n_f64(norm), exp_nonpositive(vdivq_f64(vdupq_n_f64(-1.0), qsafe)));
        if constexpr (Derivative)
            val = vmulq_f64(val, vdivq_f64(vmulq_f64(vdupq_n_f64(-4.0), u), vmulq_f64(qsafe, qsafe)));
        vst1q_f64(out + i, vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(val), inside)));
    }
    if (i < n) {
        const auto& scalar = scalar_table();
        if constexpr (Derivative)
            scalar.bump_derivative(s + i, out + i, n - i, norm);
        else
            scalar.bump_density(s + i, out + i, n - i, norm);
    }
}

} // namespace

const KernelTable* neon_table() {
    static const KernelTable table{dot_neon,          weighted_square_sum_neon, max_abs_neon,
                                   minkowski_inner_neon, bump_neon<false>,      bump_neon<true>};
    return &table;
}

} // namespace lwreg::simd::detail

#else

namespace lwreg::simd::detail {
const KernelTable* neon_table() { return nullptr; }
} // namespace lwreg::simd::detail

#endif
