// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "lwreg/simd/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>
#include <cstdint>

namespace lwreg::simd::detail {

namespace {

// exp(x) for x <= 0: Cody-Waite reduction x = k ln2 + r, |r| <= ln2/2, then a
// degree-13 Taylor polynomial (truncation ~4e-18 relative). Flushes to zero
// below -708 where 2^k would leave the normal range.
inline __m256d exp_nonpositive(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
    const __m256d lower = _mm256_set1_pd(-708.0);

    const __m256d underflow = _mm256_cmp_pd(x, lower, _CMP_LT_OQ);
    x = _mm256_max_pd(x, lower);

    const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
    r = _mm256_fnmadd_pd(k, ln2_lo, r);

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
    __m256d p = _mm256_set1_pd(c[13]);
    for (int i = 12; i >= 0; --i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[i]));

    // 2^k through the exponent field; k + 2^52 + 2^51 exposes k in the low bits.
    const __m256d magic = _mm256_set1_pd(6755399441055744.0);
    const __m256i kbits = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(k, magic)),
                                           _mm256_castpd_si256(magic));
    const __m256i expo = _mm256_slli_epi64(_mm256_add_epi64(kbits, _mm256_set1_epi64x(1023)), 52);
    const __m256d scale = _mm256_castsi256_pd(expo);

    return _mm256_andnot_pd(underflow, _mm256_mul_pd(p, scale));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    const __m256d acc = _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) s = std::fma(a[i], b[i], s);
    return s;
}

double weighted_square_sum_avx2(const double* w, const double* v, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d v0 = _mm256_loadu_pd(v + i);
        const __m256d v1 = _mm256_loadu_pd(v + i + 4);
        acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), v0), v0, acc0);
        acc1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i + 4), v1), v1, acc1);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) s += w[i] * v[i] * v[i];
    return s;
}

double max_abs_avx2(const double* v, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(v + i)));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    double r = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
    for (; i < n; ++i) r = std::fmax(r, std::fabs(v[i]));
    return r;
}

void minkowski_inner_avx2(const double* const a[4], const double* const b[4], double* out,
                          std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s = _mm256_mul_pd(_mm256_loadu_pd(a[0] + i), _mm256_loadu_pd(b[0] + i));
        s = _mm256_fnmadd_pd(_mm256_loadu_pd(a[1] + i), _mm256_loadu_pd(b[1] + i), s);
        s = _mm256_fnmadd_pd(_mm256_loadu_pd(a[2] + i), _mm256_loadu_pd(b[2] + i), s);
        s = _mm256_fnmadd_pd(_mm256_loadu_pd(a[3] + i), _mm256_loadu_pd(b[3] + i), s);
        _mm256_storeu_pd(out + i, s);
    }
    for (; i < n; ++i)
        out[i] = a[0][i] * b[0][i] - a[1][i] * b[1][i] - a[2][i] * b[2][i] - a[3][i] * b[3][i];
}

template <bool Derivative>
void bump_avx2(const double* s, double* out, std::size_t n, double norm) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d three = _mm256_set1_pd(3.0);
    const __m256d vnorm = _mm256_set1_pd(norm);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d u = _mm256_fmsub_pd(two, _mm256_loadu_pd(s + i), three);
        const __m256d q = _mm256_fnmadd_pd(u, u, one);
        const __m256d inside = _mm256_cmp_pd(q, zero, _CMP_GT_OQ);
        const __m256d qsafe = _mm256_blendv_pd(one, q, inside);
        __m256d val = _mm256_mul_pd(vnorm, exp_nonpositive(_mm256_div_pd(_mm256_set1_pd(-1.0), qsafe)));
        if constexpr (Derivative) {
            const __m256d factor =
                _mm256_div_pd(_mm256_mul_pd(_mm256_set1_pd(-4.0), u), _mm256_mul_pd(qsafe, qsafe));
            val = _mm256_mul_pd(val, factor);
        }
        _mm256_storeu_pd(out + i, _mm256_and_pd(inside, val));
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

const KernelTable* avx2_table() {
    static const KernelTable table{dot_avx2,          weighted_square_sum_avx2, max_abs_avx2,
                                   minkowski_inner_avx2, bump_avx2<false>,      bump_avx2<true>};
    return &table;
}

} // namespace lwreg::simd::detail

#else

namespace lwreg::simd::detail {
const KernelTable* avx2_table() { return nullptr; }
} // namespace lwreg::simd::detail

#endif
