#include "lwreg/simd/kernels.hpp"

#include <cmath>

namespace lwreg::simd::detail {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double weighted_square_sum_scalar(const double* w, const double* v, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * v[i] * v[i];
    return s;
}

double max_abs_scalar(const double* v, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(v[i]));
    return m;
}

void minkowski_inner_scalar(const double* const a[4], const double* const b[4], double* out,
                            std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[0][i] * b[0][i] - a[1][i] * b[1][i] - a[2][i] * b[2][i] - a[3][i] * b[3][i];
}

void bump_density_scalar(const double* s, double* out, std::size_t n, double norm) {
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 2.0 * s[i] - 3.0;
        const double q = 1.0 - u * u;
        out[i] = q > 0.0 ? norm * std::exp(-1.0 / q) : 0.0;
    }
}

void bump_derivative_scalar(const double* s, double* out, std::size_t n, double norm) {
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 2.0 * s[i] - 3.0;
        const double q = 1.0 - u * u;
        // d/ds exp(-1/q) = exp(-1/q) * (-2u/q^2) * du/ds
        out[i] = q > 0.0 ? norm * std::exp(-1.0 / q) * (-4.0 * u / (q * q)) : 0.0;
    }
}

} // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{dot_scalar,          weighted_square_sum_scalar,
                                   max_abs_scalar,      minkowski_inner_scalar,
                                   bump_density_scalar, bump_derivative_scalar};
    return table;
}

} // namespace lwreg::simd::detail
