#pragma once

// Data-parallel inner loops with a scalar reference and vector variants
// (AVX2+FMA on x86-64, NEON on aarch64). The backend is picked once at
// startup from the CPU features; LWREG_SIMD=scalar|avx2|neon overrides.
//
// Vector variants reassociate sums and use their own exp, so results agree
// with the scalar reference to a few ulp rather than bitwise. Within one
// backend every kernel is deterministic (fixed lane order and reduction tree).

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace lwreg::simd {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view backend_name(Backend b);

/// Backends compiled in and supported by this CPU; scalar is always first.
std::vector<Backend> available_backends();

Backend active_backend();

/// Force a backend (tests, benchmarks). Throws InvalidArgument if unavailable.
void set_backend(Backend b);

/// Structure-of-arrays view over n four-vectors.
struct FourVectorSoA {
    std::span<const double> x0, x1, x2, x3;
};

/// Function table implemented by each backend.
struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*weighted_square_sum)(const double* w, const double* v, std::size_t n);
    double (*max_abs)(const double* v, std::size_t n);
    void (*minkowski_inner)(const double* const a[4], const double* const b[4], double* out,
                            std::size_t n);
    /// out[i] = norm * exp(-1/(1-u^2)) with u = 2 s[i] - 3, zero for |u| >= 1.
    void (*bump_density)(const double* s, double* out, std::size_t n, double norm);
    /// Derivative of bump_density with respect to s.
    void (*bump_derivative)(const double* s, double* out, std::size_t n, double norm);
};

const KernelTable& kernels();
const KernelTable& kernels(Backend b);

// Span front-ends over the active backend.

/// sum_i a[i] b[i]; the quadrature accumulation primitive.
double dot(std::span<const double> a, std::span<const double> b);
/// sum_i w[i] v[i]^2.
double weighted_square_sum(std::span<const double> w, std::span<const double> v);
double max_abs(std::span<const double> v);
void minkowski_inner(const FourVectorSoA& a, const FourVectorSoA& b, std::span<double> out);
void bump_density(std::span<const double> s, std::span<double> out, double norm);
void bump_derivative(std::span<const double> s, std::span<double> out, double norm);

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();  // nullptr when not compiled in
} // namespace detail

} // namespace lwreg::simd
