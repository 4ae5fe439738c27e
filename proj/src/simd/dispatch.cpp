#include "lwreg/errors.hpp"
#include "lwreg/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace lwreg::simd {

namespace {

bool cpu_supports(Backend b) {
    switch (b) {
    case Backend::kScalar:
        return true;
    case Backend::kAvx2:
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
        return detail::avx2_table() != nullptr && __builtin_cpu_supports("avx2") &&
               __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Backend::kNeon:
        return detail::neon_table() != nullptr;
    }
    return false;
}

Backend pick_default() {
    if (const char* env = std::getenv("LWREG_SIMD")) {
        const std::string want(env);
        for (Backend b : available_backends())
            if (backend_name(b) == want) return b;
        // Unknown or unsupported request: fall through to autodetection.
    }
    if (cpu_supports(Backend::kAvx2)) return Backend::kAvx2;
    if (cpu_supports(Backend::kNeon)) return Backend::kNeon;
    return Backend::kScalar;
}

std::atomic<Backend>& active() {
    static std::atomic<Backend> backend{pick_default()};
    return backend;
}

} // namespace

std::string_view backend_name(Backend b) {
    switch (b) {
    case Backend::kScalar:
        return "scalar";
    case Backend::kAvx2:
        return "avx2";
    case Backend::kNeon:
        return "neon";
    }
    return "unknown";
}

std::vector<Backend> available_backends() {
    std::vector<Backend> out{Backend::kScalar};
    for (Backend b : {Backend::kAvx2, Backend::kNeon})
        if (cpu_supports(b)) out.push_back(b);
    return out;
}

Backend active_backend() { return active().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!cpu_supports(b))
        throw InvalidArgument("SIMD backend '" + std::string(backend_name(b)) + "' unavailable");
    active().store(b, std::memory_order_relaxed);
}

const KernelTable& kernels(Backend b) {
    switch (b) {
    case Backend::kAvx2:
        if (const auto* t = detail::avx2_table()) return *t;
        break;
    case Backend::kNeon:
        if (const auto* t = detail::neon_table()) return *t;
        break;
    case Backend::kScalar:
        break;
    }
    return detail::scalar_table();
}

const KernelTable& kernels() { return kernels(active_backend()); }

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("simd::dot: size mismatch");
    return kernels().dot(a.data(), b.data(), a.size());
}

double weighted_square_sum(std::span<const double> w, std::span<const double> v) {
    if (w.size() != v.size()) throw InvalidArgument("simd::weighted_square_sum: size mismatch");
    return kernels().weighted_square_sum(w.data(), v.data(), w.size());
}

double max_abs(std::span<const double> v) { return kernels().max_abs(v.data(), v.size()); }

void minkowski_inner(const FourVectorSoA& a, const FourVectorSoA& b, std::span<double> out) {
    const std::size_t n = out.size();
    for (auto s : {a.x0, a.x1, a.x2, a.x3, b.x0, b.x1, b.x2, b.x3})
        if (s.size() != n) throw InvalidArgument("simd::minkowski_inner: size mismatch");
    const double* const pa[4] = {a.x0.data(), a.x1.data(), a.x2.data(), a.x3.data()};
    const double* const pb[4] = {b.x0.data(), b.x1.data(), b.x2.data(), b.x3.data()};
    kernels().minkowski_inner(pa, pb, out.data(), n);
}

void bump_density(std::span<const double> s, std::span<double> out, double norm) {
    if (s.size() != out.size()) throw InvalidArgument("simd::bump_density: size mismatch");
    kernels().bump_density(s.data(), out.data(), s.size(), norm);
}

void bump_derivative(std::span<const double> s, std::span<double> out, double norm) {
    if (s.size() != out.size()) throw InvalidArgument("simd::bump_derivative: size mismatch");
    kernels().bump_derivative(s.data(), out.data(), s.size(), norm);
}

} // namespace lwreg::simd
