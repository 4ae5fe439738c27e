#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library code it is used to check.

#include "lwreg/minkowski.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

namespace oracle {

using lwreg::FourVector;

/// Seeded generator for hand-rolled property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::array<double, 3> direction() {
        const double z = uniform(-1.0, 1.0);
        const double ph = uniform(0.0, 2.0 * M_PI);
        const double s = std::sqrt(1.0 - z * z);
        return {s * std::cos(ph), s * std::sin(ph), z};
    }
    FourVector point(double extent) {
        return {uniform(-extent, extent), uniform(-extent, extent), uniform(-extent, extent),
                uniform(-extent, extent)};
    }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline double inner(const FourVector& a, const FourVector& b) {
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

/// Plain bisection on a generic bracket, run to adjacent doubles.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    const bool rising = !(f(lo) > 0.0);
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        ((f(mid) > 0.0) == rising ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Retarded time by bisection on R.R using positions only: first the
/// eigentime at which Z0 = X0 (there R.R < 0), then a bracket widened
/// backwards until R.R > 0.
inline double bisect_retarded_time(const std::function<FourVector(double)>& Z, const FourVector& X) {
    auto dt = [&](double tau) { return Z(tau)[0] - X[0]; };
    double a = -1.0, b = 1.0;
    while (dt(a) > 0.0) a *= 2.0;
    while (dt(b) < 0.0) b *= 2.0;
    const double now = bisect(dt, a, b);
    auto g = [&](double tau) {
        const FourVector R = X - Z(tau);
        return R[0] * R[0] - R[1] * R[1] - R[2] * R[2] - R[3] * R[3];
    };
    double lo = now - 1.0;
    for (double step = 1.0; g(lo) <= 0.0; step *= 2.0) lo -= step;
    return bisect(g, lo, now);
}

/// (e/2) R H(xi) with R from the bisection retarded time.
inline FourVector potential(const std::function<FourVector(double)>& Z, const std::function<FourVector(double)>& Zdot,
                            const std::function<double(double)>& H, const FourVector& X, double e) {
    const double tau = bisect_retarded_time(Z, X);
    const FourVector R = X - Z(tau);
    return (0.5 * e * H(inner(Zdot(tau), R))) * R;
}

/// Componentwise d'Alembertian of `potential` by 3-point central differences.
inline FourVector box_potential(const std::function<FourVector(double)>& Z,
                                const std::function<FourVector(double)>& Zdot,
                                const std::function<double(double)>& H, const FourVector& X, double e, double h) {
    FourVector sum;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        FourVector step;
        step[mu] = h;
        const FourVector d2 = (potential(Z, Zdot, H, X + step, e) - 2.0 * potential(Z, Zdot, H, X, e) +
                               potential(Z, Zdot, H, X - step, e)) /
                              (h * h);
        sum += mu == 0 ? d2 : -d2;
    }
    return sum;
}

/// Adaptive Gauss-Kronrod on a finite interval.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
    // Relative tolerances much below 1e-14 cannot be met in double precision.
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, std::max(tol, 1e-14));
}

/// Double-exponential rule, robust against endpoint singularities.
inline double integrate_ts(const std::function<double(double)>& f, double a, double b) {
    static boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate([&](double t) { return f(t); }, a, b);
}

/// Unnormalized bump exp(-1/(1 - u^2)) on (-1, 1).
inline double raw_bump(double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

/// Normalized bump mollifier on [1, 2].
inline double bump_chi(double s) {
    static const double norm = integrate([](double u) { return raw_bump(u); }, -1.0, 1.0) / 2.0;
    return raw_bump(2.0 * s - 3.0) / norm;
}

/// Central second difference in direction e_mu.
inline double second_difference(const std::function<double(const FourVector&)>& f, const FourVector& X,
                                std::size_t mu, double h) {
    FourVector e;
    e[mu] = h;
    return (f(X + e) - 2.0 * f(X) + f(X - e)) / (h * h);
}

/// P(t) exp(-(t - c)^2 / (2 s^2)) with P in ascending coefficients. Closed
/// under d/dt and multiplication by t, so every derivative is exact.
struct PolyGauss {
    std::vector<double> p;
    double c = 0.0;
    double s = 1.0;

    static PolyGauss random(Gen& gen) {
        PolyGauss f;
        f.c = gen.uniform(-1.0, 1.0);
        f.s = gen.uniform(0.3, 0.8);
        const int degree = gen.integer(0, 2);
        for (int i = 0; i <= degree; ++i) f.p.push_back(gen.uniform(-1.0, 1.0));
        f.p[0] += 1.5;
        return f;
    }

    double operator()(double t) const {
        double v = 0.0;
        for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * t + *it;
        const double u = (t - c) / s;
        return v * std::exp(-0.5 * u * u);
    }

    /// (P' - P (t - c)/s^2) exp(...).
    PolyGauss derivative() const {
        PolyGauss d{std::vector<double>(p.size() + 1, 0.0), c, s};
        for (std::size_t i = 1; i < p.size(); ++i) d.p[i - 1] += i * p[i];
        for (std::size_t i = 0; i < p.size(); ++i) {
            d.p[i + 1] -= p[i] / (s * s);
            d.p[i] += p[i] * c / (s * s);
        }
        return d;
    }

    PolyGauss derivative(int k) const {
        PolyGauss d = *this;
        for (int i = 0; i < k; ++i) d = d.derivative();
        return d;
    }

    PolyGauss times_t() const {
        PolyGauss d{std::vector<double>(p.size() + 1, 0.0), c, s};
        for (std::size_t i = 0; i < p.size(); ++i) d.p[i + 1] = p[i];
        return d;
    }

    PolyGauss reflected() const {
        PolyGauss d{p, -c, s};
        for (std::size_t i = 1; i < p.size(); i += 2) d.p[i] = -p[i];
        return d;
    }

    /// Numerically negligible outside [c - 14 s, c + 14 s].
    double lo() const { return c - 14.0 * s; }
    double hi() const { return c + 14.0 * s; }
};

/// Hadamard finite part of int_0^inf f t^{-k}, by repeated integration by
/// parts down to k = 1:
///   fp_k f = (1/(k-1)!) (H_{k-1} f^{(k-1)}(0) - int_0^inf f^{(k)} log t dt),
/// H_m the harmonic numbers. f = 0 for k = 0.
inline double finite_part(const PolyGauss& f, int k) {
    if (k == 0) return integrate(f, 0.0, std::max(f.hi(), 1.0));
    double harmonic = 0.0, factorial = 1.0;
    for (int m = 1; m <= k - 1; ++m) {
        harmonic += 1.0 / m;
        factorial *= m;
    }
    const PolyGauss dk = f.derivative(k);
    const double log_moment =
        integrate_ts([&](double t) { return dk(t) * std::log(t); }, 0.0, std::max(f.hi(), 1.0));
    return (harmonic * f.derivative(k - 1)(0.0) - log_moment) / factorial;
}

} // namespace oracle
