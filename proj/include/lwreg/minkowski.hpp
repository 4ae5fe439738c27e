#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace lwreg {

/// A point or vector of Minkowski space, signature (+,-,-,-), c = 1.
/// Components are always stored contravariant; `lowered()` is the only
/// place the metric is applied to an index.
struct FourVector {
    std::array<double, 4> x{0.0, 0.0, 0.0, 0.0};

    constexpr FourVector() = default;
    constexpr FourVector(double x0, double x1, double x2, double x3) : x{x0, x1, x2, x3} {}

    constexpr double operator[](std::size_t mu) const { return x[mu]; }
    constexpr double& operator[](std::size_t mu) { return x[mu]; }

    constexpr double time() const { return x[0]; }
    std::array<double, 3> spatial() const { return {x[1], x[2], x[3]}; }
    double spatial_norm() const { return std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]); }
    double euclidean_norm() const { return std::sqrt(x[0] * x[0] + spatial_norm() * spatial_norm()); }

    /// Components with the index moved by g = diag(1,-1,-1,-1).
    constexpr FourVector lowered() const { return {x[0], -x[1], -x[2], -x[3]}; }

    constexpr FourVector& operator+=(const FourVector& o) {
        for (std::size_t i = 0; i < 4; ++i) x[i] += o.x[i];
        return *this;
    }
    constexpr FourVector& operator-=(const FourVector& o) {
        for (std::size_t i = 0; i < 4; ++i) x[i] -= o.x[i];
        return *this;
    }
    constexpr FourVector& operator*=(double s) {
        for (auto& c : x) c *= s;
        return *this;
    }

    friend constexpr FourVector operator+(FourVector a, const FourVector& b) { return a += b; }
    friend constexpr FourVector operator-(FourVector a, const FourVector& b) { return a -= b; }
    friend constexpr FourVector operator-(FourVector a) { return a *= -1.0; }
    friend constexpr FourVector operator*(double s, FourVector a) { return a *= s; }
    friend constexpr FourVector operator*(FourVector a, double s) { return a *= s; }
    friend constexpr FourVector operator/(FourVector a, double s) { return a *= 1.0 / s; }
    friend constexpr bool operator==(const FourVector&, const FourVector&) = default;
};

std::ostream& operator<<(std::ostream& os, const FourVector& v);

/// a0 b0 - a1 b1 - a2 b2 - a3 b3
constexpr double minkowski_inner(const FourVector& a, const FourVector& b) {
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

/// Unit basis vector e_mu.
constexpr FourVector basis(std::size_t mu) {
    FourVector e;
    e[mu] = 1.0;
    return e;
}

/// Largest absolute component.
double max_abs(const FourVector& v);

struct WorldlineState {
    FourVector position;     // Z(tau)
    FourVector velocity;     // dZ/dtau
    FourVector acceleration; // d^2Z/dtau^2
};

/// Eigentime-parametrized curve with analytic first and second derivatives.
///
/// The four catalog curves are exact; `custom` accepts arbitrary evaluators,
/// which is how non-eigentime curves are fed to `validate_worldline`.
class Worldline {
public:
    using Evaluator = std::function<FourVector(double)>;

    static Worldline rest();
    /// Constant velocity `v` (|v| < 1) along x1 through the origin.
    static Worldline boost(double v);
    /// Uniform proper acceleration `a` > 0 along x1:
    /// Z = (sinh(a tau)/a, cosh(a tau)/a, 0, 0).
    static Worldline hyperbolic(double a);
    /// Circle of lab radius `r` in the x1-x2 plane with lab angular frequency
    /// `omega` (r |omega| < 1), reparametrized to eigentime.
    static Worldline circular(double r, double omega);
    static Worldline custom(std::string label, Evaluator position, Evaluator velocity,
                            Evaluator acceleration, std::map<std::string, double> params = {});

    FourVector position(double tau) const { return position_(tau); }
    FourVector velocity(double tau) const { return velocity_(tau); }
    FourVector acceleration(double tau) const { return acceleration_(tau); }
    WorldlineState eval(double tau) const {
        return {position_(tau), velocity_(tau), acceleration_(tau)};
    }

    const std::string& label() const { return label_; }
    const std::map<std::string, double>& params() const { return params_; }
    /// "rest", "boost(0.6)", ... in the config grammar.
    std::string spec() const;

private:
    Worldline(std::string label, Evaluator z, Evaluator zdot, Evaluator zddot,
              std::map<std::string, double> params)
        : label_(std::move(label)), params_(std::move(params)), position_(std::move(z)),
          velocity_(std::move(zdot)), acceleration_(std::move(zddot)) {}

    std::string label_;
    std::map<std::string, double> params_;
    Evaluator position_;
    Evaluator velocity_;
    Evaluator acceleration_;
};

/// (Z, Zdot, Zddot) at tau.
WorldlineState worldline_eval(const Worldline& w, double tau);

/// Parse `rest | boost(v) | hyperbolic(a) | circular(r, omega)`.
Worldline parse_worldline(const std::string& spec);

/// Eigentime at which the worldline reaches lab time `t` (Z0 is strictly
/// increasing for a future-directed timelike curve).
double parameter_at_lab_time(const Worldline& w, double t);

struct WorldlineReport {
    double max_norm_residual = 0.0;       // max |Zdot.Zdot - 1|
    double max_orthogonality_residual = 0.0; // max |Zdot.Zddot|
    double min_time_component = 0.0;      // min Zdot0
    bool pass = false;
    std::vector<std::string> failures;
};

/// Check eigentime normalization, Zdot.Zddot = 0 and future orientation on a grid.
WorldlineReport validate_worldline(const Worldline& w, std::span<const double> tau_grid,
                                   double tolerance = 1e-10);

} // namespace lwreg
