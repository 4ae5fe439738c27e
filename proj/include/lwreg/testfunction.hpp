#pragma once

#include "lwreg/jet.hpp"

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace lwreg {

/// phi(x) = p(y_0) exp(-1/(1 - |y|^2)) for |y| < 1 and 0 otherwise, with
/// y = (x - center)/radius and p an optional polynomial (coefficients in
/// ascending order; empty means p = 1). Coordinates in 4D are (t, x, y, z).
class TestFunction {
public:
    TestFunction(int dim, std::array<double, 4> center, double radius,
                 std::vector<double> modulation = {});

    int dim() const { return dim_; }
    const std::array<double, 4>& center() const { return center_; }
    double radius() const { return radius_; }
    const std::vector<double>& modulation() const { return modulation_; }

    double operator()(std::span<const double> x) const;
    /// One-dimensional evaluation; dim() must be 1.
    double operator()(double t) const;
    /// Taylor jet of the one-dimensional function.
    Jet jet(const Jet& t) const;
    /// d'Alembertian d_t^2 - d_x^2 - d_y^2 - d_z^2 in closed form; dim() must be 4.
    double box(std::span<const double> x) const;

    /// Exact up to a 1D radial quadrature: odd moments of the modulation
    /// vanish and even ones reduce to sphere moments.
    double integral() const;

private:
    int dim_;
    std::array<double, 4> center_;
    double radius_;
    std::vector<double> modulation_;
};

/// A smooth compactly supported function of one variable, evaluable on
/// jets, with the operations the distribution oracle needs: derivative,
/// multiplication by t and linear combination.
class Smooth1D {
public:
    using Evaluator = std::function<Jet(const Jet&)>;

    Smooth1D(Evaluator f, double lo, double hi);
    static Smooth1D from(const TestFunction& phi);

    double operator()(double t) const;
    /// Taylor coefficients at t up to order n.
    std::vector<double> taylor(double t, std::size_t n) const;
    double derivative_at(double t, std::size_t k) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    Smooth1D derivative() const;
    Smooth1D times_t() const;
    Smooth1D scaled(double s) const;
    Smooth1D plus(const Smooth1D& o) const;
    /// t -> f(-t).
    Smooth1D reflected() const;

private:
    std::shared_ptr<const Evaluator> f_;
    double lo_;
    double hi_;
};

} // namespace lwreg
