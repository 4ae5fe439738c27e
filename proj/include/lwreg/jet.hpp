#pragma once

#include <cstddef>
#include <vector>

namespace lwreg {

/// Truncated Taylor series c[0] + c[1] h + ... + c[n] h^n around some point.
/// Arithmetic propagates all coefficients exactly up to the truncation order,
/// so derivatives of closed-form test functions come out free of
/// finite-difference error.
class Jet {
public:
    Jet() = default;
    explicit Jet(std::size_t order, double value = 0.0);

    /// The identity map at x: x + h.
    static Jet variable(double x, std::size_t order);

    std::size_t order() const { return c_.size() - 1; }
    double operator[](std::size_t i) const { return c_[i]; }
    double& operator[](std::size_t i) { return c_[i]; }
    const std::vector<double>& coefficients() const { return c_; }

    /// i-th derivative, c[i] i!.
    double derivative(std::size_t i) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);

private:
    std::vector<double> c_{0.0};
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator-(Jet a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(double s, Jet a);
Jet operator+(Jet a, double s);
Jet reciprocal(const Jet& a);
Jet exp(const Jet& a);

/// g(x(h)) where `g` holds the Taylor coefficients of g at x[0].
Jet compose(const std::vector<double>& g, const Jet& x);

} // namespace lwreg
