#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lwreg::quad {

/// Gauss-Legendre rule on [-1, 1]. Nodes ascending.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule, computed once per n and cached (thread-safe).
const Rule& gauss_legendre(std::size_t n);

/// Nodes and weights of the n-point rule mapped to [a, b].
void mapped_rule(std::size_t n, double a, double b, std::vector<double>& x, std::vector<double>& w);

/// Fixed-order Gauss-Legendre on [a, b].
double gl(const std::function<double(double)>& f, double a, double b, std::size_t n);

/// Composite Gauss-Legendre: `panels` equal panels of an n-point rule.
double gl_composite(const std::function<double(double)>& f, double a, double b, std::size_t n,
                    std::size_t panels);

/// Adaptive 15/31-point Gauss-Kronrod. `b` may be +infinity. Throws
/// NoConvergence when the error estimate stays above max(abs_tol, rel_tol*|I|).
double adaptive(const std::function<double(double)>& f, double a, double b,
                double abs_tol = 1e-12, double rel_tol = 1e-12, unsigned max_depth = 20);

} // namespace lwreg::quad
