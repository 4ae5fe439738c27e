#include "lwreg/jet.hpp"

#include "lwreg/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lwreg {

Jet::Jet(std::size_t order, double value) : c_(order + 1, 0.0) { c_[0] = value; }

Jet Jet::variable(double x, std::size_t order) {
    Jet j(order, x);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
}

double Jet::derivative(std::size_t i) const {
    double f = 1.0;
    for (std::size_t k = 2; k <= i; ++k) f *= static_cast<double>(k);
    return c_.at(i) * f;
}

Jet& Jet::operator+=(const Jet& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator-(Jet a) { return a *= -1.0; }
Jet operator*(double s, Jet a) { return a *= s; }

Jet operator+(Jet a, double s) {
    a[0] += s;
    return a;
}

Jet operator*(const Jet& a, const Jet& b) {
    const std::size_t n = std::max(a.order(), b.order());
    Jet out(n);
    for (std::size_t i = 0; i <= a.order(); ++i)
        for (std::size_t j = 0; j <= b.order() && i + j <= n; ++j) out[i + j] += a[i] * b[j];
    return out;
}

Jet reciprocal(const Jet& a) {
    if (a[0] == 0.0) throw InvalidArgument("jet reciprocal of zero");
    const std::size_t n = a.order();
    Jet out(n, 1.0 / a[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += a[j] * out[k - j];
        out[k] = -s / a[0];
    }
    return out;
}

Jet exp(const Jet& a) {
    // y' = a' y, coefficientwise.
    const std::size_t n = a.order();
    Jet out(n, std::exp(a[0]));
    for (std::size_t k = 1; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * out[k - j];
        out[k] = s / static_cast<double>(k);
    }
    return out;
}

Jet compose(const std::vector<double>& g, const Jet& x) {
    Jet d = x;
    d[0] = 0.0;
    Jet out(x.order(), 0.0);
    for (std::size_t i = g.size(); i-- > 0;) out = out * d + g[i];
    return out;
}

} // namespace lwreg
