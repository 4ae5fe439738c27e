#include "lwreg/testfunction.hpp"

#include "lwreg/errors.hpp"
#include "lwreg/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace lwreg {

TestFunction::TestFunction(int dim, std::array<double, 4> center, double radius,
                           std::vector<double> modulation)
    : dim_(dim), center_(center), radius_(radius), modulation_(std::move(modulation)) {
    if (dim != 1 && dim != 3 && dim != 4)
        throw InvalidArgument("test function dimension must be 1, 3 or 4");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw InvalidArgument("test function radius must be positive");
    if (modulation_.empty()) modulation_.push_back(1.0);
}

double TestFunction::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw InvalidArgument("test function dimension mismatch");
    double r2 = 0.0;
    for (int i = 0; i < dim_; ++i) {
        const double y = (x[i] - center_[i]) / radius_;
        r2 += y * y;
    }
    if (r2 >= 1.0) return 0.0;
    const double y0 = (x[0] - center_[0]) / radius_;
    double p = 0.0;
    for (std::size_t i = modulation_.size(); i-- > 0;) p = p * y0 + modulation_[i];
    return p * std::exp(-1.0 / (1.0 - r2));
}

double TestFunction::operator()(double t) const {
    if (dim_ != 1) throw InvalidArgument("scalar evaluation needs a 1D test function");
    const double x[1] = {t};
    return (*this)(std::span<const double>(x, 1));
}

Jet TestFunction::jet(const Jet& t) const {
    if (dim_ != 1) throw InvalidArgument("jet evaluation needs a 1D test function");
    Jet u = t + (-center_[0]);
    u *= 1.0 / radius_;
    const Jet q = -(u * u) + 1.0;
    if (q[0] <= 0.0) return Jet(t.order(), 0.0);
    Jet p(t.order(), 0.0);
    for (std::size_t i = modulation_.size(); i-- > 0;) p = p * u + modulation_[i];
    return p * exp(-reciprocal(q));
}

double TestFunction::box(std::span<const double> x) const {
    if (dim_ != 4 || x.size() != 4) throw InvalidArgument("box needs a 4D test function");
    double y[4];
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        y[i] = (x[i] - center_[i]) / radius_;
        s += y[i] * y[i];
    }
    if (s >= 1.0) return 0.0;
    // phi = p(y0) g(s), s = |y|^2, g = exp(-1/(1-s)).
    const double q = 1.0 / (1.0 - s);
    const double g = std::exp(-q);
    const double g1 = -g * q * q;
    const double g2 = g * (q * q * q * q - 2.0 * q * q * q);
    double p = 0.0, p1 = 0.0, p2 = 0.0;
    for (std::size_t i = modulation_.size(); i-- > 0;) {
        p2 = p2 * y[0] + 2.0 * p1;
        p1 = p1 * y[0] + p;
        p = p * y[0] + modulation_[i];
    }
    const double minkowski = y[0] * y[0] - y[1] * y[1] - y[2] * y[2] - y[3] * y[3];
    return (p2 * g + 4.0 * p1 * g1 * y[0] + p * (4.0 * g2 * minkowski - 4.0 * g1)) /
           (radius_ * radius_);
}

double TestFunction::integral() const {
    const int n = dim_;
    double total = 0.0;
    for (std::size_t i = 0; i < modulation_.size(); i += 2) {
        if (modulation_[i] == 0.0) continue;
        const double a = static_cast<double>(i);
        const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * (n - 1)) *
                              std::tgamma(0.5 * (a + 1.0)) / std::tgamma(0.5 * (n + a));
        const double radial = quad::adaptive(
            [&](double rho) {
                if (rho >= 1.0) return 0.0;
                return std::exp(-1.0 / (1.0 - rho * rho)) * std::pow(rho, n - 1 + a);
            },
            0.0, 1.0, 0.0, 1e-14);
        total += modulation_[i] * sphere * radial;
    }
    return total * std::pow(radius_, n);
}

Smooth1D::Smooth1D(Evaluator f, double lo, double hi)
    : f_(std::make_shared<const Evaluator>(std::move(f))), lo_(lo), hi_(hi) {}

Smooth1D Smooth1D::from(const TestFunction& phi) {
    if (phi.dim() != 1) throw InvalidArgument("Smooth1D needs a 1D test function");
    return Smooth1D([phi](const Jet& t) { return phi.jet(t); }, phi.center()[0] - phi.radius(),
                    phi.center()[0] + phi.radius());
}

double Smooth1D::operator()(double t) const { return (*f_)(Jet::variable(t, 0))[0]; }

std::vector<double> Smooth1D::taylor(double t, std::size_t n) const {
    return (*f_)(Jet::variable(t, n)).coefficients();
}

double Smooth1D::derivative_at(double t, std::size_t k) const {
    return (*f_)(Jet::variable(t, k)).derivative(k);
}

Smooth1D Smooth1D::derivative() const {
    auto f = f_;
    return Smooth1D(
        [f](const Jet& x) {
            const std::vector<double> g = (*f)(Jet::variable(x[0], x.order() + 1)).coefficients();
            std::vector<double> dg(g.size() - 1);
            for (std::size_t i = 0; i + 1 < g.size(); ++i) dg[i] = static_cast<double>(i + 1) * g[i + 1];
            return compose(dg, x);
        },
        lo_, hi_);
}

Smooth1D Smooth1D::times_t() const {
    auto f = f_;
    return Smooth1D([f](const Jet& x) { return (*f)(x) * x; }, lo_, hi_);
}

Smooth1D Smooth1D::scaled(double s) const {
    auto f = f_;
    return Smooth1D([f, s](const Jet& x) { return s * (*f)(x); }, lo_, hi_);
}

Smooth1D Smooth1D::plus(const Smooth1D& o) const {
    auto f = f_;
    auto g = o.f_;
    return Smooth1D([f, g](const Jet& x) { return (*f)(x) + (*g)(x); }, std::min(lo_, o.lo_),
                    std::max(hi_, o.hi_));
}

Smooth1D Smooth1D::reflected() const {
    auto f = f_;
    return Smooth1D([f](const Jet& x) { return (*f)(-x); }, -hi_, -lo_);
}

} // namespace lwreg
