#include "lwreg/fields.hpp"

#include "lwreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lwreg {

namespace {

bool in_shell(double r, double eps) { return r >= eps && r <= 2.0 * eps; }

} // namespace

FourVector phi_alpha(const RetardedKinematics& k, const HeavisideFamily& H, double eps,
                     double charge) {
    return (0.5 * charge * H.H(k.xi, eps)) * k.R;
}

FourVector phi_alpha(const Worldline& w, const HeavisideFamily& H, const FourVector& X, double eps,
                     double charge, const SolverOptions& opts) {
    return phi_alpha(kinematics(w, X, opts), H, eps, charge);
}

BoxPhiParts box_phi_analytic(const RetardedKinematics& k, const HeavisideFamily& H, double eps,
                             double charge, PsiForm form) {
    const double xi = k.xi;
    const double xk = xi * k.kappa;
    BoxPhiParts out;
    out.Lambda = (-charge / xi) * k.velocity;
    double coeff = 0.0;
    if (in_shell(xi, eps)) {
        const double c = form == PsiForm::kPrinted ? xk - 1.0 : xk - 0.5;
        coeff = (3.0 * xk - 2.0) * H.dH(xi, eps) + c * xi * H.d2H(xi, eps);
    }
    out.Psi = (charge * coeff) * k.K;
    out.total = H.H(xi, eps) * out.Lambda + out.Psi;
    return out;
}

BoxPhiParts box_phi_analytic(const Worldline& w, const HeavisideFamily& H, const FourVector& X,
                             double eps, double charge, const SolverOptions& opts, PsiForm form) {
    return box_phi_analytic(kinematics(w, X, opts), H, eps, charge, form);
}

FourVector box_phi_fd(const Worldline& w, const HeavisideFamily& H, const FourVector& X, double eps,
                      double h, double charge, const SolverOptions& opts) {
    if (!H.smooth())
        throw SmoothnessRequired("finite-difference d'Alembertian needs a smooth family");
    if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
    const FourVector center = phi_alpha(w, H, X, eps, charge, opts);
    FourVector box;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const FourVector step = h * basis(mu);
        const FourVector plus = phi_alpha(w, H, X + step, eps, charge, opts);
        const FourVector minus = phi_alpha(w, H, X - step, eps, charge, opts);
        const FourVector second = (plus - 2.0 * center + minus) / (h * h);
        box += (mu == 0 ? 1.0 : -1.0) * second;
    }
    return box;
}

double default_fd_step(double xi, double eps, const FourVector& X) {
    if (xi < 3.0 * eps) return eps / 1000.0;
    const double base = 1e-3 * std::max(1.0, X.euclidean_norm());
    return std::min({base, xi / 100.0, (xi - 2.0 * eps) / 10.0});
}

BoxPhiComparison compare_box_phi(const Worldline& w, const HeavisideFamily& H, const FourVector& X,
                                 double eps, double charge, PsiForm form, const SolverOptions& opts) {
    const RetardedKinematics k = kinematics(w, X, opts);
    const BoxPhiParts parts = box_phi_analytic(k, H, eps, charge, form);
    BoxPhiComparison c;
    c.xi = k.xi;
    c.analytic = parts.total;
    c.h = default_fd_step(k.xi, eps, X);
    c.fd = box_phi_fd(w, H, X, eps, c.h, charge, opts);
    const double denom = std::max(max_abs(c.analytic), max_abs(parts.Lambda));
    c.rel_error = max_abs(c.analytic - c.fd) / denom;
    return c;
}

FieldPoint field_point(const Worldline& w, const HeavisideFamily& H, const FourVector& X, double eps,
                       double charge, const SolverOptions& opts, PsiForm form) {
    const RetardedKinematics k = kinematics(w, X, opts);
    const BoxPhiParts parts = box_phi_analytic(k, H, eps, charge, form);
    FieldPoint p;
    p.X = X;
    p.eps = eps;
    p.xi = k.xi;
    p.Phi = phi_alpha(k, H, eps, charge);
    p.Lambda = parts.Lambda;
    p.Psi = parts.Psi;
    p.BoxPhi = parts.total;
    return p;
}

double static_rho(const HeavisideFamily& H, double r, double eps, double charge) {
    if (!(r > 0.0)) throw InvalidArgument("static field undefined at |x| = 0");
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0,1]");
    if (!in_shell(r, eps)) return 0.0;
    return -charge * H.d2H(r, eps) / (4.0 * std::numbers::pi * r);
}

StaticField static_field(const HeavisideFamily& H, const std::array<double, 3>& x, double eps,
                         double charge, bool with_rho) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (!(r > 0.0)) throw InvalidArgument("static field undefined at |x| = 0");
    StaticField f;
    f.x = x;
    f.eps = eps;
    const double h = H.H(r, eps);
    const double dh = H.dH(r, eps);
    f.phi = charge * h / r;
    const double radial = charge * (h / (r * r) - dh / r);
    for (int i = 0; i < 3; ++i) f.E[i] = radial * x[i] / r;
    f.rho = with_rho ? static_rho(H, r, eps, charge) : std::numeric_limits<double>::quiet_NaN();
    return f;
}

} // namespace lwreg
