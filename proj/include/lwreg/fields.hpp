#pragma once

#include "lwreg/minkowski.hpp"
#include "lwreg/regularization.hpp"
#include "lwreg/retarded.hpp"

#include <array>

namespace lwreg {

/// Everything `fields eval` reports at one observer point. Four-vectors
/// are contravariant, like every stored vector.
struct FieldPoint {
    FourVector X;
    double eps = 0.0;
    double xi = 0.0;
    FourVector Phi;
    FourVector Lambda;
    FourVector Psi;
    FourVector BoxPhi; // Lambda H(xi) + Psi
};

struct BoxPhiParts {
    FourVector Lambda;
    FourVector Psi;
    FourVector total;
};

/// (e/2) R H_eps(xi).
FourVector phi_alpha(const Worldline& w, const HeavisideFamily& H, const FourVector& X, double eps,
                     double charge = 1.0, const SolverOptions& opts = {});
FourVector phi_alpha(const RetardedKinematics& k, const HeavisideFamily& H, double eps,
                     double charge = 1.0);

/// Coefficient c of the xi H''(xi) term in Psi.
///
/// kPrinted is (xi kappa - 1). Differentiating Phi directly gives the H''
/// coefficient (e/2) R |grad xi|^2 with |grad xi|^2 = 2 xi kappa - 1, i.e.
/// c = xi kappa - 1/2 (kRederived); the finite-difference d'Alembertian
/// agrees with the latter and differs from the former by (e/2) xi H'' K.
enum class PsiForm { kPrinted, kRederived };

/// Lambda = -e Zdot/xi,
/// Psi = e K ((3 xi kappa - 2) H'(xi) + c xi H''(xi)),
/// total = Lambda H(xi) + Psi.
/// H'' is only requested for xi in [eps, 2 eps]; piecewise families throw
/// SmoothnessRequired there.
BoxPhiParts box_phi_analytic(const Worldline& w, const HeavisideFamily& H, const FourVector& X,
                             double eps, double charge = 1.0, const SolverOptions& opts = {},
                             PsiForm form = PsiForm::kPrinted);
BoxPhiParts box_phi_analytic(const RetardedKinematics& k, const HeavisideFamily& H, double eps,
                             double charge = 1.0, PsiForm form = PsiForm::kPrinted);

/// Componentwise d'Alembertian of phi_alpha by 3-point central second
/// differences along each axis (9 evaluations). Smooth families only.
FourVector box_phi_fd(const Worldline& w, const HeavisideFamily& H, const FourVector& X, double eps,
                      double h, double charge = 1.0, const SolverOptions& opts = {});

/// Step used when none is given: eps/1000 when the stencil could touch the
/// transition shell (xi < 3 eps), where the high derivatives of the bump
/// make the truncation error large; otherwise 1e-3 max(1, |X|) capped so
/// the stencil stays clear of both the worldline and the shell.
double default_fd_step(double xi, double eps, const FourVector& X);

struct BoxPhiComparison {
    FourVector analytic;
    FourVector fd;
    double h = 0.0;
    double xi = 0.0;
    /// |analytic - fd|_inf / max(|analytic|_inf, |Lambda|_inf). The Lambda
    /// floor keeps the ratio meaningful near the inner shell edge, where
    /// both sides are exponentially small.
    double rel_error = 0.0;
};

/// Analytic against finite-difference d'Alembertian at X with the default
/// step.
BoxPhiComparison compare_box_phi(const Worldline& w, const HeavisideFamily& H, const FourVector& X,
                                 double eps, double charge = 1.0, PsiForm form = PsiForm::kPrinted,
                                 const SolverOptions& opts = {});

/// All field quantities at X. BoxPhi is the analytic total.
FieldPoint field_point(const Worldline& w, const HeavisideFamily& H, const FourVector& X, double eps,
                       double charge = 1.0, const SolverOptions& opts = {},
                       PsiForm form = PsiForm::kPrinted);

struct StaticField {
    std::array<double, 3> x{};
    double phi = 0.0;
    std::array<double, 3> E{};
    double rho = 0.0;
    double eps = 0.0;
};

/// Rest-frame potential e H/|x|, field e (H/|x|^2 - H'/|x|) x/|x| and
/// density rho = -e H''/(4 pi |x|). Piecewise families throw
/// SmoothnessRequired when |x| lies in [eps, 2 eps] (rho needs H''), unless
/// `with_rho` is false, in which case rho is left NaN.
StaticField static_field(const HeavisideFamily& H, const std::array<double, 3>& x, double eps,
                         double charge = 1.0, bool with_rho = true);

/// rho as a function of r = |x| alone.
double static_rho(const HeavisideFamily& H, double r, double eps, double charge = 1.0);

} // namespace lwreg
