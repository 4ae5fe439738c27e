#pragma once

#include "lwreg/fields.hpp"
#include "lwreg/regularization.hpp"
#include "lwreg/retarded.hpp"
#include "lwreg/testfunction.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lwreg {

/// Resolution of the pairing quadrature. 3D and 4D pairings integrate in
/// spherical coordinates centered on the charge (on the particle's lab
/// position at each lab time in 4D): Gauss-Legendre in cos(theta), the
/// trapezoid rule in azimuth, and Gauss-Legendre panels in r split at the
/// points where the transition shell starts and ends.
struct QuadratureSpec {
    int time_panels = 4;
    int time_nodes = 10;
    int polar_nodes = 12;
    int azimuth_nodes = 24;
    int inner_nodes = 8;
    /// Shell panel width as a fraction of eps; must not exceed 1/8.
    double shell_spacing = 0.125;
    int shell_nodes = 10;
    int outer_panels = 6;
    int outer_nodes = 16;

    /// Throws InvalidArgument for non-positive counts and ResolutionTooCoarse
    /// for shell_spacing > 1/8.
    void validate(double eps) const;
};

/// u_eps(t) on the line; `breakpoints(eps)` lists where it is not smooth or
/// changes on scale eps.
struct LineNet {
    std::function<double(double t, double eps)> f;
    std::function<std::vector<double>(double eps)> breakpoints;
};

/// Radial function on R^3 whose transition region is r in
/// [shell_lo eps, shell_hi eps]; with `shell_only` it vanishes elsewhere.
struct RadialNet {
    std::function<double(double r, double eps)> f;
    double shell_lo = 1.0;
    double shell_hi = 2.0;
    bool shell_only = false;
};

/// Function of the retarded kinematics at X on R^4; the transition region
/// is xi in [eps, 2 eps].
struct WorldlineNet {
    Worldline worldline;
    std::function<double(const RetardedKinematics& k, const FourVector& X, double eps)> f;
    SolverOptions opts{};
};

using Net = std::variant<LineNet, RadialNet, WorldlineNet>;

/// <u_eps, phi> with Lebesgue measure. The test function's dimension must
/// match the net (1, 3 or 4).
double pair_at(const Net& net, const TestFunction& phi, double eps, const QuadratureSpec& spec = {});
std::vector<double> pair(const Net& net, const TestFunction& phi, const EpsilonGrid& grid,
                         const QuadratureSpec& spec = {});

/// Several worldline integrands in one sweep of the 4D grid.
std::vector<double> pair_worldline(
    const Worldline& w,
    const std::function<void(const RetardedKinematics&, const FourVector&, double eps,
                             std::span<double> out)>& integrand,
    std::size_t components, const TestFunction& phi, double eps, const QuadratureSpec& spec = {},
    const SolverOptions& opts = {});

struct AssociationResult {
    std::string claim;
    std::vector<double> eps;
    std::vector<double> pairing;
    double limit = 0.0;
    /// Fitted p in L + A eps^p; NaN when the values are already constant.
    double order = 0.0;
    double target = 0.0;
    /// Tolerances are relative to this.
    double scale = 1.0;
    double tolerance = 1e-3;
    bool pass = false;
    /// Empty on pass; "NoTrend" or "LimitMismatch" otherwise.
    std::string reason;
};

/// Fits L + A eps^p to the four finest points and checks |L - target| <=
/// tolerance * scale. NoTrend when the distance to the target stays above
/// tolerance without shrinking over the last decade of eps.
AssociationResult weak_limit(const std::vector<double>& values, const EpsilonGrid& grid, double target,
                             double scale, double tolerance = 1e-3, std::string claim = {});

struct AssociationConfig {
    EpsilonGrid grid = EpsilonGrid::geometric(0.1, 0.5, 6);
    double charge = 1.0;
    /// 4D test function for claims (b)-(d).
    TestFunction phi4{4, {0.0, 0.0, 0.0, 0.0}, 0.8, {1.0, 0.3}};
    /// 3D test function for claim (a).
    TestFunction phi3{3, {0.05, -0.03, 0.02, 0.0}, 0.6, {1.0, 0.4}};
    QuadratureSpec quad{};
    double tolerance = 1e-3;
    PsiForm form = PsiForm::kPrinted;
    SolverOptions opts{};
};

struct AssociationReport {
    std::vector<AssociationResult> claims;
    /// Claims that do not apply to the worldline, with the reason.
    std::vector<std::string> skipped;
    /// moderateness_slope of sup |Psi_eps| over the transition shell.
    double psi_sup_slope = 0.0;
    bool pass() const;
};

/// (a) <rho_eps, phi> -> e phi(0) (rest worldline only);
/// (b) <H_eps(xi), phi> -> int phi;
/// (c) <Psi_eps,alpha, phi> -> 0 for each alpha;
/// (d) <Phi_eps,alpha, box phi> - <Lambda_alpha H_eps(xi), phi> -> 0 for each alpha.
/// (c) and (d) are measured against max_alpha |<Lambda_alpha, phi>|.
/// Smooth families only.
AssociationReport association_suite(const Worldline& w, const HeavisideFamily& H,
                                    const AssociationConfig& config = {});

/// sup over sampled shell points of max_alpha |Psi_alpha| at lab time t0,
/// as a net of sampled functions.
GeneralizedNet psi_sup_net(const Worldline& w, const HeavisideFamily& H, const EpsilonGrid& grid,
                           double charge = 1.0, PsiForm form = PsiForm::kPrinted, double t0 = 0.0,
                           const SolverOptions& opts = {});

} // namespace lwreg
