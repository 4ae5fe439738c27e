#pragma once

#include "lwreg/regularization.hpp"

#include <string>
#include <vector>

namespace lwreg {

/// (e^2/2) int_eps^{2eps} H'_eps(r)^2 dr, integrated in r.
double u_ele(const HeavisideFamily& H, double charge, double eps);

/// (mu^2/3) int_eps^{2eps} H'_eps(r)^2 / r^2 dr.
double u_mag(const HeavisideFamily& H, double moment, double eps);

/// (1/8pi) int |E|^2 dx over R^3 from static_field.E, i.e.
/// (1/2) int_0^inf |E(r)|^2 r^2 dr including the Coulomb tail.
double u_ele_from_field(const HeavisideFamily& H, double charge, double eps);

/// sup of H'_eps over [eps, 2eps]: dense sampling followed by Brent
/// refinement around the best sample.
double c_eps(const HeavisideFamily& H, double eps);

struct BoundRow {
    double eps = 0.0;
    double a_eps = 0.0;   // (2/e^2) U_ele = int H'^2
    double c_eps = 0.0;
    double bound_ac = 0.0;  // 1/(8 eps^2 c_eps)
    double bound_c0 = 0.0;  // c0/eps
    bool c_ok = false;      // c_eps >= 1/eps
    bool ac_ok = false;     // a_eps >= 1/(8 eps^2 c_eps)
    bool c0_ok = false;     // a_eps >= c0/eps
    bool pass() const { return c_ok && ac_ok && c0_ok; }
};

struct BoundReport {
    std::vector<BoundRow> rows;
    double c0 = 0.0; // 1/(8 sup_eps eps c_eps)
    std::vector<std::string> violations;
    bool pass() const { return violations.empty(); }
};

/// Checks c_eps >= 1/eps, a_eps >= 1/(8 eps^2 c_eps) and a_eps >= c0/eps at
/// every grid point. Needs >= 3 points.
BoundReport divergence_bound_check(const HeavisideFamily& H, const EpsilonGrid& grid);

struct SelfEnergyRow {
    double eps = 0.0;
    double U_ele = 0.0;
    double U_mag = 0.0;
    double eps_Uele = 0.0;
    double eps3_Umag = 0.0;
    double c_eps = 0.0;
    double bound = 0.0;      // c0/eps
    bool inequality = true;  // (2/e^2) U_ele <= (3/mu^2) U_mag, checked for eps < 1/2
    bool pass = true;
};

struct SelfEnergyReport {
    EpsilonGrid grid;
    GeneralizedNet U_ele;
    GeneralizedNet U_mag;
    std::vector<SelfEnergyRow> rows;
    double c0 = 0.0;
    /// max_k |eps_k U_ele - mean| / |mean|, and the same for eps^3 U_mag.
    double spread_eps_Uele = 0.0;
    double spread_eps3_Umag = 0.0;
    std::vector<std::string> violations;
    bool pass() const { return violations.empty(); }
};

/// Nets U_ele, U_mag over the grid, their scaling products, the divergence
/// bounds and the electric/magnetic inequality. `scaling_tol` is the
/// relative spread allowed for eps U_ele and eps^3 U_mag.
SelfEnergyReport self_energy_report(const HeavisideFamily& H, const EpsilonGrid& grid,
                                    double charge, double moment, double scaling_tol = 1e-8);

struct Renormalization {
    double eps0 = 0.0;
    double residual = 0.0; // U_ele + U_mag - target at eps0
    int iterations = 0;
};

/// Bisection for U_ele(eps0) + U_mag(eps0) = target on (0, 1] until
/// |residual| <= rel_tol target. The sum is decreasing in eps with infimum
/// at eps = 1; targets below it throw OutOfRange.
Renormalization mass_renormalize(const HeavisideFamily& H, double charge, double moment,
                                 double target, double rel_tol = 1e-10);

} // namespace lwreg
