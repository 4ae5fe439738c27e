#include "lwreg/selfenergy.hpp"

#include "lwreg/errors.hpp"
#include "lwreg/fields.hpp"
#include "lwreg/quadrature.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lwreg {

namespace {

std::string fmt17(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double shell_integral(const std::function<double(double)>& f, double eps) {
    return quad::adaptive(f, eps, 2.0 * eps, 0.0, 1e-13);
}

} // namespace

double u_ele(const HeavisideFamily& H, double charge, double eps) {
    const double a = shell_integral(
        [&](double r) {
            const double d = H.dH(r, eps);
            return d * d;
        },
        eps);
    return 0.5 * charge * charge * a;
}

double u_mag(const HeavisideFamily& H, double moment, double eps) {
    const double a = shell_integral(
        [&](double r) {
            const double d = H.dH(r, eps);
            return d * d / (r * r);
        },
        eps);
    return moment * moment / 3.0 * a;
}

double u_ele_from_field(const HeavisideFamily& H, double charge, double eps) {
    auto energy_density = [&](double r) {
        const StaticField f = static_field(H, {r, 0.0, 0.0}, eps, charge, false);
        const double e2 = f.E[0] * f.E[0] + f.E[1] * f.E[1] + f.E[2] * f.E[2];
        return 0.5 * e2 * r * r;
    };
    // E vanishes for r <= eps; the shell and the tail are integrated apart
    // because the integrand has only finite smoothness at 2 eps for piecewise
    // families.
    const double shell = quad::adaptive(energy_density, eps, 2.0 * eps, 0.0, 1e-12);
    const double tail = quad::adaptive(energy_density, 2.0 * eps,
                                       std::numeric_limits<double>::infinity(), 0.0, 1e-12);
    return shell + tail;
}

double c_eps(const HeavisideFamily& H, double eps) {
    constexpr int kSamples = 2048;
    double best = -1.0;
    int best_k = 0;
    for (int k = 0; k <= kSamples; ++k) {
        const double r = eps * (1.0 + static_cast<double>(k) / kSamples);
        const double v = H.dH(r, eps);
        if (v > best) {
            best = v;
            best_k = k;
        }
    }
    const double lo = eps * (1.0 + std::max(0, best_k - 1) / static_cast<double>(kSamples));
    const double hi = eps * (1.0 + std::min(kSamples, best_k + 1) / static_cast<double>(kSamples));
    const auto [r, neg] = boost::math::tools::brent_find_minima(
        [&](double x) { return -H.dH(x, eps); }, lo, hi, std::numeric_limits<double>::digits / 2);
    return std::max(best, -neg);
}

BoundReport divergence_bound_check(const HeavisideFamily& H, const EpsilonGrid& grid) {
    if (grid.size() < 3) throw InvalidArgument("divergence_bound_check needs at least 3 grid points");
    BoundReport rep;
    double sup_ec = 0.0;
    for (double eps : grid) {
        BoundRow row;
        row.eps = eps;
        row.a_eps = 2.0 * u_ele(H, 1.0, eps);
        row.c_eps = c_eps(H, eps);
        sup_ec = std::max(sup_ec, eps * row.c_eps);
        rep.rows.push_back(row);
    }
    rep.c0 = 1.0 / (8.0 * sup_ec);
    // Equality cases (boxcar: c_eps = 1/eps) are decided up to rounding.
    const double slack = 1.0 - 1e-12;
    for (auto& row : rep.rows) {
        const double eps = row.eps;
        row.bound_ac = 1.0 / (8.0 * eps * eps * row.c_eps);
        row.bound_c0 = rep.c0 / eps;
        row.c_ok = row.c_eps >= slack / eps;
        row.ac_ok = row.a_eps >= slack * row.bound_ac;
        row.c0_ok = row.a_eps >= slack * row.bound_c0;
        if (!row.c_ok)
            rep.violations.push_back("c_eps = " + fmt17(row.c_eps) + " < 1/eps at eps = " + fmt17(eps));
        if (!row.ac_ok)
            rep.violations.push_back("a_eps = " + fmt17(row.a_eps) + " < 1/(8 eps^2 c_eps) at eps = " +
                                     fmt17(eps));
        if (!row.c0_ok)
            rep.violations.push_back("a_eps = " + fmt17(row.a_eps) + " < c0/eps at eps = " + fmt17(eps));
    }
    return rep;
}

namespace {

double relative_spread(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double spread = 0.0;
    for (double x : v) spread = std::max(spread, std::abs(x - mean));
    return mean != 0.0 ? spread / std::abs(mean) : spread;
}

} // namespace

SelfEnergyReport self_energy_report(const HeavisideFamily& H, const EpsilonGrid& grid,
                                    double charge, double moment, double scaling_tol) {
    std::vector<GeneralizedNet::Payload> ele, mag;
    std::vector<double> eu, e3u;
    for (double eps : grid) {
        ele.emplace_back(u_ele(H, charge, eps));
        mag.emplace_back(u_mag(H, moment, eps));
        eu.push_back(eps * std::get<double>(ele.back()));
        e3u.push_back(eps * eps * eps * std::get<double>(mag.back()));
    }
    SelfEnergyReport rep{grid, GeneralizedNet(grid, ele), GeneralizedNet(grid, mag), {}, 0.0,
                         0.0,  0.0,                       {}};
    rep.spread_eps_Uele = relative_spread(eu);
    rep.spread_eps3_Umag = relative_spread(e3u);
    if (rep.spread_eps_Uele > scaling_tol)
        rep.violations.push_back("eps U_ele varies by " + fmt17(rep.spread_eps_Uele));
    if (rep.spread_eps3_Umag > scaling_tol)
        rep.violations.push_back("eps^3 U_mag varies by " + fmt17(rep.spread_eps3_Umag));

    const bool bounds_applicable = grid.size() >= 3;
    BoundReport bounds;
    if (bounds_applicable) {
        bounds = divergence_bound_check(H, grid);
        rep.c0 = bounds.c0;
        for (const auto& v : bounds.violations) rep.violations.push_back(v);
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        SelfEnergyRow row;
        row.eps = grid[k];
        row.U_ele = std::get<double>(ele[k]);
        row.U_mag = std::get<double>(mag[k]);
        row.eps_Uele = eu[k];
        row.eps3_Umag = e3u[k];
        row.c_eps = bounds_applicable ? bounds.rows[k].c_eps : c_eps(H, row.eps);
        row.bound = bounds_applicable ? bounds.rows[k].bound_c0 : 0.0;
        if (row.eps < 0.5 && charge != 0.0 && moment != 0.0) {
            row.inequality = 2.0 / (charge * charge) * row.U_ele <= 3.0 / (moment * moment) * row.U_mag;
            if (!row.inequality)
                rep.violations.push_back("electric/magnetic inequality fails at eps = " + fmt17(row.eps));
        }
        row.pass = row.inequality && (!bounds_applicable || bounds.rows[k].pass());
        rep.rows.push_back(row);
    }
    return rep;
}

Renormalization mass_renormalize(const HeavisideFamily& H, double charge, double moment,
                                 double target, double rel_tol) {
    auto total = [&](double eps) { return u_ele(H, charge, eps) + u_mag(H, moment, eps); };
    const double inf = total(1.0);
    if (!(target >= inf)) throw OutOfRange(target, inf);
    Renormalization out;
    const double tol = rel_tol * std::abs(target);
    if (inf - target >= -tol) {
        out.eps0 = 1.0;
        out.residual = inf - target;
        return out;
    }
    // total(hi) < target; walk lo down until total(lo) >= target.
    double hi = 1.0;
    double lo = 0.5;
    while (total(lo) < target) {
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-300) throw NoConvergence(out.iterations, target);
    }
    for (out.iterations = 0; out.iterations < 400; ++out.iterations) {
        const double mid = 0.5 * (lo + hi);
        const double f = total(mid) - target;
        out.eps0 = mid;
        out.residual = f;
        if (std::abs(f) <= tol || mid == lo || mid == hi) break;
        if (f > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    if (std::abs(out.residual) > tol) throw NoConvergence(out.iterations, out.residual);
    return out;
}

} // namespace lwreg
