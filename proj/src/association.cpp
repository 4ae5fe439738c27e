#include "lwreg/association.hpp"

#include "lwreg/errors.hpp"
#include "lwreg/quadrature.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lwreg {

void QuadratureSpec::validate(double eps) const {
    for (int n : {time_panels, time_nodes, polar_nodes, azimuth_nodes, inner_nodes, shell_nodes,
                  outer_panels, outer_nodes})
        if (n <= 0) throw InvalidArgument("quadrature node and panel counts must be positive");
    if (!(shell_spacing > 0.0)) throw InvalidArgument("shell_spacing must be positive");
    if (shell_spacing > 0.125) throw ResolutionTooCoarse(shell_spacing * eps, eps);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Direction {
    std::array<double, 3> n;
    double w;
};

std::vector<Direction> directions(const QuadratureSpec& spec) {
    std::vector<double> mu, wmu;
    quad::mapped_rule(static_cast<std::size_t>(spec.polar_nodes), -1.0, 1.0, mu, wmu);
    std::vector<Direction> out;
    const double dphi = 2.0 * std::numbers::pi / spec.azimuth_nodes;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double s = std::sqrt(std::max(0.0, 1.0 - mu[i] * mu[i]));
        for (int k = 0; k < spec.azimuth_nodes; ++k) {
            const double ph = (k + 0.5) * dphi;
            out.push_back({{s * std::cos(ph), s * std::sin(ph), mu[i]}, wmu[i] * dphi});
        }
    }
    return out;
}

/// Ray p + r n (r >= 0) against the ball |x| < rho: [rin, rout], or empty.
bool ray_ball(const std::array<double, 3>& p, const std::array<double, 3>& n, double rho, double& rin,
              double& rout) {
    const double b = p[0] * n[0] + p[1] * n[1] + p[2] * n[2];
    const double c = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - rho * rho;
    const double disc = b * b - c;
    if (disc <= 0.0) return false;
    const double sq = std::sqrt(disc);
    rin = std::max(0.0, -b - sq);
    rout = -b + sq;
    return rout > rin;
}

/// Calls node(r, w) for a quadrature of [rin, rout] split at the shell
/// boundaries r1 < r2: one panel inside, panels of width <= spacing in the
/// shell, and `outer_panels` panels beyond.
template <class Node>
void radial_rule(double rin, double rout, double r1, double r2, double shell_width,
                 const QuadratureSpec& spec, Node&& node) {
    double cuts[4] = {rin, std::clamp(r1, rin, rout), std::clamp(r2, rin, rout), rout};
    std::vector<double> x, w;
    for (int s = 0; s < 3; ++s) {
        const double a = cuts[s];
        const double b = cuts[s + 1];
        if (!(b > a)) continue;
        int panels = 1;
        int nodes = spec.inner_nodes;
        if (s == 1) {
            panels = std::max(1, static_cast<int>(std::ceil((b - a) / shell_width - 1e-9)));
            nodes = spec.shell_nodes;
        } else if (s == 2) {
            panels = spec.outer_panels;
            nodes = spec.outer_nodes;
        }
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            quad::mapped_rule(static_cast<std::size_t>(nodes), a + p * h, a + (p + 1) * h, x, w);
            for (std::size_t i = 0; i < x.size(); ++i) node(x[i], w[i]);
        }
    }
}

FourVector spatial_point(double t, const std::array<double, 3>& z, const std::array<double, 3>& n,
                         double r) {
    return {t, z[0] + r * n[0], z[1] + r * n[1], z[2] + r * n[2]};
}

/// r > 0 on the ray where the retarded distance reaches `target`.
double xi_crossing(const Worldline& w, double t, const std::array<double, 3>& z,
                   const std::array<double, 3>& n, double target, const SolverOptions& opts) {
    auto g = [&](double r) {
        return kinematics(w, spatial_point(t, z, n, r), opts).xi - target;
    };
    double lo = 0.0;
    double glo = -target;
    double hi = target;
    double ghi = g(hi);
    for (int it = 0; ghi < 0.0; ++it) {
        if (it > 60) throw NoConvergence(it, ghi);
        lo = hi;
        glo = ghi;
        hi *= 2.0;
        ghi = g(hi);
    }
    if (ghi == 0.0) return hi;
    std::uintmax_t max_iter = 100;
    const auto [a, b] = boost::math::tools::toms748_solve(
        g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(50), max_iter);
    return 0.5 * (a + b);
}

double pair_line(const LineNet& net, const TestFunction& phi, double eps) {
    const double lo = phi.center()[0] - phi.radius();
    const double hi = phi.center()[0] + phi.radius();
    std::vector<double> cuts{lo, hi};
    if (net.breakpoints)
        for (double b : net.breakpoints(eps))
            if (b > lo && b < hi) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        s += quad::adaptive([&](double t) { return net.f(t, eps) * phi(t); }, cuts[i], cuts[i + 1],
                            1e-15, 1e-12);
    }
    return s;
}

double pair_radial(const RadialNet& net, const TestFunction& phi, double eps,
                   const QuadratureSpec& spec) {
    const std::array<double, 3> p{-phi.center()[0], -phi.center()[1], -phi.center()[2]};
    const double r1 = net.shell_lo * eps;
    const double r2 = net.shell_hi * eps;
    double s = 0.0;
    for (const Direction& d : directions(spec)) {
        double rin = 0.0, rout = 0.0;
        if (!ray_ball(p, d.n, phi.radius(), rin, rout)) continue;
        if (net.shell_only) {
            rin = std::max(rin, r1);
            rout = std::min(rout, r2);
            if (!(rout > rin)) continue;
        }
        radial_rule(rin, rout, r1, r2, spec.shell_spacing * eps, spec, [&](double r, double w) {
            const double x[3] = {r * d.n[0], r * d.n[1], r * d.n[2]};
            s += d.w * w * r * r * net.f(r, eps) * phi(std::span<const double>(x, 3));
        });
    }
    return s;
}

void require_dim(const TestFunction& phi, int dim) {
    if (phi.dim() != dim)
        throw InvalidArgument("net needs a " + std::to_string(dim) + "D test function, got " +
                              std::to_string(phi.dim()) + "D");
}

} // namespace

std::vector<double> pair_worldline(
    const Worldline& w,
    const std::function<void(const RetardedKinematics&, const FourVector&, double, std::span<double>)>&
        integrand,
    std::size_t components, const TestFunction& phi, double eps, const QuadratureSpec& spec,
    const SolverOptions& opts) {
    require_dim(phi, 4);
    spec.validate(eps);
    const auto dirs = directions(spec);
    const auto& c = phi.center();
    const double R = phi.radius();
    std::vector<double> total(components, 0.0), vals(components, 0.0);
    std::vector<double> tx, tw;
    const double h = 2.0 * R / spec.time_panels;
    for (int panel = 0; panel < spec.time_panels; ++panel) {
        quad::mapped_rule(static_cast<std::size_t>(spec.time_nodes), c[0] - R + panel * h,
                          c[0] - R + (panel + 1) * h, tx, tw);
        for (std::size_t it = 0; it < tx.size(); ++it) {
            const double t = tx[it];
            const double rho2 = R * R - (t - c[0]) * (t - c[0]);
            if (rho2 <= 0.0) continue;
            const FourVector zt = w.position(parameter_at_lab_time(w, t));
            const std::array<double, 3> z{zt[1], zt[2], zt[3]};
            const std::array<double, 3> p{z[0] - c[1], z[1] - c[2], z[2] - c[3]};
            for (const Direction& d : dirs) {
                double rin = 0.0, rout = 0.0;
                if (!ray_ball(p, d.n, std::sqrt(rho2), rin, rout)) continue;
                const double r1 = xi_crossing(w, t, z, d.n, eps, opts);
                const double r2 = xi_crossing(w, t, z, d.n, 2.0 * eps, opts);
                radial_rule(rin, rout, r1, r2, spec.shell_spacing * eps, spec, [&](double r, double wr) {
                    const FourVector X = spatial_point(t, z, d.n, r);
                    const RetardedKinematics k = kinematics(w, X, opts);
                    std::fill(vals.begin(), vals.end(), 0.0);
                    integrand(k, X, eps, vals);
                    const double weight = tw[it] * d.w * wr * r * r;
                    for (std::size_t q = 0; q < components; ++q) total[q] += weight * vals[q];
                });
            }
        }
    }
    return total;
}

double pair_at(const Net& net, const TestFunction& phi, double eps, const QuadratureSpec& spec) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0,1]");
    if (const auto* line = std::get_if<LineNet>(&net)) {
        require_dim(phi, 1);
        return pair_line(*line, phi, eps);
    }
    if (const auto* radial = std::get_if<RadialNet>(&net)) {
        require_dim(phi, 3);
        spec.validate(eps);
        return pair_radial(*radial, phi, eps, spec);
    }
    const auto& wl = std::get<WorldlineNet>(net);
    return pair_worldline(
        wl.worldline,
        [&](const RetardedKinematics& k, const FourVector& X, double e, std::span<double> out) {
            const double x[4] = {X[0], X[1], X[2], X[3]};
            out[0] = wl.f(k, X, e) * phi(std::span<const double>(x, 4));
        },
        1, phi, eps, spec, wl.opts)[0];
}

std::vector<double> pair(const Net& net, const TestFunction& phi, const EpsilonGrid& grid,
                         const QuadratureSpec& spec) {
    std::vector<double> out;
    for (double eps : grid) out.push_back(pair_at(net, phi, eps, spec));
    return out;
}

AssociationResult weak_limit(const std::vector<double>& values, const EpsilonGrid& grid, double target,
                             double scale, double tolerance, std::string claim) {
    if (values.size() != grid.size()) throw InvalidArgument("weak_limit: values and grid differ in size");
    if (values.size() < 4) throw InvalidArgument("weak_limit needs at least 4 eps points");
    if (!(scale > 0.0)) throw InvalidArgument("weak_limit: scale must be positive");
    AssociationResult res;
    res.claim = std::move(claim);
    res.eps.assign(grid.begin(), grid.end());
    res.pairing = values;
    res.target = target;
    res.scale = scale;
    res.tolerance = tolerance;

    const std::size_t n = values.size();
    const std::size_t first = n - 4;
    double spread = 0.0;
    for (std::size_t i = first; i < n; ++i) spread = std::max(spread, std::abs(values[i] - values[n - 1]));
    if (spread <= 1e-12 * scale) {
        res.limit = values[n - 1];
        res.order = kNaN;
    } else {
        // For fixed p the model is linear in (L, A); minimize the residual over p.
        auto fit = [&](double p, double* L) {
            double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
            for (std::size_t i = first; i < n; ++i) {
                const double x = std::pow(grid[i], p);
                s1 += 1;
                sx += x;
                sxx += x * x;
                sy += values[i];
                sxy += x * values[i];
            }
            const double det = s1 * sxx - sx * sx;
            const double A = (s1 * sxy - sx * sy) / det;
            const double l = (sy - A * sx) / s1;
            if (L) *L = l;
            double rss = 0.0;
            for (std::size_t i = first; i < n; ++i) {
                const double r = values[i] - l - A * std::pow(grid[i], p);
                rss += r * r;
            }
            return rss;
        };
        const double lo = std::log(0.25);
        const double hi = std::log(8.0);
        constexpr int kScan = 200;
        int best = 0;
        double best_rss = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= kScan; ++i) {
            const double rss = fit(std::exp(lo + (hi - lo) * i / kScan), nullptr);
            if (rss < best_rss) {
                best_rss = rss;
                best = i;
            }
        }
        const double a = lo + (hi - lo) * std::max(0, best - 1) / kScan;
        const double b = lo + (hi - lo) * std::min(kScan, best + 1) / kScan;
        const auto [lp, rss] = boost::math::tools::brent_find_minima(
            [&](double q) { return fit(std::exp(q), nullptr); }, a, b, 40);
        res.order = std::exp(rss <= best_rss ? lp : lo + (hi - lo) * best / kScan);
        fit(res.order, &res.limit);
    }

    // Distance to the target over the last decade of eps.
    const double floor = tolerance * scale;
    std::vector<double> dist;
    for (std::size_t i = 0; i < n; ++i)
        if (grid[i] <= 10.0 * grid[n - 1]) dist.push_back(std::abs(values[i] - target));
    bool trend = dist.back() <= floor;
    if (!trend && dist.size() >= 2 && dist.back() < dist.front()) {
        trend = true;
        for (std::size_t i = 0; i + 1 < dist.size(); ++i)
            if (dist[i + 1] > dist[i] + 0.1 * floor) trend = false;
    }
    const bool close = std::abs(res.limit - target) <= floor;
    res.pass = trend && close;
    if (!trend)
        res.reason = "NoTrend";
    else if (!close)
        res.reason = "LimitMismatch";
    return res;
}

bool AssociationReport::pass() const {
    return std::all_of(claims.begin(), claims.end(), [](const AssociationResult& r) { return r.pass; });
}

AssociationReport association_suite(const Worldline& w, const HeavisideFamily& H,
                                    const AssociationConfig& cfg) {
    if (!H.smooth()) throw SmoothnessRequired("association suite needs a smooth family");
    require_dim(cfg.phi4, 4);
    require_dim(cfg.phi3, 3);
    AssociationReport rep;
    const double e = cfg.charge;

    if (w.label() == "rest") {
        const RadialNet rho{[&](double r, double eps) { return static_rho(H, r, eps, e); }, 1.0, 2.0, true};
        const double origin[3] = {0.0, 0.0, 0.0};
        const double target = e * cfg.phi3(std::span<const double>(origin, 3));
        const double center[3] = {cfg.phi3.center()[0], cfg.phi3.center()[1], cfg.phi3.center()[2]};
        double scale = std::abs(target);
        if (scale == 0.0) scale = std::abs(e) * std::abs(cfg.phi3(std::span<const double>(center, 3)));
        if (scale == 0.0) scale = 1.0;
        rep.claims.push_back(weak_limit(pair(rho, cfg.phi3, cfg.grid, cfg.quad), cfg.grid, target,
                                        scale, cfg.tolerance, "rho ~ e delta"));
    } else {
        rep.skipped.push_back("rho ~ e delta: rest worldline only");
    }

    // Components: H phi | Psi_a phi | Phi_a box phi - Lambda_a H phi | Lambda_a phi.
    constexpr std::size_t kComponents = 13;
    const TestFunction& phi = cfg.phi4;
    std::vector<std::vector<double>> sweep;
    for (double eps : cfg.grid) {
        sweep.push_back(pair_worldline(
            w,
            [&](const RetardedKinematics& k, const FourVector& X, double ep, std::span<double> out) {
                const double x[4] = {X[0], X[1], X[2], X[3]};
                const std::span<const double> xs(x, 4);
                const double f = phi(xs);
                const double bf = phi.box(xs);
                const double h = H.H(k.xi, ep);
                const BoxPhiParts parts = box_phi_analytic(k, H, ep, e, cfg.form);
                const FourVector Phi = phi_alpha(k, H, ep, e);
                out[0] = h * f;
                for (std::size_t a = 0; a < 4; ++a) {
                    out[1 + a] = parts.Psi[a] * f;
                    out[5 + a] = Phi[a] * bf - parts.Lambda[a] * h * f;
                    out[9 + a] = parts.Lambda[a] * f;
                }
            },
            kComponents, phi, eps, cfg.quad, cfg.opts));
    }
    auto column = [&](std::size_t q) {
        std::vector<double> v;
        for (const auto& s : sweep) v.push_back(s[q]);
        return v;
    };
    const double integral = phi.integral();
    rep.claims.push_back(weak_limit(column(0), cfg.grid, integral, std::max(std::abs(integral), 1e-300),
                                    cfg.tolerance, "H(xi) ~ 1"));
    double lambda_scale = 0.0;
    for (std::size_t a = 0; a < 4; ++a) lambda_scale = std::max(lambda_scale, std::abs(sweep.back()[9 + a]));
    if (lambda_scale == 0.0) lambda_scale = 1.0;
    for (std::size_t a = 0; a < 4; ++a)
        rep.claims.push_back(weak_limit(column(1 + a), cfg.grid, 0.0, lambda_scale, cfg.tolerance,
                                        "Psi_" + std::to_string(a) + " ~ 0"));
    for (std::size_t a = 0; a < 4; ++a)
        rep.claims.push_back(weak_limit(column(5 + a), cfg.grid, 0.0, lambda_scale, cfg.tolerance,
                                        "BoxPhi_" + std::to_string(a) + " ~ Lambda_" + std::to_string(a)));
    rep.psi_sup_slope = moderateness_slope(psi_sup_net(w, H, cfg.grid, e, cfg.form, phi.center()[0], cfg.opts),
                                           Seminorm::kSup);
    return rep;
}

GeneralizedNet psi_sup_net(const Worldline& w, const HeavisideFamily& H, const EpsilonGrid& grid,
                           double charge, PsiForm form, double t0, const SolverOptions& opts) {
    // Coordinate axes and cube diagonals.
    std::vector<std::array<double, 3>> dirs;
    for (int i = 0; i < 3; ++i)
        for (double s : {-1.0, 1.0}) {
            std::array<double, 3> n{0.0, 0.0, 0.0};
            n[i] = s;
            dirs.push_back(n);
        }
    const double d = 1.0 / std::sqrt(3.0);
    for (double a : {-d, d})
        for (double b : {-d, d})
            for (double c : {-d, d}) dirs.push_back({a, b, c});
    const FourVector zt = w.position(parameter_at_lab_time(w, t0));
    const std::array<double, 3> z{zt[1], zt[2], zt[3]};
    constexpr int kSamples = 65;
    return GeneralizedNet::from(grid, [&](double eps) -> GeneralizedNet::Payload {
        SampledFunction f;
        for (const auto& n : dirs) {
            const double r1 = xi_crossing(w, t0, z, n, eps, opts);
            const double r2 = xi_crossing(w, t0, z, n, 2.0 * eps, opts);
            for (int i = 0; i < kSamples; ++i) {
                const double r = r1 + (r2 - r1) * i / (kSamples - 1);
                const RetardedKinematics k = kinematics(w, spatial_point(t0, z, n, r), opts);
                const FourVector psi = box_phi_analytic(k, H, eps, charge, form).Psi;
                f.x.push_back(r);
                f.values.push_back(max_abs(psi));
                f.weights.push_back(1.0);
            }
        }
        return f;
    });
}

} // namespace lwreg
