#include "lwreg/retarded.hpp"

#include "lwreg/errors.hpp"

#include <algorithm>
#include <limits>

namespace lwreg {

namespace {

constexpr double kOnWorldlineDistance = 1e-12;

double spatial_distance(const FourVector& R) { return R.spatial_norm(); }

} // namespace

double null_residual(const Worldline& w, const FourVector& X, double tau) {
    const FourVector R = X - w.position(tau);
    const double r = R.spatial_norm();
    return (R[0] - r) * (R[0] + r);
}

double retarded_distance_at(const Worldline& w, const FourVector& X, double tau) {
    return minkowski_inner(w.velocity(tau), X - w.position(tau));
}

double retarded_time(const Worldline& w, const FourVector& X, const SolverOptions& opts) {
    if (!(opts.tol > 0.0)) throw InvalidArgument("retarded_time: tol must be positive");

    const double tau_now = parameter_at_lab_time(w, X[0]);
    const double d_now = spatial_distance(X - w.position(tau_now));
    if (d_now < kOnWorldlineDistance) throw OnWorldline(d_now);

    const double scale = std::max(1.0, X.euclidean_norm() * X.euclidean_norm());
    const double g_tol = opts.tol * scale;

    // Emission-time guess: light travel time back from the present position.
    double tau = parameter_at_lab_time(w, X[0] - d_now);

    double hi = tau_now;
    double lo = std::min(tau, hi);
    {
        double step = std::max(d_now, 1.0);
        int expansions = 0;
        while (!(null_residual(w, X, lo) > 0.0)) {
            lo -= step;
            step *= 2.0;
            if (++expansions > 200 || !std::isfinite(lo))
                throw NoRetardedSolution("backward light cone of the observer misses the worldline");
        }
    }
    if (!(tau > lo && tau < hi)) tau = 0.5 * (lo + hi);

    double g = null_residual(w, X, tau);
    for (int it = 0; it < opts.max_iterations; ++it) {
        const double xi = retarded_distance_at(w, X, tau);
        // An exact guess (rest worldline) would otherwise be discarded by
        // the bracket update below.
        if (std::abs(g) <= g_tol && xi > 0.0 && std::abs(g / (2.0 * xi)) <= opts.tol) {
            const double d = spatial_distance(X - w.position(tau));
            if (d < kOnWorldlineDistance) throw OnWorldline(d);
            return tau;
        }
        if (g > 0.0)
            lo = tau;
        else
            hi = tau;
        double next = tau + g / (2.0 * xi);
        if (!(xi > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = next - tau;
        tau = next;
        g = null_residual(w, X, tau);
        const bool bracket_exhausted = hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                                                      std::max(1.0, std::abs(tau));
        if ((std::abs(g) <= g_tol && std::abs(step) <= opts.tol) || bracket_exhausted) {
            if (std::abs(g) > g_tol) throw NoConvergence(it + 1, g);
            const double d = spatial_distance(X - w.position(tau));
            if (d < kOnWorldlineDistance) throw OnWorldline(d);
            return tau;
        }
    }
    throw NoConvergence(opts.max_iterations, g);
}

RetardedKinematics kinematics_at(const Worldline& w, const FourVector& X, double tau_r) {
    const auto state = w.eval(tau_r);
    RetardedKinematics k;
    k.tau_r = tau_r;
    k.R = X - state.position;
    k.xi = minkowski_inner(state.velocity, k.R);
    k.K = k.R / k.xi;
    k.kappa = minkowski_inner(state.acceleration, k.K);
    const double r = k.R.spatial_norm();
    k.residual = (k.R[0] - r) * (k.R[0] + r);
    k.velocity = state.velocity;
    k.acceleration = state.acceleration;
    return k;
}

RetardedKinematics kinematics(const Worldline& w, const FourVector& X, const SolverOptions& opts) {
    return kinematics_at(w, X, retarded_time(w, X, opts));
}

double grad_tau_check(const Worldline& w, const FourVector& X, double h,
                      const SolverOptions& opts) {
    const auto k = kinematics(w, X, opts);
    FourVector fd;
    for (std::size_t mu = 0; mu < 4; ++mu) {
        const double plus = retarded_time(w, X + h * basis(mu), opts);
        const double minus = retarded_time(w, X - h * basis(mu), opts);
        fd[mu] = (plus - minus) / (2.0 * h);
    }
    // d tau_r / d X^mu carries a lower index; raise it before comparing with K^mu.
    return max_abs(fd.lowered() - k.K);
}

FourVector grad_xi(const Worldline& w, const FourVector& X, const SolverOptions& opts) {
    const auto k = kinematics(w, X, opts);
    return k.velocity.lowered() + (k.xi * k.kappa - 1.0) * k.K.lowered();
}

FourVector null_direction(const FourVector& velocity, const std::array<double, 3>& n) {
    const double denom = velocity[0] - (velocity[1] * n[0] + velocity[2] * n[1] + velocity[3] * n[2]);
    return FourVector{1.0, n[0], n[1], n[2]} / denom;
}

} // namespace lwreg
