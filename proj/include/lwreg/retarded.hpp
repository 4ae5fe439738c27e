#pragma once

#include "lwreg/minkowski.hpp"

namespace lwreg {

struct SolverOptions {
    double tol = 1e-12;
    int max_iterations = 100;
};

/// Retarded quantities at an observer point X. Vectors are contravariant.
struct RetardedKinematics {
    double tau_r = 0.0;
    FourVector R;        // X - Z(tau_r), future-directed null
    double xi = 0.0;     // retarded distance Zdot.R > 0
    FourVector K;        // R / xi
    double kappa = 0.0;  // acceleration invariant Zddot.K
    double residual = 0.0; // R.R at the solution
    FourVector velocity;     // Zdot(tau_r)
    FourVector acceleration; // Zddot(tau_r)
};

/// R.R for X - Z(tau), evaluated as (R0 - |r|)(R0 + |r|).
double null_residual(const Worldline& w, const FourVector& X, double tau);

/// xi(X, tau) = Zdot(tau).(X - Z(tau)), defined off the light cone too.
double retarded_distance_at(const Worldline& w, const FourVector& X, double tau);

/// Unique tau with Z(tau) on the backward light cone of X.
///
/// Safeguarded Newton on g(tau) = R.R with g' = -2 xi: the bracket
/// [lo, hi] keeps g(lo) > 0 > g(hi), hi being the eigentime at which the
/// worldline reaches lab time X0. Any Newton step leaving the bracket, or
/// taken where xi <= 0, is replaced by bisection. Stops when
/// |R.R| <= tol max(1, |X|^2) and the last step is <= tol.
///
/// Throws OnWorldline, NoRetardedSolution (light cone misses the curve) or
/// NoConvergence.
double retarded_time(const Worldline& w, const FourVector& X, const SolverOptions& opts = {});

RetardedKinematics kinematics(const Worldline& w, const FourVector& X,
                              const SolverOptions& opts = {});

/// Build the kinematics at a known tau_r (no solve). Used when the caller
/// constructs X from retarded coordinates.
RetardedKinematics kinematics_at(const Worldline& w, const FourVector& X, double tau_r);

/// max_mu |central difference of tau_r along X^mu, index raised, minus K^mu|.
double grad_tau_check(const Worldline& w, const FourVector& X, double h,
                      const SolverOptions& opts = {});

/// Analytic gradient of the retarded distance, d xi~/d X^nu (covariant
/// components): Zdot_nu + K_nu (xi kappa - 1).
FourVector grad_xi(const Worldline& w, const FourVector& X, const SolverOptions& opts = {});

/// Future-directed null vector with K.Zdot = 1 pointing along the spatial
/// unit direction `n` in the lab. X = Z(tau) + xi K then has retarded time
/// tau and retarded distance xi exactly.
FourVector null_direction(const FourVector& velocity, const std::array<double, 3>& n);

} // namespace lwreg
