#pragma once

#include <cstdint>

#include "deltastrip/strip.hpp"

namespace deltastrip {

/**
 * Scalar functionals of a field on the rescaled strip.
 *
 *   S = 1/2 kx + w/2 ky + omega/2 M + gamma/2 T - P/(p+1)
 *   I = kx + w ky + omega M + gamma T - P
 *   E = 1/2 kx + w/2 ky + gamma/2 T - P/(p+1)
 *
 * with w = 1/L^2, kx = ||d_x u||^2, ky = ||d_y u||^2, T = int |u(0,y)|^2 dy and
 * P = ||u||_{p+1}^{p+1}. On the physical strip of width L every value is L
 * times the rescaled one.
 */
struct FunctionalReport {
    double action = 0.0;
    double nehari = 0.0;
    double energy = 0.0;
    double mass = 0.0;
    double trace = 0.0;
    double kinetic_x = 0.0;
    double kinetic_y = 0.0;
    double potential = 0.0;
    /// Sum of magnitudes of the Nehari terms; the reference for relative checks.
    double scale = 0.0;
};

/// Evaluates every functional; throws on inadmissible (p, gamma, omega, L).
FunctionalReport eval_all(const Field& u, const ProblemParams& params);

/// Same as eval_all without the omega admissibility check (energy runs, where
/// omega is a Lagrange multiplier and only E and M are meaningful).
FunctionalReport evaluate(const Field& u, const ProblemParams& params);

/// Quadratic part <L_{omega,gamma} u, u> = kx + w ky + omega M + gamma T.
double quadratic_form(const Field& u, const ProblemParams& params);

/// Exact gradient of the discrete action in the quadrature inner product.
/// Dirichlet columns carry zero.
Field grad_action(const Field& u, const ProblemParams& params);

/// Exact gradient of the discrete energy (no omega term).
Field grad_energy(const Field& u, const ProblemParams& params);

/// (kx + h ky + gamma T) / M. Throws ZeroField on u == 0.
double rayleigh_lambda(const Field& u, double gamma, double h);

struct RayleighMinimum {
    double value = 0.0;
    Field field;
    int iterations = 0;
    bool converged = false;
};

/**
 * Minimizes the quotient of rayleigh_lambda from a random positive start with
 * preconditioned steepest descent and exact two-dimensional Rayleigh-Ritz line
 * search. Stops once the quotient changes by less than tol over an iteration.
 */
RayleighMinimum minimize_rayleigh(const StripGrid& grid, double gamma, double h, std::uint64_t seed,
                                  double tol = 1e-13, int max_iters = 5000);

struct PohozaevResiduals {
    /// kx + w ky + omega M - P + gamma T, divided by the sum of term magnitudes.
    double r1 = 0.0;
    /// kx - w ky - omega M + 2P/(p+1), divided by the sum of term magnitudes.
    double r2 = 0.0;
    double abs1 = 0.0;
    double abs2 = 0.0;
};

PohozaevResiduals pohozaev_residuals(const Field& u, const ProblemParams& params, double omega);

/**
 * Frequency of a stationary point recovered from the two Pohozaev identities:
 *   (5-p) omega M = -2(p+3) E + (p-1) gamma T + 2(p-1) w ky.
 * Throws SingularFormula for p = 5 and ZeroField for M = 0. Diagnostic only
 * when u is not a solution.
 */
double recover_omega(const Field& u, const ProblemParams& params);

/// Lagrange multiplier of the mass constraint, -<grad E(u), u>/M. Exact for
/// discrete stationary points.
double multiplier_omega(const Field& u, const ProblemParams& params);

}  // namespace deltastrip
