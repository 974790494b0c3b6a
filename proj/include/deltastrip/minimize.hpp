#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "deltastrip/functionals.hpp"
#include "deltastrip/strip.hpp"

namespace deltastrip {

enum class MinimizeMode { NehariAction, MassEnergy };
enum class StartKind { SolitonExtension, GaussianBump, Random, File };

struct IterationRecord {
    int iter = 0;
    double objective = 0.0;
    double grad_norm = 0.0;
    double nehari = 0.0;
    double mass = 0.0;
    double dy_norm = 0.0;
    double step = 0.0;
};

struct MinimizeConfig {
    MinimizeMode mode = MinimizeMode::NehariAction;
    bool symmetric_x = false;
    double step = 1.0;
    int max_iters = 2000;
    double tol_grad = 1e-8;
    std::uint64_t seed = 0;
    StartKind start = StartKind::SolitonExtension;
    /// Required for StartKind::File; must live on the run grid.
    std::optional<Field> start_field;
    /// Center and width of the Gaussian bump start.
    double bump_center = 0.0;
    double bump_width = 1.0;
    /// Multiplies the start by (1 + perturb_y cos(pi y)) to seed transverse modes.
    double perturb_y = 0.0;
    /// Restrict iterates to y-independent fields (1D reference runs).
    bool y_constant = false;
    /// Translation pinning period for gamma = 0 runs without symmetry.
    int recenter_every = 50;
    /// Allow full-strip runs where no minimizer exists (gamma > 0) to observe run-away.
    bool probe_runaway = false;
    /// Called once per iteration before the convergence test.
    std::function<void(const IterationRecord&)> on_iteration;
};

struct MinimizeDiagnostics {
    double centroid = 0.0;
    /// |centroid| / (X/2); values above 1 flag run-away.
    double runaway_score = 0.0;
    bool runaway = false;
    /// sqrt(ky), the raw transverse gradient norm.
    double dy_norm = 0.0;
    /// Max |u(x,y) - u(-x,y)|.
    double sym_defect = 0.0;
    int rejected_steps = 0;
};

struct MinimizeResult {
    Field field;
    FunctionalReport report;
    /// Lagrange multiplier (mass mode) or the prescribed omega (Nehari mode).
    double recovered_omega = 0.0;
    /// Frequency from the Pohozaev combination, for comparison.
    double pohozaev_omega = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Quadrature L2 norm of the constrained gradient at the returned iterate.
    double grad_norm = 0.0;
    MinimizeDiagnostics diagnostics;
    std::vector<IterationRecord> history;
    std::string stop_reason;
};

/// Scaling t(u) with I(t u) = 0: (quadratic_form / P)^{1/(p-1)}.
double nehari_scale(const Field& u, const ProblemParams& params);

/// t(u) u. Throws ProjectionUndefined when the quadratic part or P vanish.
Field nehari_project(const Field& u, const ProblemParams& params);

/// Even part in x, (u(x,y) + u(-x,y))/2.
Field enforce_symmetry(const Field& u);

/// Rescales u to mass m.
Field mass_project(const Field& u, double m);

/// Starting field for a run (before any projection).
Field initial_field(const MinimizeConfig& cfg, const ProblemParams& params, const StripGrid& grid);

/**
 * Action ground state on the Nehari manifold.
 *
 * Preconditioned projected gradient descent: the gradient of S is
 * preconditioned with the linear operator L_{omega,gamma}, the trial point is
 * clamped to u >= 0, symmetrized when requested and projected back to I = 0.
 * Steps are accepted under an Armijo condition on (p-1)/(2(p+1)) ||u||^{p+1},
 * halving up to 30 times.
 */
MinimizeResult minimize_action(const MinimizeConfig& cfg, const ProblemParams& params, const StripGrid& grid);

/**
 * Energy ground state at fixed mass params.m.
 *
 * Normalized preconditioned gradient flow: the preconditioner is
 * L_{c,gamma} with c tracking the current multiplier, the direction is made
 * tangent to the mass sphere in the preconditioned metric, and the trial point
 * is rescaled to mass m. Armijo backtracking on E as in minimize_action.
 */
MinimizeResult minimize_energy(const MinimizeConfig& cfg, const ProblemParams& params, const StripGrid& grid);

struct ShapeViolations {
    /// max(0, -u) over interior nodes.
    double positivity = 0.0;
    /// max |u(x,y) - u(-x,y)|.
    double symmetry = 0.0;
    /// Largest increase of u along |x| away from x = 0.
    double monotone_x = 0.0;
    /// Largest violation of monotonicity in y, for the better of the two directions.
    double monotone_y = 0.0;
    double max_abs = 0.0;
};

ShapeViolations positivity_and_rearrangement_check(const Field& u);

/// Slope of a least-squares fit of log u(x, y_j) against |x| over x > 0 where
/// u > floor, skipping the nonlinear core and the last margin near X.
double decay_slope(const Field& u, int j, double x_min, double x_max, double floor = 1e-8);

}  // namespace deltastrip
