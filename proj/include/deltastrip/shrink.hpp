#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "deltastrip/minimize.hpp"
#include "deltastrip/strip.hpp"

namespace deltastrip {

struct SweepConfig {
    double gamma = -1.0;
    double p = 2.5;
    /// Mass on the normalized strip (mass per unit width on the physical one).
    double mass = 1.0;
    /// Only used by action sweeps.
    double omega = 1.0;
    MinimizeMode mode = MinimizeMode::MassEnergy;
    double x_extent = 16.0;
    int nx = 257;
    int ny = 9;
    double tol_grad = 1e-8;
    int max_iters = 5000;
    /// Amplitude of the (1 + a cos(pi y)) perturbation applied to every start.
    double perturb_y = 0.05;
    /// y_independent <=> dy_norm_scaled < y_threshold * M.
    double y_threshold = 1e-10;
    /// Number of widths re-run from a cold random start (first, middle, last).
    int cold_sentinels = 3;
    int jobs = 1;
    std::uint64_t seed = 0;
};

struct SweepRecord {
    double L = 0.0;
    double energy = 0.0;
    double action = 0.0;
    /// (1/L^2) ||d_y u||^2 on the normalized strip.
    double dy_norm_scaled = 0.0;
    double recovered_omega = 0.0;
    double pohozaev_omega = 0.0;
    /// E - e1D with e1D the y-independent minimizer on the same x grid.
    double e1d_gap = 0.0;
    /// E - e1D with e1D from the closed-form line soliton.
    double e1d_analytic_gap = 0.0;
    /// Discrete H^1 distance to the y-independent minimizer.
    double h1_gap = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool y_independent = false;
    bool converged = false;
    /// Energy of the cold-start rerun; NaN when this width is not a sentinel.
    double cold_energy = 0.0;
    bool cold_checked = false;
};

struct SweepResult {
    std::vector<SweepRecord> records;
    /// Objective of the y-independent reference run (energy or action).
    double e1d = 0.0;
    double e1d_analytic = 0.0;
    Field reference;
};

/// Widths L_min..L_max, geometrically spaced, n points.
std::vector<double> geometric_widths(double L_min, double L_max, int n);

/**
 * Runs the minimizer for every width in L_list (processed in the given order,
 * each start warm from the previous result) and records shrinkage
 * diagnostics. Cold-start reruns at the sentinel widths run concurrently,
 * at most cfg.jobs at a time.
 */
SweepResult sweep_L(const SweepConfig& cfg, const std::vector<double>& L_list);

struct LStarEstimate {
    double estimate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int evaluations = 0;
};

/// Returns true when the minimizer at width L is y-independent.
using WidthClassifier = std::function<bool(double)>;

/**
 * Locates the first switch of the y_independent flag from true to false in
 * increasing L, then bisects with classify until the bracket is narrower than
 * width. Throws BracketNotFound when the sweep has no such switch.
 */
LStarEstimate estimate_L_star(const std::vector<SweepRecord>& records, const WidthClassifier& classify,
                              double width = 1e-2);

/// Classifier running the minimizer selected by cfg.mode at width L and
/// thresholding (1/L^2)||d_y u||^2 / M.
WidthClassifier width_classifier(const ProblemParams& base, const StripGrid& grid,
                                 const MinimizeConfig& cfg, double threshold = 1e-10);

struct LStarStarBound {
    double omega_m = 0.0;
    double potential = 0.0;
    /// int |f'|^2 / (int |f|^{p+1} - 1) for f = sqrt(2)|cos(2 pi y)|.
    double quotient_fixed = 0.0;
    double quotient_optimized = 0.0;
    /// (p+1) m / 2 * quotient / int |phi|^{p+1}; bounds (L**)^2.
    double bound_fixed = 0.0;
    double bound_optimized = 0.0;
    double sqrt_bound_fixed = 0.0;
    double sqrt_bound_optimized = 0.0;
};

/// Upper bound on L** built from the line soliton of mass m. With optimize the
/// quotient is also minimized over eight-mode cosine series (GSL simplex).
LStarStarBound l_star_star_bound(double m, double gamma, double p, bool optimize = true);

/// Quotient of l_star_star_bound for the fixed profile, closed form.
double fixed_profile_quotient(double p);

struct GammaStarResult {
    double gamma_star = 0.0;
    double sigma_star = 0.0;
    int shift_nodes = 0;
    /// I_{omega,0}(psi_{-sigma*}) and I_{omega,0}(psi_{sigma*}).
    double I_minus = 0.0;
    double I_plus = 0.0;
    double trace = 0.0;
    /// max over scanned shifts of |I(psi_s) + I(psi_-s) - 2 I(psi)| / scale.
    double identity_residual = 0.0;
    /// Action of the symmetric gamma = 0 minimizer psi (normalized strip).
    double s_omega0 = 0.0;
    bool psi_converged = false;
    Field psi;
    std::vector<double> scan_sigma;
    std::vector<double> scan_I_minus;
};

/// psi(|x| + s hx, y) on the grid extended by s nodes at each end. Negative s
/// splits psi into two bumps at +-|s| hx.
Field mirrored_shift(const Field& psi, int s);

/**
 * gamma* = -I_{omega,0}(psi_{-sigma*}) / int |psi(-sigma*, y)|^2 dy with psi
 * the symmetric gamma = 0 action minimizer and sigma* minimizing
 * I_{omega,0}(psi_{-sigma}) over node multiples sigma in (0, X/2] (coarse scan,
 * then golden section on integers). Throws ConsistencyError unless
 * 0 < gamma* < 2 sqrt(omega).
 */
GammaStarResult gamma_star(double omega, double L, double p, const StripGrid& grid, const MinimizeConfig& cfg);

}  // namespace deltastrip
