#pragma once

#include "deltastrip/strip.hpp"

namespace deltastrip {

/**
 * Green's function of -d_xx - d_yy + gamma*delta_0(x) + omega on the strip
 * R x [0, L] with Neumann conditions at y = 0 and y = L, expanded in the
 * transverse eigenbasis theta_k(y) ~ cos(k pi y / L), lambda_k = (k pi / L)^2.
 *
 * With even_modes_only the sum runs over cos(2 k pi y / L) alone,
 * lambda_k = (2 k pi / L)^2. That basis is incomplete and is kept for
 * comparison only.
 */
struct GreensSpec {
    double omega = 1.0;
    double gamma = 0.0;
    double L = 1.0;
    /// Highest mode index in the sum; <= 0 selects default_k_max().
    int k_max = 0;
    bool even_modes_only = false;

    static GreensSpec make(double omega, double gamma, double L, int k_max = 0, bool even_modes_only = false);

    /// Transverse eigenvalue of mode k.
    double lambda(int k) const;
    /// Smallest k with sqrt(lambda_k + omega)/2 > 25.
    int default_k_max() const;
    int effective_k_max() const { return k_max > 0 ? k_max : default_k_max(); }
};

/// g_k(x, xi) = (1/(2s)) (-gamma/(gamma + 2s) e^{-s(|x|+|xi|)} + e^{-s|x-xi|}), s = sqrt(lambda_k + omega).
double mode_coefficient(int k, double x, double xi, const GreensSpec& spec);

/// Normalized transverse eigenfunction theta_k on [0, L].
double transverse_mode(int k, double y, const GreensSpec& spec);

struct GreensValue {
    double value = 0.0;
    /// Bound on the neglected modes k > k_max from the geometric tail.
    double tail_bound = 0.0;
};

/// Truncated modal sum. Throws OnDiagonal when (x, y) == (xi, eta).
GreensValue greens_eval(double x, double y, double xi, double eta, const GreensSpec& spec);

/**
 * Largest |u - G[|u|^{p-1} u]| over a probe set: every 8th x node with
 * |x| <= X/2 crossed with y in {0, 1/2, 1}. Uses params.omega as the
 * frequency. The x convolution integrates each g_k exactly against the
 * piecewise-linear interpolant of the nonlinearity's transverse coefficients,
 * over all ny discrete cosine modes.
 */
double verify_solution_via_green(const Field& u, const ProblemParams& params);

}  // namespace deltastrip
