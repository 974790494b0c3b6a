#pragma once

#include "deltastrip/strip.hpp"

namespace deltastrip {

/**
 * Positive solution of -phi'' + omega phi + gamma delta_0 phi - phi^p = 0 on the line:
 *
 *   phi(x) = ((p+1) omega/2 * sech^2(c|x| + x0))^{1/(p-1)},
 *   c = (p-1) sqrt(omega)/2,  x0 = atanh(-gamma/(2 sqrt(omega))).
 *
 * Exists iff omega > gamma^2/4 (and omega > 0).
 */
class Soliton1D {
public:
    static Soliton1D make(double omega, double gamma, double p);

    double omega() const { return omega_; }
    double gamma() const { return gamma_; }
    double p() const { return p_; }

    /// Decay constant of the sech argument, (p-1) sqrt(omega)/2.
    double rate() const { return rate_; }
    /// Offset x0 of the sech argument; positive for gamma < 0.
    double offset() const { return offset_; }

    double value_at(double x) const;
    /// ((p+1)/2 (omega - gamma^2/4))^{1/(p-1)}
    double peak_value() const;

private:
    Soliton1D(double omega, double gamma, double p);

    double omega_;
    double gamma_;
    double p_;
    double rate_;
    double offset_;
    double amplitude_;
};

double eval_profile(const Soliton1D& s, double x);

/// int_a^inf sech^q(s) ds. Closed forms for q = 1, 2, 4; adaptive Gauss-Kronrod otherwise.
double sech_power_tail(double q, double a);

/// Q(omega, gamma) with M = Q omega^{(5-p)/(2(p-1))}.
double q_factor(const Soliton1D& s);

double mass_of(const Soliton1D& s);

/// int |phi|^{p+1} dx.
double potential_of(const Soliton1D& s);

/// 2(p+3) E = -(5-p) omega M + (p-1) gamma phi(0)^2.
double energy_1d(const Soliton1D& s);

/**
 * Unique omega with mass_of(phi_{omega,gamma}) = m on a monotone branch:
 * gamma < 0 with 1 < p <= 5, gamma = 0 with 1 < p < 5, gamma > 0 with
 * 1 < p <= 3. Other regimes throw BranchAmbiguity.
 */
double omega_of_mass(double m, double gamma, double p);

/// y-constant samples of the profile; Dirichlet columns are set to 0.
Field extend_to_strip(const Soliton1D& s, const StripGrid& grid);

}  // namespace deltastrip
