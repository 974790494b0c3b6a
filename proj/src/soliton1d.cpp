#include "deltastrip/soliton1d.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace deltastrip {

Soliton1D::Soliton1D(double omega, double gamma, double p)
    : omega_(omega),
      gamma_(gamma),
      p_(p),
      rate_(0.5 * (p - 1.0) * std::sqrt(omega)),
      offset_(std::atanh(-gamma / (2.0 * std::sqrt(omega)))),
      amplitude_(std::pow(0.5 * (p + 1.0) * omega, 1.0 / (p - 1.0))) {}

Soliton1D Soliton1D::make(double omega, double gamma, double p) {
    if (!std::isfinite(p) || !(p > 1.0)) {
        throw Error(ErrorKind::InadmissibleParams, "soliton needs p > 1");
    }
    if (!std::isfinite(omega) || !std::isfinite(gamma) || !(omega > 0.0) ||
        !(omega > 0.25 * gamma * gamma)) {
        std::ostringstream os;
        os << "soliton needs omega > gamma^2/4 (omega=" << omega << ", gamma=" << gamma << ")";
        throw Error(ErrorKind::InadmissibleParams, os.str());
    }
    return Soliton1D(omega, gamma, p);
}

double Soliton1D::value_at(double x) const {
    const double z = rate_ * std::abs(x) + offset_;
    const double sech = 1.0 / std::cosh(z);
    return amplitude_ * std::pow(sech, 2.0 / (p_ - 1.0));
}

double Soliton1D::peak_value() const {
    return std::pow(0.5 * (p_ + 1.0) * (omega_ - 0.25 * gamma_ * gamma_), 1.0 / (p_ - 1.0));
}

double eval_profile(const Soliton1D& s, double x) { return s.value_at(x); }

double sech_power_tail(double q, double a) {
    if (q == 2.0) return 1.0 - std::tanh(a);
    if (q == 4.0) {
        const double t = std::tanh(a);
        return 2.0 / 3.0 - (t - t * t * t / 3.0);
    }
    if (q == 1.0) return 0.5 * std::numbers::pi - 2.0 * std::atan(std::tanh(0.5 * a));
    auto f = [q](double s) { return std::pow(1.0 / std::cosh(s), q); };
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    // Split at the peak so the adaptive rule sees one smooth monotone piece each.
    if (a < 0.0) {
        return gauss_kronrod<double, 61>::integrate(f, a, 0.0, 15, 1e-12, &err) +
               gauss_kronrod<double, 61>::integrate(f, 0.0, inf, 15, 1e-12, &err);
    }
    return gauss_kronrod<double, 61>::integrate(f, a, inf, 15, 1e-12, &err);
}

double q_factor(const Soliton1D& s) {
    const double p = s.p();
    return std::pow(0.5 * (p + 1.0), 2.0 / (p - 1.0)) * 4.0 / (p - 1.0) *
           sech_power_tail(4.0 / (p - 1.0), s.offset());
}

double mass_of(const Soliton1D& s) {
    const double p = s.p();
    return q_factor(s) * std::pow(s.omega(), (5.0 - p) / (2.0 * (p - 1.0)));
}

double potential_of(const Soliton1D& s) {
    const double p = s.p();
    const double base = std::pow(0.5 * (p + 1.0) * s.omega(), (p + 1.0) / (p - 1.0));
    return base * 2.0 / s.rate() * sech_power_tail(2.0 * (p + 1.0) / (p - 1.0), s.offset());
}

double energy_1d(const Soliton1D& s) {
    const double p = s.p();
    const double peak = s.peak_value();
    return (-(5.0 - p) * s.omega() * mass_of(s) + (p - 1.0) * s.gamma() * peak * peak) / (2.0 * (p + 3.0));
}

double omega_of_mass(double m, double gamma, double p) {
    if (!std::isfinite(m) || !(m > 0.0)) {
        throw Error(ErrorKind::InadmissibleParams, "omega_of_mass needs m > 0");
    }
    if (!std::isfinite(p) || !(p > 1.0)) {
        throw Error(ErrorKind::InadmissibleParams, "omega_of_mass needs p > 1");
    }
    const bool monotone = (gamma < 0.0 && p <= 5.0) || (gamma == 0.0 && p < 5.0) || (gamma > 0.0 && p <= 3.0);
    if (!monotone) {
        std::ostringstream os;
        os << "mass is not monotone in omega for gamma=" << gamma << ", p=" << p
           << "; the frequency branch is ambiguous";
        throw Error(ErrorKind::BranchAmbiguity, os.str());
    }

    auto residual = [&](double omega) { return mass_of(Soliton1D::make(omega, gamma, p)) - m; };

    const double floor = 0.25 * gamma * gamma;
    double lo = floor > 0.0 ? floor * (1.0 + 1e-12) : 1e-14;
    double r_lo = residual(lo);
    if (r_lo > 0.0) {
        std::ostringstream os;
        os << "mass " << m << " is below the infimum " << r_lo + m << " of the branch";
        throw Error(ErrorKind::BracketNotFound, os.str());
    }
    double hi = std::max(1.0, 2.0 * lo);
    double r_hi = residual(hi);
    for (int k = 0; r_hi < 0.0; ++k) {
        if (k > 200) throw Error(ErrorKind::BracketNotFound, "could not bracket omega(m)");
        lo = hi;
        r_lo = r_hi;
        hi *= 2.0;
        r_hi = residual(hi);
    }
    if (r_lo == 0.0) return lo;

    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t max_iter = 200;
    auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, r_lo, r_hi, tol, max_iter);
    const double ra = std::abs(residual(a));
    const double rb = std::abs(residual(b));
    return ra <= rb ? a : b;
}

Field extend_to_strip(const Soliton1D& s, const StripGrid& grid) {
    Field out = Field::from_function(grid, [&](double x, double) { return s.value_at(x); });
    out.zero_x_boundary();
    return out;
}

}  // namespace deltastrip
