#include "deltastrip/greens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace deltastrip {

namespace {

constexpr double kPi = std::numbers::pi;

// phi1(z) = (e^z - 1)/z and psi(z) = int_0^1 t e^{z t} dt, for z <= 0.
double phi1(double z) {
    if (std::abs(z) < 1e-4) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    return std::expm1(z) / z;
}

double psi(double z) {
    if (std::abs(z) < 1e-4) return 0.5 + z * (1.0 / 3.0 + z * (0.125 + z / 30.0));
    return (z * std::exp(z) - std::expm1(z)) / (z * z);
}

// int over [a, a+h] of exp(alpha + kappa (xi - a)) * (fa + (fb - fa)(xi - a)/h).
// Expanded around the endpoint where the exponent is largest so nothing overflows.
double exp_linear_cell(double alpha, double kappa, double h, double fa, double fb) {
    if (kappa <= 0.0) {
        const double z = kappa * h;
        return std::exp(alpha) * h * (fa * phi1(z) + (fb - fa) * psi(z));
    }
    const double beta = alpha + kappa * h;
    const double z = -kappa * h;
    return std::exp(beta) * h * (fb * phi1(z) + (fa - fb) * psi(z));
}

}  // namespace

GreensSpec GreensSpec::make(double omega, double gamma, double L, int k_max, bool even_modes_only) {
    if (!std::isfinite(omega) || !std::isfinite(gamma) || !std::isfinite(L) || !(L > 0.0)) {
        throw Error(ErrorKind::InadmissibleParams, "Green's function needs finite omega, gamma and L > 0");
    }
    if (!(omega > 0.0) || !(omega > omega_floor(gamma))) {
        std::ostringstream os;
        os << "Green's function needs omega > 0 and omega > gamma^2/4 for gamma < 0 (omega=" << omega
           << ", gamma=" << gamma << ")";
        throw Error(ErrorKind::InadmissibleParams, os.str());
    }
    GreensSpec s;
    s.omega = omega;
    s.gamma = gamma;
    s.L = L;
    s.k_max = k_max;
    s.even_modes_only = even_modes_only;
    return s;
}

double GreensSpec::lambda(int k) const {
    const double f = (even_modes_only ? 2.0 : 1.0) * k * kPi / L;
    return f * f;
}

int GreensSpec::default_k_max() const {
    int k = 0;
    while (0.5 * std::sqrt(lambda(k) + omega) <= 25.0) ++k;
    return k;
}

double mode_coefficient(int k, double x, double xi, const GreensSpec& spec) {
    const double s = std::sqrt(spec.lambda(k) + spec.omega);
    const double defect = -spec.gamma / (spec.gamma + 2.0 * s);
    return (defect * std::exp(-s * (std::abs(x) + std::abs(xi))) + std::exp(-s * std::abs(x - xi))) / (2.0 * s);
}

double transverse_mode(int k, double y, const GreensSpec& spec) {
    if (k == 0) return 1.0 / std::sqrt(spec.L);
    const double f = (spec.even_modes_only ? 2.0 : 1.0) * k * kPi / spec.L;
    return std::sqrt(2.0 / spec.L) * std::cos(f * y);
}

GreensValue greens_eval(double x, double y, double xi, double eta, const GreensSpec& spec) {
    if (x == xi && y == eta) throw Error(ErrorKind::OnDiagonal, "Green's function is singular on the diagonal");
    const int kmax = spec.effective_k_max();
    GreensValue out;
    for (int k = 0; k <= kmax; ++k) {
        out.value += mode_coefficient(k, x, xi, spec) * transverse_mode(k, y, spec) * transverse_mode(k, eta, spec);
    }
    // |g_k theta_k theta_k| <= (2/L) e^{-s_k a}/s_k with s_k >= c k, c the mode spacing.
    const double a = std::abs(x - xi);
    const double c = (spec.even_modes_only ? 2.0 : 1.0) * kPi / spec.L;
    if (a == 0.0) {
        out.tail_bound = std::numeric_limits<double>::infinity();
    } else {
        const double k1 = kmax + 1.0;
        out.tail_bound = (2.0 / spec.L) * std::exp(-c * k1 * a) / (c * k1 * -std::expm1(-c * a));
    }
    return out;
}

double verify_solution_via_green(const Field& u, const ProblemParams& params) {
    const StripGrid& g = u.grid();
    const int nx = g.nx();
    const int ny = g.ny();
    const double hx = g.hx();
    const double p = params.p;
    const double omega = params.omega;
    const double gamma = params.gamma;
    if (!(omega > 0.0) || !(omega > omega_floor(gamma))) {
        throw Error(ErrorKind::InadmissibleParams, "verification needs omega > 0 and omega > gamma^2/4");
    }

    // Transverse cosine coefficients of |u|^{p-1} u at every x node.
    std::vector<double> coef(static_cast<std::size_t>(ny) * nx, 0.0);
    std::vector<double> norms(ny, 0.0);
    for (int k = 0; k < ny; ++k) {
        for (int j = 0; j < ny; ++j) {
            const double c = std::cos(kPi * k * j / (ny - 1));
            norms[k] += g.wy(j) * c * c;
        }
    }
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const double v = u(i, j);
            const double f = std::pow(std::abs(v), p - 1.0) * v;
            if (f == 0.0) continue;
            for (int k = 0; k < ny; ++k) {
                coef[static_cast<std::size_t>(k) * nx + i] += g.wy(j) * std::cos(kPi * k * j / (ny - 1)) * f;
            }
        }
    }

    const double X = g.x_extent();
    const int c = g.center();
    const std::vector<int> probe_j{0, (ny - 1) / 2, ny - 1};
    double worst = 0.0;
    for (int i = c % 8; i < nx; i += 8) {
        const double x = g.x(i);
        if (std::abs(x) > 0.5 * X + 1e-12) continue;
        std::vector<double> mode_values(ny, 0.0);
        for (int k = 0; k < ny; ++k) {
            const double lam = (k * kPi / params.L) * (k * kPi / params.L);
            const double s = std::sqrt(lam + omega);
            const double defect = -gamma / (gamma + 2.0 * s) / (2.0 * s);
            const double direct = 1.0 / (2.0 * s);
            const double* f = &coef[static_cast<std::size_t>(k) * nx];
            double total = 0.0;
            for (int a = 0; a + 1 < nx; ++a) {
                const double xa = g.x(a);
                const double mid = xa + 0.5 * hx;
                // The cell lies on one side of 0 and of x, so both exponents are affine in xi.
                const double sgn0 = mid > 0.0 ? 1.0 : -1.0;
                const double sgnx = mid > x ? 1.0 : -1.0;
                total += defect * exp_linear_cell(-s * (std::abs(x) + std::abs(xa)), -s * sgn0, hx, f[a], f[a + 1]);
                total += direct * exp_linear_cell(-s * std::abs(xa - x), -s * sgnx, hx, f[a], f[a + 1]);
            }
            mode_values[k] = total / norms[k];
        }
        for (int j : probe_j) {
            double conv = 0.0;
            for (int k = 0; k < ny; ++k) conv += mode_values[k] * std::cos(kPi * k * j / (ny - 1));
            worst = std::max(worst, std::abs(u(i, j) - conv));
        }
    }
    return worst;
}

}  // namespace deltastrip
