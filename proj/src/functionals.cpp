#include "deltastrip/functionals.hpp"

#include <cmath>
#include <random>

#include "deltastrip/linear_operator.hpp"

namespace deltastrip {

namespace {

double abs_pow(double v, double e) { return std::pow(std::abs(v), e); }

// Nehari value accumulated node by node, independently of the component sums.
double nehari_direct(const Field& u, const ProblemParams& params) {
    const StripGrid& g = u.grid();
    const double w = params.y_weight();
    const double inv_hx = 1.0 / g.hx();
    const double inv_hy = 1.0 / g.hy();
    const int c = g.center();
    double total = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            const double v = u(i, j);
            double node = g.wx(i) * g.wy(j) * (params.omega * v * v - abs_pow(v, params.p + 1.0));
            if (i + 1 < g.nx()) {
                const double d = u(i + 1, j) - v;
                node += g.wy(j) * d * d * inv_hx;
            }
            if (j + 1 < g.ny()) {
                const double d = u(i, j + 1) - v;
                node += w * g.wx(i) * d * d * inv_hy;
            }
            if (i == c) node += params.gamma * g.wy(j) * v * v;
            total += node;
        }
    }
    return total;
}

}  // namespace

FunctionalReport evaluate(const Field& u, const ProblemParams& params) {
    const double p = params.p;
    const double w = params.y_weight();
    FunctionalReport r;
    r.kinetic_x = kinetic_x(u);
    r.kinetic_y = kinetic_y(u);
    r.mass = mass(u);
    r.trace = trace_sq(u);
    r.potential = quadrature(u, [p](double v) { return abs_pow(v, p + 1.0); });

    const double kin = r.kinetic_x + w * r.kinetic_y;
    r.energy = 0.5 * kin + 0.5 * params.gamma * r.trace - r.potential / (p + 1.0);
    r.action = r.energy + 0.5 * params.omega * r.mass;
    r.nehari = nehari_direct(u, params);
    r.scale = r.kinetic_x + w * r.kinetic_y + std::abs(params.omega) * r.mass +
              std::abs(params.gamma) * r.trace + r.potential;

    const double composed = kin + params.omega * r.mass + params.gamma * r.trace - r.potential;
    if (std::abs(r.nehari - composed) > 1e-12 * std::max(r.scale, 1e-300) && r.scale > 0.0) {
        throw Error(ErrorKind::ConsistencyError, "Nehari value drifted from its component sum");
    }
    return r;
}

FunctionalReport eval_all(const Field& u, const ProblemParams& params) {
    require_action_admissible(params);
    return evaluate(u, params);
}

double quadratic_form(const Field& u, const ProblemParams& params) {
    return kinetic_x(u) + params.y_weight() * kinetic_y(u) + params.omega * mass(u) +
           params.gamma * trace_sq(u);
}

Field grad_energy(const Field& u, const ProblemParams& params) {
    const StripGrid& g = u.grid();
    Field out = laplacian_x(u);
    out.axpy(params.y_weight(), laplacian_y_neumann(u));
    out *= -1.0;
    const double e = params.p - 1.0;
    auto vals = out.values();
    auto uv = u.values();
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] -= abs_pow(uv[k], e) * uv[k];
    const int c = g.center();
    for (int j = 0; j < g.ny(); ++j) out(c, j) += params.gamma / g.hx() * u(c, j);
    out.zero_x_boundary();
    return out;
}

Field grad_action(const Field& u, const ProblemParams& params) {
    Field out = grad_energy(u, params);
    out.axpy(params.omega, u);
    out.zero_x_boundary();
    return out;
}

double rayleigh_lambda(const Field& u, double gamma, double h) {
    const double m = mass(u);
    if (!(m > 0.0)) throw Error(ErrorKind::ZeroField, "Rayleigh quotient of the zero field");
    return (kinetic_x(u) + h * kinetic_y(u) + gamma * trace_sq(u)) / m;
}

RayleighMinimum minimize_rayleigh(const StripGrid& grid, double gamma, double h, std::uint64_t seed,
                                  double tol, int max_iters) {
    const double shift = 0.25 * gamma * gamma + 1.0;
    const StripOperator precond(grid, h, shift, gamma);
    auto apply_form = [&](const Field& v) {
        Field av = precond.apply(v);
        av.axpy(-shift, v);
        return av;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Field u(grid);
    for (double& v : u.values()) v = unif(rng);
    u.zero_x_boundary();
    u *= 1.0 / norm_l2(u);

    RayleighMinimum out;
    Field au = apply_form(u);
    double value = inner(au, u);
    for (int it = 1; it <= max_iters; ++it) {
        Field residual = au;
        residual.axpy(-value, u);
        Field d = precond.solve(residual);
        d.axpy(-inner(d, u), u);
        const double dn = norm_l2(d);
        if (!(dn > 0.0)) {
            out.converged = true;
            out.iterations = it;
            break;
        }
        d *= 1.0 / dn;
        const Field ad = apply_form(d);
        const double a11 = value;
        const double a12 = inner(au, d);
        const double a22 = inner(ad, d);
        const double half = 0.5 * (a11 - a22);
        const double lam = 0.5 * (a11 + a22) - std::sqrt(half * half + a12 * a12);
        double c1 = a12;
        double c2 = lam - a11;
        if (std::hypot(lam - a22, a12) > std::hypot(c1, c2)) {
            c1 = lam - a22;
            c2 = a12;
        }
        const double cn = std::hypot(c1, c2);
        c1 /= cn;
        c2 /= cn;
        if (c1 < 0.0) {
            c1 = -c1;
            c2 = -c2;
        }
        Field next = c1 * u;
        next.axpy(c2, d);
        next *= 1.0 / norm_l2(next);
        Field anext = apply_form(next);
        const double next_value = inner(anext, next);
        const double change = std::abs(value - next_value);
        u = std::move(next);
        au = std::move(anext);
        value = next_value;
        out.iterations = it;
        if (change < tol) {
            out.converged = true;
            break;
        }
    }
    out.value = rayleigh_lambda(u, gamma, h);
    out.field = std::move(u);
    return out;
}

PohozaevResiduals pohozaev_residuals(const Field& u, const ProblemParams& params, double omega) {
    const double p = params.p;
    const double w = params.y_weight();
    const double kx = kinetic_x(u);
    const double ky = w * kinetic_y(u);
    const double m = mass(u);
    const double t = trace_sq(u);
    const double pot = quadrature(u, [p](double v) { return abs_pow(v, p + 1.0); });

    PohozaevResiduals r;
    r.abs1 = kx + ky + omega * m - pot + params.gamma * t;
    r.abs2 = kx - ky - omega * m + 2.0 * pot / (p + 1.0);
    const double s1 = kx + ky + std::abs(omega) * m + pot + std::abs(params.gamma) * t;
    const double s2 = kx + ky + std::abs(omega) * m + 2.0 * pot / (p + 1.0);
    r.r1 = s1 > 0.0 ? r.abs1 / s1 : 0.0;
    r.r2 = s2 > 0.0 ? r.abs2 / s2 : 0.0;
    return r;
}

double recover_omega(const Field& u, const ProblemParams& params) {
    const double p = params.p;
    if (p == 5.0) throw Error(ErrorKind::SingularFormula, "frequency recovery is singular at p = 5");
    const FunctionalReport r = evaluate(u, params);
    if (!(r.mass > 0.0)) throw Error(ErrorKind::ZeroField, "frequency recovery needs a nonzero field");
    const double wky = params.y_weight() * r.kinetic_y;
    return (-2.0 * (p + 3.0) * r.energy + (p - 1.0) * params.gamma * r.trace + 2.0 * (p - 1.0) * wky) /
           ((5.0 - p) * r.mass);
}

double multiplier_omega(const Field& u, const ProblemParams& params) {
    const double m = mass(u);
    if (!(m > 0.0)) throw Error(ErrorKind::ZeroField, "multiplier of the zero field");
    return -inner(grad_energy(u, params), u) / m;
}

}  // namespace deltastrip
