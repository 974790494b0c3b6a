#include "deltastrip/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "deltastrip/linear_operator.hpp"
#include "deltastrip/soliton1d.hpp"

namespace deltastrip {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 30;
constexpr double kRoundoff = 64.0 * std::numeric_limits<double>::epsilon();

void clamp_nonnegative(Field& u) {
    for (double& v : u.values()) v = std::max(v, 0.0);
}

Field y_average(const Field& u) {
    const StripGrid& g = u.grid();
    Field out(g);
    for (int i = 0; i < g.nx(); ++i) {
        double avg = 0.0;
        for (int j = 0; j < g.ny(); ++j) avg += g.wy(j) * u(i, j);
        for (int j = 0; j < g.ny(); ++j) out(i, j) = avg;
    }
    return out;
}

// Shifts u by s nodes in x (positive s moves mass to the right), zero fill.
Field shift_nodes(const Field& u, int s) {
    const StripGrid& g = u.grid();
    Field out(g);
    for (int i = 0; i < g.nx(); ++i) {
        const int src = i - s;
        if (src < 0 || src >= g.nx()) continue;
        for (int j = 0; j < g.ny(); ++j) out(i, j) = u(src, j);
    }
    out.zero_x_boundary();
    return out;
}

double potential(const Field& u, double p) {
    return quadrature(u, [p](double v) { return std::pow(std::abs(v), p + 1.0); });
}

double sym_defect(const Field& u) {
    const StripGrid& g = u.grid();
    double worst = 0.0;
    for (int i = 0; i < g.center(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            worst = std::max(worst, std::abs(u(i, j) - u(g.nx() - 1 - i, j)));
        }
    }
    return worst;
}

// Projections shared by every iterate: sign, symmetry, y-independence.
void admissible_shape(Field& u, const MinimizeConfig& cfg) {
    clamp_nonnegative(u);
    if (cfg.symmetric_x) u = enforce_symmetry(u);
    if (cfg.y_constant) u = y_average(u);
    u.zero_x_boundary();
}

void validate_config(const MinimizeConfig& cfg) {
    if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) {
        throw Error(ErrorKind::ValidationError, "step must be positive");
    }
    if (!(cfg.tol_grad > 0.0) || !std::isfinite(cfg.tol_grad)) {
        throw Error(ErrorKind::ValidationError, "tol_grad must be positive");
    }
    if (cfg.max_iters < 0) throw Error(ErrorKind::ValidationError, "max_iters must be nonnegative");
}

MinimizeDiagnostics diagnose(const Field& u) {
    MinimizeDiagnostics d;
    const double m = mass(u);
    d.centroid = m > 0.0 ? centroid_x(u) : 0.0;
    d.runaway_score = std::abs(d.centroid) / (0.5 * u.grid().x_extent());
    d.runaway = d.runaway_score > 1.0 || trace_sq(u) < 1e-8 * m;
    d.dy_norm = std::sqrt(kinetic_y(u));
    d.sym_defect = sym_defect(u);
    return d;
}

bool wants_recentering(const MinimizeConfig& cfg, const ProblemParams& params, int iter) {
    return params.gamma == 0.0 && !cfg.symmetric_x && cfg.recenter_every > 0 && iter > 0 &&
           iter % cfg.recenter_every == 0;
}

Field recenter(const Field& u) {
    const int s = -static_cast<int>(std::lround(centroid_x(u) / u.grid().hx()));
    return s == 0 ? u : shift_nodes(u, s);
}

bool accept_step(double f_old, double f_new, double slope, double tau, double fscale) {
    if (!std::isfinite(f_new)) return false;
    if (f_new <= f_old - kArmijo * tau * slope) return true;
    // Once the predicted decrease is below the rounding level of f the
    // sufficient-decrease test cannot resolve progress; accept non-increase
    // up to that level instead.
    return tau * slope <= kRoundoff * fscale && f_new <= f_old + kRoundoff * fscale;
}

void finish(MinimizeResult& out, const Field& u, const ProblemParams& params) {
    out.field = u;
    out.report = evaluate(u, params);
    try {
        out.pohozaev_omega = recover_omega(u, params);
    } catch (const Error&) {
        out.pohozaev_omega = std::numeric_limits<double>::quiet_NaN();
    }
    const int rejected = out.diagnostics.rejected_steps;
    out.diagnostics = diagnose(u);
    out.diagnostics.rejected_steps = rejected;
}

}  // namespace

double nehari_scale(const Field& u, const ProblemParams& params) {
    const double q = quadratic_form(u, params);
    const double pot = potential(u, params.p);
    if (!(pot > 0.0)) throw Error(ErrorKind::ProjectionUndefined, "Nehari projection of the zero field");
    if (!(q > 0.0)) {
        throw Error(ErrorKind::ProjectionUndefined, "Nehari projection needs a positive quadratic part");
    }
    return std::pow(q / pot, 1.0 / (params.p - 1.0));
}

Field nehari_project(const Field& u, const ProblemParams& params) {
    return nehari_scale(u, params) * u;
}

Field enforce_symmetry(const Field& u) {
    const StripGrid& g = u.grid();
    Field out(g);
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) out(i, j) = 0.5 * (u(i, j) + u(g.nx() - 1 - i, j));
    }
    return out;
}

Field mass_project(const Field& u, double m) {
    const double current = mass(u);
    if (!(current > 0.0)) throw Error(ErrorKind::ProjectionUndefined, "mass projection of the zero field");
    return std::sqrt(m / current) * u;
}

Field initial_field(const MinimizeConfig& cfg, const ProblemParams& params, const StripGrid& grid) {
    Field u(grid);
    auto gaussian = [&] {
        const double c = cfg.bump_center;
        const double w = cfg.bump_width;
        return Field::from_function(grid, [&](double x, double) { return std::exp(-(x - c) * (x - c) / (w * w)); });
    };
    switch (cfg.start) {
        case StartKind::SolitonExtension: {
            double omega = params.omega;
            bool ok = true;
            if (cfg.mode == MinimizeMode::MassEnergy) {
                try {
                    omega = omega_of_mass(params.m, params.gamma, params.p);
                } catch (const Error&) {
                    ok = false;
                }
            }
            if (ok && omega > 0.25 * params.gamma * params.gamma && omega > 0.0) {
                u = extend_to_strip(Soliton1D::make(omega, params.gamma, params.p), grid);
            } else {
                u = gaussian();
            }
            break;
        }
        case StartKind::GaussianBump:
            u = gaussian();
            break;
        case StartKind::Random: {
            std::mt19937_64 rng(cfg.seed);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            for (double& v : u.values()) v = unif(rng);
            break;
        }
        case StartKind::File:
            if (!cfg.start_field) throw Error(ErrorKind::ValidationError, "start=file needs a start field");
            if (!(cfg.start_field->grid() == grid)) {
                throw Error(ErrorKind::InvalidGrid, "start field grid differs from the run grid");
            }
            u = *cfg.start_field;
            break;
    }
    if (cfg.perturb_y != 0.0) {
        for (int i = 0; i < grid.nx(); ++i) {
            for (int j = 0; j < grid.ny(); ++j) {
                u(i, j) *= 1.0 + cfg.perturb_y * std::cos(std::numbers::pi * grid.y(j));
            }
        }
    }
    u.zero_x_boundary();
    return u;
}

MinimizeResult minimize_action(const MinimizeConfig& cfg, const ProblemParams& params, const StripGrid& grid) {
    validate_config(cfg);
    require_action_admissible(params);
    if (params.gamma > 0.0 && !cfg.symmetric_x && !cfg.probe_runaway) {
        throw Error(ErrorKind::InadmissibleParams,
                    "gamma > 0 has no action minimizer on the full strip; set symmetric_x");
    }
    const double j_factor = (params.p - 1.0) / (2.0 * (params.p + 1.0));
    const StripOperator precond(grid, params.y_weight(), params.omega, params.gamma);

    Field u = initial_field(cfg, params, grid);
    admissible_shape(u, cfg);
    u = nehari_project(u, params);

    MinimizeResult out;
    out.recovered_omega = params.omega;
    double objective = j_factor * potential(u, params.p);

    for (int iter = 0;; ++iter) {
        if (wants_recentering(cfg, params, iter)) {
            u = nehari_project(recenter(u), params);
            objective = j_factor * potential(u, params.p);
        }
        const Field g = grad_action(u, params);
        const double gnorm = norm_l2(g);
        const FunctionalReport rep = evaluate(u, params);

        IterationRecord rec;
        rec.iter = iter;
        rec.objective = objective;
        rec.grad_norm = gnorm;
        rec.nehari = rep.nehari;
        rec.mass = rep.mass;
        rec.dy_norm = std::sqrt(rep.kinetic_y);
        out.grad_norm = gnorm;
        out.iterations = iter;

        if (gnorm < cfg.tol_grad) {
            out.history.push_back(rec);
            if (cfg.on_iteration) cfg.on_iteration(rec);
            out.converged = true;
            out.stop_reason = "gradient below tolerance";
            break;
        }
        const MinimizeDiagnostics diag = diagnose(u);
        if (diag.runaway) {
            out.history.push_back(rec);
            if (cfg.on_iteration) cfg.on_iteration(rec);
            out.stop_reason = "run-away";
            break;
        }
        if (iter >= cfg.max_iters) {
            out.history.push_back(rec);
            if (cfg.on_iteration) cfg.on_iteration(rec);
            out.stop_reason = "max_iters reached";
            break;
        }

        const Field d = precond.solve(g);
        const double slope = inner(g, d);
        double tau = cfg.step;
        bool accepted = false;
        for (int k = 0; k <= kMaxHalvings; ++k, tau *= 0.5) {
            Field trial = u;
            trial.axpy(-tau, d);
            admissible_shape(trial, cfg);
            double f_new = std::numeric_limits<double>::infinity();
            try {
                trial = nehari_project(trial, params);
                f_new = j_factor * potential(trial, params.p);
            } catch (const Error&) {
            }
            if (accept_step(objective, f_new, slope, tau, rep.scale)) {
                u = std::move(trial);
                objective = f_new;
                accepted = true;
                break;
            }
            ++out.diagnostics.rejected_steps;
        }
        rec.step = accepted ? tau : 0.0;
        out.history.push_back(rec);
        if (cfg.on_iteration) cfg.on_iteration(rec);
        if (!accepted) {
            out.stop_reason = "line search exhausted";
            break;
        }
    }
    finish(out, u, params);
    return out;
}

MinimizeResult minimize_energy(const MinimizeConfig& cfg, const ProblemParams& params, const StripGrid& grid) {
    validate_config(cfg);
    require_energy_admissible(params);
    if (params.gamma >= 0.0 && !cfg.symmetric_x && !cfg.probe_runaway) {
        throw Error(ErrorKind::InadmissibleParams,
                    "energy minimization on the full strip needs gamma < 0; set symmetric_x");
    }
    const double m = params.m;
    const double c_floor = omega_floor(params.gamma) + 0.05;

    Field u = initial_field(cfg, params, grid);
    admissible_shape(u, cfg);
    u = mass_project(u, m);

    MinimizeResult out;
    double objective = evaluate(u, params).energy;

    for (int iter = 0;; ++iter) {
        if (wants_recentering(cfg, params, iter)) {
            u = mass_project(recenter(u), m);
            objective = evaluate(u, params).energy;
        }
        const Field g = grad_energy(u, params);
        const double mu = mass(u);
        const double omega_t = -inner(g, u) / mu;
        Field r = g;
        r.axpy(omega_t, u);
        const double gnorm = norm_l2(r);
        const FunctionalReport rep = evaluate(u, params);

        IterationRecord rec;
        rec.iter = iter;
        rec.objective = objective;
        rec.grad_norm = gnorm;
        rec.nehari = rep.nehari + omega_t * rep.mass - params.omega * rep.mass;
        rec.mass = rep.mass;
        rec.dy_norm = std::sqrt(rep.kinetic_y);
        out.grad_norm = gnorm;
        out.iterations = iter;
        out.recovered_omega = omega_t;

        auto log_and_stop = [&](const char* reason) {
            out.history.push_back(rec);
            if (cfg.on_iteration) cfg.on_iteration(rec);
            out.stop_reason = reason;
        };
        if (gnorm < cfg.tol_grad) {
            out.converged = true;
            log_and_stop("gradient below tolerance");
            break;
        }
        if (diagnose(u).runaway) {
            log_and_stop("run-away");
            break;
        }
        if (iter >= cfg.max_iters) {
            log_and_stop("max_iters reached");
            break;
        }

        const StripOperator precond(grid, params.y_weight(), std::max(omega_t, c_floor), params.gamma);
        const Field a = precond.solve(g);
        const Field b = precond.solve(u);
        Field d = a;
        d.axpy(-inner(u, a) / inner(u, b), b);
        const double slope = inner(g, d);
        const double fscale = rep.kinetic_x + params.y_weight() * rep.kinetic_y +
                              std::abs(params.gamma) * rep.trace + rep.potential;

        double tau = cfg.step;
        bool accepted = false;
        for (int k = 0; k <= kMaxHalvings; ++k, tau *= 0.5) {
            Field trial = u;
            trial.axpy(-tau, d);
            admissible_shape(trial, cfg);
            double f_new = std::numeric_limits<double>::infinity();
            try {
                trial = mass_project(trial, m);
                f_new = evaluate(trial, params).energy;
            } catch (const Error&) {
            }
            if (accept_step(objective, f_new, slope, tau, fscale)) {
                u = std::move(trial);
                objective = f_new;
                accepted = true;
                break;
            }
            ++out.diagnostics.rejected_steps;
        }
        rec.step = accepted ? tau : 0.0;
        out.history.push_back(rec);
        if (cfg.on_iteration) cfg.on_iteration(rec);
        if (!accepted) {
            std::ostringstream os;
            os << "energy did not decrease after " << kMaxHalvings << " halvings at iteration " << iter
               << " (gradient norm " << gnorm << ")";
            throw Error(ErrorKind::StepFailure, os.str());
        }
    }
    ProblemParams at_multiplier = params;
    at_multiplier.omega = out.recovered_omega;
    finish(out, u, at_multiplier);
    return out;
}

ShapeViolations positivity_and_rearrangement_check(const Field& u) {
    const StripGrid& g = u.grid();
    ShapeViolations v;
    v.max_abs = u.max_abs();
    v.symmetry = sym_defect(u);
    const int c = g.center();
    double up = 0.0;
    double down = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            if (!g.is_boundary_x(i)) v.positivity = std::max(v.positivity, -u(i, j));
            if (i > c) v.monotone_x = std::max(v.monotone_x, u(i, j) - u(i - 1, j));
            if (i < c) v.monotone_x = std::max(v.monotone_x, u(i, j) - u(i + 1, j));
            if (j + 1 < g.ny()) {
                const double diff = u(i, j + 1) - u(i, j);
                up = std::max(up, -diff);
                down = std::max(down, diff);
            }
        }
    }
    v.monotone_y = std::min(up, down);
    return v;
}

double decay_slope(const Field& u, int j, double x_min, double x_max, double floor) {
    const StripGrid& g = u.grid();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (int i = g.center(); i < g.nx(); ++i) {
        const double x = g.x(i);
        const double v = u(i, j);
        if (x < x_min || x > x_max || !(v > floor)) continue;
        const double ly = std::log(v);
        sx += x;
        sy += ly;
        sxx += x * x;
        sxy += x * ly;
        ++n;
    }
    if (n < 2) throw Error(ErrorKind::ValidationError, "decay window holds fewer than two samples");
    const double det = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / det;
}

}  // namespace deltastrip
