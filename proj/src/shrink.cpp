#include "deltastrip/shrink.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "deltastrip/functionals.hpp"
#include "deltastrip/soliton1d.hpp"

namespace deltastrip {

namespace {

constexpr double kPi = std::numbers::pi;

MinimizeConfig sweep_minimize_config(const SweepConfig& cfg) {
    MinimizeConfig m;
    m.mode = cfg.mode;
    m.tol_grad = cfg.tol_grad;
    m.max_iters = cfg.max_iters;
    m.perturb_y = cfg.perturb_y;
    m.seed = cfg.seed;
    return m;
}

ProblemParams sweep_params(const SweepConfig& cfg, double L) {
    ProblemParams p;
    p.p = cfg.p;
    p.gamma = cfg.gamma;
    p.omega = cfg.omega;
    p.m = cfg.mass;
    p.L = L;
    return p;
}

MinimizeResult run_one(const MinimizeConfig& mc, const ProblemParams& params, const StripGrid& grid) {
    return mc.mode == MinimizeMode::MassEnergy ? minimize_energy(mc, params, grid)
                                               : minimize_action(mc, params, grid);
}

double objective_of(const MinimizeResult& r, MinimizeMode mode) {
    return mode == MinimizeMode::MassEnergy ? r.report.energy : r.report.action;
}

double h1_distance(const Field& a, const Field& b, double y_weight) {
    const Field d = a - b;
    return std::sqrt(mass(d) + kinetic_x(d) + y_weight * kinetic_y(d));
}

// Quotient int |f'|^2 / (int |f|^{p+1} - 1) for f = g/||g||, g = 1 + sum b_k cos(k pi y).
struct QuotientData {
    double p;
    int n_cells;
};

double series_quotient(const gsl_vector* b, void* raw) {
    const auto* data = static_cast<const QuotientData*>(raw);
    const int n = data->n_cells;
    const double h = 1.0 / n;
    double l2 = 0.0, grad = 0.0, pow_sum = 0.0;
    std::vector<double> f(n + 1), df(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double y = i * h;
        double v = 1.0, dv = 0.0;
        for (std::size_t k = 0; k < b->size; ++k) {
            const double bk = gsl_vector_get(b, k);
            const double a = (k + 1.0) * kPi;
            v += bk * std::cos(a * y);
            dv -= bk * a * std::sin(a * y);
        }
        f[i] = v;
        df[i] = dv;
        const double w = (i == 0 || i == n) ? 0.5 * h : h;
        l2 += w * v * v;
        grad += w * dv * dv;
    }
    if (!(l2 > 0.0)) return 1e300;
    const double scale = 1.0 / std::sqrt(l2);
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 * h : h;
        pow_sum += w * std::pow(std::abs(f[i] * scale), data->p + 1.0);
    }
    const double denom = pow_sum - 1.0;
    if (!(denom > 1e-14)) return 1e300;
    return grad * scale * scale / denom;
}

double optimized_quotient(double p) {
    constexpr std::size_t modes = 8;
    QuotientData data{p, 2048};
    gsl_multimin_function fn;
    fn.n = modes;
    fn.f = &series_quotient;
    fn.params = &data;

    gsl_vector* x = gsl_vector_alloc(modes);
    gsl_vector* step = gsl_vector_alloc(modes);
    gsl_vector_set_all(x, 0.0);
    gsl_vector_set(x, 0, 0.5);
    gsl_vector_set(x, 1, 0.2);
    gsl_vector_set_all(step, 0.1);

    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, modes);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    int status = GSL_CONTINUE;
    for (int iter = 0; iter < 20000 && status == GSL_CONTINUE; ++iter) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-7);
    }
    const double best = gsl_multimin_fminimizer_minimum(s);
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x);
    return best;
}

}  // namespace

std::vector<double> geometric_widths(double L_min, double L_max, int n) {
    if (!(L_min > 0.0) || !(L_max >= L_min) || n < 1) {
        throw Error(ErrorKind::ValidationError, "widths need 0 < L_min <= L_max and n >= 1");
    }
    std::vector<double> out;
    for (int k = 0; k < n; ++k) {
        const double t = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
        out.push_back(L_min * std::pow(L_max / L_min, t));
    }
    return out;
}

SweepResult sweep_L(const SweepConfig& cfg, const std::vector<double>& L_list) {
    if (L_list.empty()) throw Error(ErrorKind::ValidationError, "sweep needs at least one width");
    const bool ascending = std::is_sorted(L_list.begin(), L_list.end());
    const bool descending = std::is_sorted(L_list.rbegin(), L_list.rend());
    if (!ascending && !descending) throw Error(ErrorKind::ValidationError, "sweep widths must be sorted");
    for (double L : L_list) {
        if (!(L > 0.0) || !std::isfinite(L)) throw Error(ErrorKind::ValidationError, "sweep widths must be positive");
    }
    if (cfg.mode == MinimizeMode::MassEnergy && !(cfg.gamma < 0.0)) {
        throw Error(ErrorKind::InadmissibleParams, "energy sweeps need gamma < 0");
    }
    const StripGrid grid = StripGrid::make(cfg.x_extent, cfg.nx, cfg.ny);
    const MinimizeConfig base = sweep_minimize_config(cfg);

    SweepResult out;
    {
        MinimizeConfig ref = base;
        ref.y_constant = true;
        ref.perturb_y = 0.0;
        const MinimizeResult r = run_one(ref, sweep_params(cfg, 1.0), grid);
        out.e1d = objective_of(r, cfg.mode);
        out.reference = r.field;
        if (cfg.mode == MinimizeMode::MassEnergy) {
            out.e1d_analytic = energy_1d(Soliton1D::make(omega_of_mass(cfg.mass, cfg.gamma, cfg.p), cfg.gamma, cfg.p));
        } else {
            const Soliton1D s = Soliton1D::make(cfg.omega, cfg.gamma, cfg.p);
            out.e1d_analytic = energy_1d(s) + 0.5 * cfg.omega * mass_of(s);
        }
    }

    std::optional<Field> previous;
    for (double L : L_list) {
        MinimizeConfig mc = base;
        if (previous) {
            mc.start = StartKind::File;
            mc.start_field = previous;
        }
        const ProblemParams params = sweep_params(cfg, L);
        const MinimizeResult r = run_one(mc, params, grid);
        SweepRecord rec;
        rec.L = L;
        rec.energy = r.report.energy;
        rec.action = r.report.action;
        rec.dy_norm_scaled = params.y_weight() * r.report.kinetic_y;
        rec.recovered_omega = r.recovered_omega;
        rec.pohozaev_omega = r.pohozaev_omega;
        rec.e1d_gap = objective_of(r, cfg.mode) - out.e1d;
        rec.e1d_analytic_gap = objective_of(r, cfg.mode) - out.e1d_analytic;
        rec.h1_gap = h1_distance(r.field, out.reference, params.y_weight());
        rec.grad_norm = r.grad_norm;
        rec.iterations = r.iterations;
        rec.y_independent = rec.dy_norm_scaled < cfg.y_threshold * r.report.mass;
        rec.converged = r.converged;
        rec.cold_energy = std::numeric_limits<double>::quiet_NaN();
        out.records.push_back(rec);
        previous = r.field;
    }

    // Cold-start reruns at the sentinel widths.
    std::vector<std::size_t> sentinels;
    const std::size_t n = L_list.size();
    for (std::size_t idx : {std::size_t{0}, n / 2, n - 1}) {
        if (static_cast<int>(sentinels.size()) >= cfg.cold_sentinels) break;
        if (std::find(sentinels.begin(), sentinels.end(), idx) == sentinels.end()) sentinels.push_back(idx);
    }
    const std::size_t jobs = static_cast<std::size_t>(std::max(1, cfg.jobs));
    for (std::size_t start = 0; start < sentinels.size(); start += jobs) {
        std::vector<std::pair<std::size_t, std::future<double>>> batch;
        for (std::size_t k = start; k < std::min(sentinels.size(), start + jobs); ++k) {
            const std::size_t idx = sentinels[k];
            MinimizeConfig mc = base;
            mc.start = StartKind::Random;
            mc.seed = cfg.seed + idx;
            const ProblemParams params = sweep_params(cfg, L_list[idx]);
            const MinimizeMode mode = cfg.mode;
            batch.emplace_back(idx, std::async(std::launch::async, [mc, params, grid, mode] {
                                   try {
                                       return objective_of(run_one(mc, params, grid), mode);
                                   } catch (const Error&) {
                                       return std::numeric_limits<double>::quiet_NaN();
                                   }
                               }));
        }
        for (auto& [idx, fut] : batch) {
            out.records[idx].cold_energy = fut.get();
            out.records[idx].cold_checked = true;
        }
    }
    return out;
}

LStarEstimate estimate_L_star(const std::vector<SweepRecord>& records, const WidthClassifier& classify,
                              double width) {
    std::vector<SweepRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const SweepRecord& a, const SweepRecord& b) { return a.L < b.L; });
    LStarEstimate out;
    bool found = false;
    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        if (sorted[k].y_independent && !sorted[k + 1].y_independent) {
            out.lo = sorted[k].L;
            out.hi = sorted[k + 1].L;
            found = true;
            break;
        }
    }
    if (!found) {
        throw Error(ErrorKind::BracketNotFound, "sweep has no switch from y-independent to y-dependent minimizers");
    }
    if (!classify) throw Error(ErrorKind::ValidationError, "L* refinement needs a classifier");
    while (out.hi - out.lo >= width) {
        const double mid = 0.5 * (out.lo + out.hi);
        ++out.evaluations;
        if (classify(mid)) {
            out.lo = mid;
        } else {
            out.hi = mid;
        }
    }
    out.estimate = 0.5 * (out.lo + out.hi);
    return out;
}

WidthClassifier width_classifier(const ProblemParams& base, const StripGrid& grid,
                                 const MinimizeConfig& cfg, double threshold) {
    return [=](double L) {
        ProblemParams params = base;
        params.L = L;
        const MinimizeResult r = run_one(cfg, params, grid);
        return params.y_weight() * r.report.kinetic_y < threshold * r.report.mass;
    };
}

double fixed_profile_quotient(double p) {
    // f = sqrt(2)|cos(2 pi y)|: int f'^2 = 4 pi^2 and the mean of |cos|^q is
    // Gamma((q+1)/2) / (sqrt(pi) Gamma(q/2 + 1)).
    const double q = p + 1.0;
    const double mean = std::exp(std::lgamma(0.5 * (q + 1.0)) - std::lgamma(0.5 * q + 1.0)) / std::sqrt(kPi);
    return 4.0 * kPi * kPi / (std::pow(2.0, 0.5 * q) * mean - 1.0);
}

LStarStarBound l_star_star_bound(double m, double gamma, double p, bool optimize) {
    LStarStarBound out;
    out.omega_m = omega_of_mass(m, gamma, p);
    out.potential = potential_of(Soliton1D::make(out.omega_m, gamma, p));
    out.quotient_fixed = fixed_profile_quotient(p);
    out.quotient_optimized = out.quotient_fixed;
    if (optimize) out.quotient_optimized = std::min(out.quotient_fixed, optimized_quotient(p));
    const double prefactor = 0.5 * (p + 1.0) * m / out.potential;
    out.bound_fixed = prefactor * out.quotient_fixed;
    out.bound_optimized = prefactor * out.quotient_optimized;
    out.sqrt_bound_fixed = std::sqrt(out.bound_fixed);
    out.sqrt_bound_optimized = std::sqrt(out.bound_optimized);
    return out;
}

Field mirrored_shift(const Field& psi, int s) {
    const StripGrid& g = psi.grid();
    const int pad = std::abs(s);
    if (pad > g.center()) throw Error(ErrorKind::ValidationError, "shift exceeds half the grid");
    const StripGrid ext = StripGrid::make(g.x_extent() + pad * g.hx(), g.nx() + 2 * pad, g.ny());
    Field out(ext);
    const int c_ext = ext.center();
    for (int i = 0; i < ext.nx(); ++i) {
        const int src = g.center() + std::abs(i - c_ext) + s;
        if (src < 0 || src >= g.nx()) continue;
        for (int j = 0; j < g.ny(); ++j) out(i, j) = psi(src, j);
    }
    out.zero_x_boundary();
    return out;
}

GammaStarResult gamma_star(double omega, double L, double p, const StripGrid& grid, const MinimizeConfig& cfg) {
    if (!(omega > 0.0)) throw Error(ErrorKind::InadmissibleParams, "gamma* needs omega > 0");
    ProblemParams params;
    params.p = p;
    params.gamma = 0.0;
    params.omega = omega;
    params.L = L;

    MinimizeConfig mc = cfg;
    mc.mode = MinimizeMode::NehariAction;
    mc.symmetric_x = true;
    const MinimizeResult base = minimize_action(mc, params, grid);

    GammaStarResult out;
    out.psi = base.field;
    out.psi_converged = base.converged;
    out.s_omega0 = base.report.action;
    const FunctionalReport psi_report = evaluate(out.psi, params);
    const double I_psi = psi_report.nehari;
    const double scale = psi_report.scale;

    std::map<int, double> memo;
    auto I_minus = [&](int s) {
        auto it = memo.find(s);
        if (it != memo.end()) return it->second;
        const double im = evaluate(mirrored_shift(out.psi, -s), params).nehari;
        const double ip = evaluate(mirrored_shift(out.psi, s), params).nehari;
        out.identity_residual = std::max(out.identity_residual, std::abs(im + ip - 2.0 * I_psi) / scale);
        memo.emplace(s, im);
        return im;
    };

    const int s_max = static_cast<int>(std::floor(0.5 * grid.x_extent() / grid.hx() + 1e-9));
    if (s_max < 1) throw Error(ErrorKind::InvalidGrid, "grid too coarse to shift psi");
    const int stride = std::max(1, s_max / 32);
    int best = stride;
    for (int s = stride; s <= s_max; s += stride) {
        if (I_minus(s) < I_minus(best)) best = s;
    }
    int a = std::max(1, best - stride);
    int b = std::min(s_max, best + stride);
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    while (b - a > 3) {
        const int c1 = b - static_cast<int>(std::lround(inv_phi * (b - a)));
        const int c2 = a + static_cast<int>(std::lround(inv_phi * (b - a)));
        if (I_minus(c1) <= I_minus(c2)) {
            b = c2;
        } else {
            a = c1;
        }
    }
    for (int s = a; s <= b; ++s) {
        if (I_minus(s) < I_minus(best)) best = s;
    }

    for (const auto& [s, im] : memo) {
        out.scan_sigma.push_back(s * grid.hx());
        out.scan_I_minus.push_back(im);
    }
    out.shift_nodes = best;
    out.sigma_star = best * grid.hx();
    const Field split = mirrored_shift(out.psi, -best);
    out.I_minus = I_minus(best);
    out.I_plus = evaluate(mirrored_shift(out.psi, best), params).nehari;
    out.trace = trace_sq(split);
    if (!(out.trace > 0.0)) throw Error(ErrorKind::ConsistencyError, "psi vanishes on the defect line");
    out.gamma_star = -out.I_minus / out.trace;
    if (!(out.gamma_star > 0.0) || !(out.gamma_star < 2.0 * std::sqrt(omega))) {
        std::ostringstream os;
        os << "gamma* = " << out.gamma_star << " is outside (0, 2 sqrt(omega)) = (0, " << 2.0 * std::sqrt(omega)
           << ")";
        throw Error(ErrorKind::ConsistencyError, os.str());
    }
    return out;
}

}  // namespace deltastrip
