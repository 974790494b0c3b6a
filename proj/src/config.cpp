#include "deltastrip/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "deltastrip/functionals.hpp"
#include "deltastrip/greens.hpp"
#include "deltastrip/soliton1d.hpp"

namespace deltastrip {

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::Soliton1D, "soliton1d"},
    {Command::MinimizeAction, "minimize action"},
    {Command::MinimizeEnergy, "minimize energy"},
    {Command::GreensProbe, "greens probe"},
    {Command::ShrinkSweep, "shrink sweep"},
    {Command::ShrinkLStar, "shrink lstar"},
    {Command::ShrinkLStarStar, "shrink lstarstar"},
    {Command::ShrinkGammaStar, "shrink gammastar"},
    {Command::Verify, "verify"},
};

constexpr std::pair<StartKind, std::string_view> kStarts[] = {
    {StartKind::SolitonExtension, "soliton_extension"},
    {StartKind::GaussianBump, "gaussian_bump"},
    {StartKind::Random, "random"},
    {StartKind::File, "file"},
};

[[noreturn]] void invalid(const std::string& field, const std::string& rule) {
    throw Error(ErrorKind::ValidationError, field + ": " + rule);
}

// Reads the keys of one JSON object and rejects anything it was not asked for.
class Section {
public:
    Section(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) invalid(path_, "must be an object");
    }

    std::string name(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const char* key) const { return obj_.contains(key); }

    bool read(const char* key, double& dst) {
        if (!take(key)) return false;
        const Json& v = obj_.at(key);
        if (!v.is_number()) invalid(name(key), "must be a number");
        dst = v.get<double>();
        if (!std::isfinite(dst)) invalid(name(key), "must be finite");
        return true;
    }
    bool read(const char* key, int& dst) {
        if (!take(key)) return false;
        const Json& v = obj_.at(key);
        if (!v.is_number_integer()) invalid(name(key), "must be an integer");
        dst = v.get<int>();
        return true;
    }
    bool read(const char* key, std::uint64_t& dst) {
        if (!take(key)) return false;
        const Json& v = obj_.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            invalid(name(key), "must be a nonnegative integer");
        }
        dst = v.get<std::uint64_t>();
        return true;
    }
    bool read(const char* key, bool& dst) {
        if (!take(key)) return false;
        const Json& v = obj_.at(key);
        if (!v.is_boolean()) invalid(name(key), "must be true or false");
        dst = v.get<bool>();
        return true;
    }
    bool read(const char* key, std::string& dst) {
        if (!take(key)) return false;
        const Json& v = obj_.at(key);
        if (!v.is_string()) invalid(name(key), "must be a string");
        dst = v.get<std::string>();
        return true;
    }
    bool read(const char* key, std::vector<double>& dst) {
        if (!take(key)) return false;
        const Json& v = obj_.at(key);
        if (!v.is_array()) invalid(name(key), "must be an array of numbers");
        dst.clear();
        for (const Json& e : v) {
            if (!e.is_number()) invalid(name(key), "must be an array of numbers");
            dst.push_back(e.get<double>());
        }
        return true;
    }
    const Json* child(const char* key) {
        if (!take(key)) return nullptr;
        return &obj_.at(key);
    }

    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!seen_.count(key)) invalid(path_.empty() ? key : path_ + "." + key, "unknown key");
        }
    }

private:
    bool take(const char* key) {
        if (!obj_.contains(key)) return false;
        seen_.insert(key);
        return true;
    }

    const Json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

// Maps a module admissibility message to the parameter it constrains.
std::string field_of_violation(const std::string& msg) {
    if (msg.rfind("omega", 0) == 0) return "problem.omega";
    if (msg.rfind("gamma", 0) == 0) return "problem.gamma";
    if (msg.rfind("L ", 0) == 0) return "problem.L";
    if (msg.rfind("mass", 0) == 0) return "problem.mass";
    return "problem.p";
}

void require(const std::optional<std::string>& violation) {
    if (violation) invalid(field_of_violation(*violation), *violation);
}

void validate(RunConfig& cfg) {
    const ProblemParams& pp = cfg.problem;
    try {
        (void)StripGrid::make(cfg.grid.x_extent, cfg.grid.nx, cfg.grid.ny);
    } catch (const Error& e) {
        const std::string msg = e.what();
        const std::string key = msg.rfind("nx", 0) == 0 ? "nx" : msg.rfind("ny", 0) == 0 ? "ny" : "X";
        invalid("grid." + key, msg);
    }
    const MinimizeConfig& mc = cfg.minimize;
    if (!(mc.step > 0.0)) invalid("minimize.step", "step > 0");
    if (!(mc.tol_grad > 0.0)) invalid("minimize.tol_grad", "tol_grad > 0");
    if (mc.max_iters < 0) invalid("minimize.max_iters", "max_iters >= 0");
    if (cfg.jobs < 1) invalid("jobs", "jobs >= 1");
    if (mc.start == StartKind::File && cfg.outputs.input.empty()) {
        invalid("outputs.input", "start = file needs an input snapshot");
    }

    switch (cfg.command) {
        case Command::MinimizeAction:
            require(action_violation(pp));
            if (pp.gamma > 0.0 && !mc.symmetric_x && !mc.probe_runaway) {
                invalid("minimize.symmetric_x", "gamma>0 requires symmetric_x (no minimizer on the full strip)");
            }
            break;
        case Command::MinimizeEnergy:
            require(energy_violation(pp));
            if (pp.gamma >= 0.0 && !mc.symmetric_x && !mc.probe_runaway) {
                invalid("minimize.symmetric_x", "gamma>=0 requires symmetric_x for mass_energy");
            }
            break;
        case Command::Soliton1D:
            if (!(pp.p > 1.0)) invalid("problem.p", "p must satisfy p > 1");
            if (cfg.omega_from_mass) {
                if (!(pp.m > 0.0)) invalid("problem.mass", "mass m must be positive");
            } else if (!(pp.omega > 0.25 * pp.gamma * pp.gamma) || !(pp.omega > 0.0)) {
                invalid("problem.omega", "omega <= gamma^2/4 (no line soliton)");
            }
            break;
        case Command::GreensProbe:
            require(action_violation(pp));
            if (cfg.greens.n_x < 1 || cfg.greens.n_y < 1) invalid("greens.n_x", "probe counts must be positive");
            if (cfg.greens.k_max < 0) invalid("greens.k_max", "k_max >= 0");
            break;
        case Command::ShrinkSweep:
        case Command::ShrinkLStar:
            if (mc.mode == MinimizeMode::MassEnergy) {
                require(energy_violation(pp));
                if (!(pp.gamma < 0.0)) invalid("problem.gamma", "shrink sweeps in mass_energy mode need gamma<0");
            } else {
                require(action_violation(pp));
            }
            if (cfg.sweep.L_list.empty()) {
                if (!(cfg.sweep.L_min > 0.0) || !(cfg.sweep.L_max >= cfg.sweep.L_min)) {
                    invalid("sweep.L_min", "0 < L_min <= L_max");
                }
                if (cfg.sweep.n_L < 1) invalid("sweep.n_L", "n_L >= 1");
            } else {
                const auto& l = cfg.sweep.L_list;
                if (!std::is_sorted(l.begin(), l.end()) && !std::is_sorted(l.rbegin(), l.rend())) {
                    invalid("sweep.L_list", "widths must be sorted");
                }
                if (*std::min_element(l.begin(), l.end()) <= 0.0) invalid("sweep.L_list", "widths must be positive");
            }
            break;
        case Command::ShrinkLStarStar:
            if (!(pp.p > 1.0)) invalid("problem.p", "p must satisfy p > 1");
            if (!(pp.m > 0.0)) invalid("problem.mass", "mass m must be positive");
            break;
        case Command::ShrinkGammaStar:
            if (!(pp.p > 1.0)) invalid("problem.p", "p must satisfy p > 1");
            if (!(pp.omega > 0.0)) invalid("problem.omega", "gamma* needs omega > 0");
            if (!(pp.L > 0.0)) invalid("problem.L", "L must be a positive width");
            break;
        case Command::Verify:
            if (cfg.outputs.input.empty()) invalid("outputs.input", "verify needs an input snapshot");
            break;
    }
}

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& name, const char* fallback) {
    return cfg.outputs.out_dir / (name.empty() ? std::string(fallback) : name);
}

SweepConfig sweep_config(const RunConfig& cfg) {
    SweepConfig s;
    s.gamma = cfg.problem.gamma;
    s.p = cfg.problem.p;
    s.mass = cfg.problem.m;
    s.omega = cfg.problem.omega;
    s.mode = cfg.minimize.mode;
    s.x_extent = cfg.grid.x_extent;
    s.nx = cfg.grid.nx;
    s.ny = cfg.grid.ny;
    s.tol_grad = cfg.minimize.tol_grad;
    s.max_iters = cfg.minimize.max_iters;
    s.perturb_y = cfg.sweep.perturb_y;
    s.y_threshold = cfg.sweep.y_threshold;
    s.cold_sentinels = cfg.sweep.cold_sentinels;
    s.jobs = cfg.jobs;
    s.seed = cfg.minimize.seed;
    return s;
}

std::vector<double> sweep_widths(const RunConfig& cfg) {
    if (!cfg.sweep.L_list.empty()) return cfg.sweep.L_list;
    return geometric_widths(cfg.sweep.L_min, cfg.sweep.L_max, cfg.sweep.n_L);
}

Json record_json(const SweepRecord& r) {
    Json j{{"L", r.L},
           {"energy", r.energy},
           {"dy_norm_scaled", r.dy_norm_scaled},
           {"recovered_omega", r.recovered_omega},
           {"e1d_gap", r.e1d_gap},
           {"h1_gap", r.h1_gap},
           {"y_independent", r.y_independent},
           {"converged", r.converged}};
    if (r.cold_checked) j["cold_energy"] = r.cold_energy;
    return j;
}

Json minimize_summary(const RunConfig& cfg, const MinimizeResult& r, const ProblemParams& at) {
    const PohozaevResiduals res = pohozaev_residuals(r.field, at, r.recovered_omega);
    Json s;
    s["command"] = std::string(to_string(cfg.command));
    s["converged"] = r.converged;
    s["stop_reason"] = r.stop_reason;
    s["iterations"] = r.iterations;
    s["grad_norm"] = r.grad_norm;
    s["E"] = r.report.energy;
    s["M"] = r.report.mass;
    s["S"] = r.report.action;
    s["I"] = r.report.nehari;
    s["T"] = r.report.trace;
    s["omega"] = r.recovered_omega;
    s["pohozaev_omega"] = r.pohozaev_omega;
    s["dy_norm"] = r.diagnostics.dy_norm;
    s["residuals"] = to_json(res);
    s["diagnostics"] = Json{{"runaway_score", r.diagnostics.runaway_score},
                            {"runaway", r.diagnostics.runaway},
                            {"centroid", r.diagnostics.centroid},
                            {"sym_defect", r.diagnostics.sym_defect},
                            {"rejected_steps", r.diagnostics.rejected_steps}};
    s["report"] = to_json(r.report);
    s["params"] = to_json(cfg.problem);
    s["grid"] = Json{{"X", cfg.grid.x_extent}, {"nx", cfg.grid.nx}, {"ny", cfg.grid.ny}};
    s["seed"] = cfg.minimize.seed;
    return s;
}

RunReport run_minimize(const RunConfig& cfg) {
    RunReport rep;
    const StripGrid grid = StripGrid::make(cfg.grid.x_extent, cfg.grid.nx, cfg.grid.ny);
    MinimizeConfig mc = cfg.minimize;
    mc.mode = cfg.command == Command::MinimizeEnergy ? MinimizeMode::MassEnergy : MinimizeMode::NehariAction;
    if (mc.start == StartKind::File) mc.start_field = read_snapshot(cfg.outputs.input).field;
    const MinimizeResult r = mc.mode == MinimizeMode::MassEnergy ? minimize_energy(mc, cfg.problem, grid)
                                                                 : minimize_action(mc, cfg.problem, grid);
    ProblemParams at = cfg.problem;
    at.omega = r.recovered_omega;
    rep.summary = minimize_summary(cfg, r, at);

    const auto snap = out_path(cfg, cfg.outputs.snapshot, "field.json");
    write_snapshot(snap, r.field, at,
                   Json{{"report", to_json(r.report)}, {"converged", r.converged}, {"iterations", r.iterations}});
    const auto log = out_path(cfg, cfg.outputs.log, "log.csv");
    write_iteration_log(log, r.history);
    rep.written = {snap, log};
    if (!cfg.outputs.csv.empty()) {
        write_field_csv(out_path(cfg, cfg.outputs.csv, ""), r.field);
        rep.written.push_back(out_path(cfg, cfg.outputs.csv, ""));
    }
    rep.exit_code = r.converged ? 0 : 2;
    return rep;
}

RunReport run_soliton(const RunConfig& cfg) {
    RunReport rep;
    const ProblemParams& pp = cfg.problem;
    const double omega = cfg.omega_from_mass ? omega_of_mass(pp.m, pp.gamma, pp.p) : pp.omega;
    const Soliton1D s = Soliton1D::make(omega, pp.gamma, pp.p);
    rep.summary = Json{{"command", "soliton1d"}, {"omega", omega},           {"gamma", pp.gamma},
                       {"p", pp.p},             {"phi0", s.value_at(0.0)}, {"peak", s.peak_value()},
                       {"mass", mass_of(s)},    {"energy", energy_1d(s)},  {"potential", potential_of(s)},
                       {"rate", s.rate()},      {"offset", s.offset()}};
    const auto csv = out_path(cfg, cfg.outputs.csv, "soliton1d.csv");
    {
        const StripGrid g = StripGrid::make(cfg.grid.x_extent, cfg.grid.nx, 2);
        std::ofstream out(csv);
        if (!out) throw Error(ErrorKind::IoError, "cannot open " + csv.string());
        out << "x,phi\n";
        for (int i = 0; i < g.nx(); ++i) out << format_double(g.x(i)) << ',' << format_double(s.value_at(g.x(i))) << '\n';
    }
    rep.written = {csv};
    return rep;
}

RunReport run_greens(const RunConfig& cfg) {
    RunReport rep;
    const GreensProbeSpec& gp = cfg.greens;
    const GreensSpec spec =
        GreensSpec::make(cfg.problem.omega, cfg.problem.gamma, cfg.problem.L, gp.k_max, gp.even_modes_only);
    const auto csv = out_path(cfg, cfg.outputs.csv, "greens.csv");
    std::ofstream out(csv);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + csv.string());
    out << "x,y,g,tail_bound\n";
    int points = 0;
    for (int a = 0; a < gp.n_x; ++a) {
        const double x = gp.n_x == 1 ? gp.x_min : gp.x_min + (gp.x_max - gp.x_min) * a / (gp.n_x - 1);
        for (int b = 0; b < gp.n_y; ++b) {
            const double y = gp.n_y == 1 ? 0.0 : cfg.problem.L * b / (gp.n_y - 1);
            if (x == gp.xi && y == gp.eta) continue;
            const GreensValue v = greens_eval(x, y, gp.xi, gp.eta, spec);
            out << format_double(x) << ',' << format_double(y) << ',' << format_double(v.value) << ','
                << format_double(v.tail_bound) << '\n';
            ++points;
        }
    }
    rep.summary = Json{{"command", "greens probe"}, {"k_max", spec.effective_k_max()},
                       {"even_modes_only", gp.even_modes_only}, {"points", points},
                       {"xi", gp.xi}, {"eta", gp.eta}};
    rep.written = {csv};
    return rep;
}

RunReport run_sweep(const RunConfig& cfg) {
    RunReport rep;
    const SweepResult res = sweep_L(sweep_config(cfg), sweep_widths(cfg));
    const auto csv = out_path(cfg, cfg.outputs.csv, "sweep.csv");
    write_sweep_csv(csv, res.records);
    Json records = Json::array();
    bool all = true;
    for (const SweepRecord& r : res.records) {
        records.push_back(record_json(r));
        all = all && r.converged;
    }
    rep.summary = Json{{"command", std::string(to_string(cfg.command))},
                       {"e1d", res.e1d},
                       {"e1d_analytic", res.e1d_analytic},
                       {"all_converged", all},
                       {"records", records}};
    rep.written = {csv};
    rep.exit_code = all ? 0 : 2;
    if (cfg.command == Command::ShrinkLStar) {
        const StripGrid grid = StripGrid::make(cfg.grid.x_extent, cfg.grid.nx, cfg.grid.ny);
        MinimizeConfig mc = cfg.minimize;
        mc.perturb_y = cfg.sweep.perturb_y;
        const LStarEstimate est =
            estimate_L_star(res.records, width_classifier(cfg.problem, grid, mc, cfg.sweep.y_threshold),
                            cfg.sweep.lstar_width);
        rep.summary["L_star"] = Json{{"estimate", est.estimate}, {"lo", est.lo}, {"hi", est.hi},
                                     {"evaluations", est.evaluations}};
    }
    return rep;
}

RunReport run_lstarstar(const RunConfig& cfg) {
    RunReport rep;
    const LStarStarBound b = l_star_star_bound(cfg.problem.m, cfg.problem.gamma, cfg.problem.p, cfg.sweep.optimize_bound);
    rep.summary = to_json(b);
    rep.summary["command"] = "shrink lstarstar";
    rep.summary["mass"] = cfg.problem.m;
    rep.summary["gamma"] = cfg.problem.gamma;
    rep.summary["p"] = cfg.problem.p;
    return rep;
}

RunReport run_gammastar(const RunConfig& cfg) {
    RunReport rep;
    const StripGrid grid = StripGrid::make(cfg.grid.x_extent, cfg.grid.nx, cfg.grid.ny);
    const GammaStarResult g = gamma_star(cfg.problem.omega, cfg.problem.L, cfg.problem.p, grid, cfg.minimize);
    rep.summary = Json{{"command", "shrink gammastar"},
                       {"gamma_star", g.gamma_star},
                       {"sigma_star", g.sigma_star},
                       {"I_minus", g.I_minus},
                       {"I_plus", g.I_plus},
                       {"trace", g.trace},
                       {"identity_residual", g.identity_residual},
                       {"s_omega0", g.s_omega0},
                       {"psi_converged", g.psi_converged}};
    const auto csv = out_path(cfg, cfg.outputs.csv, "gammastar_scan.csv");
    std::ofstream out(csv);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + csv.string());
    out << "sigma,I_minus\n";
    for (std::size_t k = 0; k < g.scan_sigma.size(); ++k) {
        out << format_double(g.scan_sigma[k]) << ',' << format_double(g.scan_I_minus[k]) << '\n';
    }
    rep.written = {csv};
    rep.exit_code = g.psi_converged ? 0 : 2;
    return rep;
}

RunReport run_verify(const RunConfig& cfg) {
    RunReport rep;
    const Snapshot snap = read_snapshot(cfg.outputs.input);
    const FunctionalReport report = evaluate(snap.field, snap.params);
    Json s{{"command", "verify"}, {"input", cfg.outputs.input}, {"report", to_json(report)},
           {"params", to_json(snap.params)}};
    s["residuals"] = to_json(pohozaev_residuals(snap.field, snap.params, snap.params.omega));
    s["shape"] = to_json(positivity_and_rearrangement_check(snap.field));
    try {
        s["pohozaev_omega"] = recover_omega(snap.field, snap.params);
    } catch (const Error& e) {
        s["pohozaev_omega"] = nullptr;
    }
    if (!action_violation(snap.params)) {
        s["green_discrepancy"] = verify_solution_via_green(snap.field, snap.params);
    }
    if (snap.meta.contains("report")) {
        s["matches_recorded_report"] = snap.meta["report"] == to_json(report);
    }
    rep.summary = s;
    return rep;
}

}  // namespace

std::string_view to_string(Command c) {
    for (const auto& [cmd, name] : kCommands) {
        if (cmd == c) return name;
    }
    return "unknown";
}

RunConfig config_from_json(const Json& doc) {
    RunConfig cfg;
    Section top(doc, "");

    std::string command = "minimize action";
    top.read("command", command);
    std::string mode;
    bool command_known = false;
    for (const auto& [cmd, name] : kCommands) {
        if (name == command) {
            cfg.command = cmd;
            command_known = true;
        }
    }
    if (!command_known) invalid("command", "unknown command '" + command + "'");

    if (const Json* p = top.child("problem")) {
        Section s(*p, "problem");
        s.read("p", cfg.problem.p);
        s.read("gamma", cfg.problem.gamma);
        const bool has_omega = s.read("omega", cfg.problem.omega);
        s.read("L", cfg.problem.L);
        const bool has_mass = s.read("mass", cfg.problem.m);
        cfg.omega_from_mass = cfg.command == Command::Soliton1D && has_mass && !has_omega;
        s.finish();
    }
    if (const Json* g = top.child("grid")) {
        Section s(*g, "grid");
        s.read("X", cfg.grid.x_extent);
        s.read("nx", cfg.grid.nx);
        s.read("ny", cfg.grid.ny);
        s.finish();
    }
    if (cfg.command == Command::MinimizeEnergy) cfg.minimize.mode = MinimizeMode::MassEnergy;
    if (const Json* m = top.child("minimize")) {
        Section s(*m, "minimize");
        MinimizeConfig& mc = cfg.minimize;
        if (s.read("mode", mode)) {
            if (mode == "nehari_action") {
                mc.mode = MinimizeMode::NehariAction;
            } else if (mode == "mass_energy") {
                mc.mode = MinimizeMode::MassEnergy;
            } else {
                invalid("minimize.mode", "must be nehari_action or mass_energy");
            }
            if ((cfg.command == Command::MinimizeAction && mc.mode != MinimizeMode::NehariAction) ||
                (cfg.command == Command::MinimizeEnergy && mc.mode != MinimizeMode::MassEnergy)) {
                invalid("minimize.mode", "conflicts with command '" + command + "'");
            }
        }
        s.read("symmetric_x", mc.symmetric_x);
        s.read("step", mc.step);
        s.read("max_iters", mc.max_iters);
        s.read("tol_grad", mc.tol_grad);
        s.read("seed", mc.seed);
        std::string start;
        if (s.read("start", start)) {
            bool known = false;
            for (const auto& [kind, name] : kStarts) {
                if (name == start) {
                    mc.start = kind;
                    known = true;
                }
            }
            if (!known) invalid("minimize.start", "must be soliton_extension, gaussian_bump, random or file");
        }
        s.read("bump_center", mc.bump_center);
        s.read("bump_width", mc.bump_width);
        s.read("perturb_y", mc.perturb_y);
        s.read("y_constant", mc.y_constant);
        s.read("recenter_every", mc.recenter_every);
        s.read("probe_runaway", mc.probe_runaway);
        s.finish();
    }
    if (const Json* w = top.child("sweep")) {
        Section s(*w, "sweep");
        s.read("L_min", cfg.sweep.L_min);
        s.read("L_max", cfg.sweep.L_max);
        s.read("n_L", cfg.sweep.n_L);
        s.read("L_list", cfg.sweep.L_list);
        s.read("y_threshold", cfg.sweep.y_threshold);
        s.read("cold_sentinels", cfg.sweep.cold_sentinels);
        s.read("perturb_y", cfg.sweep.perturb_y);
        s.read("lstar_width", cfg.sweep.lstar_width);
        s.read("optimize_bound", cfg.sweep.optimize_bound);
        s.finish();
    }
    if (const Json* g = top.child("greens")) {
        Section s(*g, "greens");
        s.read("xi", cfg.greens.xi);
        s.read("eta", cfg.greens.eta);
        s.read("k_max", cfg.greens.k_max);
        s.read("even_modes_only", cfg.greens.even_modes_only);
        s.read("x_min", cfg.greens.x_min);
        s.read("x_max", cfg.greens.x_max);
        s.read("n_x", cfg.greens.n_x);
        s.read("n_y", cfg.greens.n_y);
        s.finish();
    }
    if (const Json* o = top.child("outputs")) {
        Section s(*o, "outputs");
        std::string dir;
        if (s.read("out_dir", dir)) cfg.outputs.out_dir = dir;
        s.read("snapshot", cfg.outputs.snapshot);
        s.read("log", cfg.outputs.log);
        s.read("summary", cfg.outputs.summary);
        s.read("csv", cfg.outputs.csv);
        s.read("input", cfg.outputs.input);
        s.finish();
    }
    top.read("jobs", cfg.jobs);
    top.finish();

    validate(cfg);
    return cfg;
}

RunConfig parse_config(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, "config is not valid JSON at " + line_column(text, e.byte) + ": " +
                                               e.what());
    }
    return config_from_json(doc);
}

Json config_to_json(const RunConfig& cfg) {
    const MinimizeConfig& mc = cfg.minimize;
    std::string start;
    for (const auto& [kind, name] : kStarts) {
        if (kind == mc.start) start = name;
    }
    Json problem{{"p", cfg.problem.p}, {"gamma", cfg.problem.gamma}, {"L", cfg.problem.L}, {"mass", cfg.problem.m}};
    if (!cfg.omega_from_mass) problem["omega"] = cfg.problem.omega;
    return Json{
        {"command", std::string(to_string(cfg.command))},
        {"problem", problem},
        {"grid", {{"X", cfg.grid.x_extent}, {"nx", cfg.grid.nx}, {"ny", cfg.grid.ny}}},
        {"minimize",
         {{"mode", mc.mode == MinimizeMode::MassEnergy ? "mass_energy" : "nehari_action"},
          {"symmetric_x", mc.symmetric_x},
          {"step", mc.step},
          {"max_iters", mc.max_iters},
          {"tol_grad", mc.tol_grad},
          {"seed", mc.seed},
          {"start", start},
          {"bump_center", mc.bump_center},
          {"bump_width", mc.bump_width},
          {"perturb_y", mc.perturb_y},
          {"y_constant", mc.y_constant},
          {"recenter_every", mc.recenter_every},
          {"probe_runaway", mc.probe_runaway}}},
        {"sweep",
         {{"L_min", cfg.sweep.L_min},
          {"L_max", cfg.sweep.L_max},
          {"n_L", cfg.sweep.n_L},
          {"L_list", cfg.sweep.L_list},
          {"y_threshold", cfg.sweep.y_threshold},
          {"cold_sentinels", cfg.sweep.cold_sentinels},
          {"perturb_y", cfg.sweep.perturb_y},
          {"lstar_width", cfg.sweep.lstar_width},
          {"optimize_bound", cfg.sweep.optimize_bound}}},
        {"greens",
         {{"xi", cfg.greens.xi},
          {"eta", cfg.greens.eta},
          {"k_max", cfg.greens.k_max},
          {"even_modes_only", cfg.greens.even_modes_only},
          {"x_min", cfg.greens.x_min},
          {"x_max", cfg.greens.x_max},
          {"n_x", cfg.greens.n_x},
          {"n_y", cfg.greens.n_y}}},
        {"outputs",
         {{"out_dir", cfg.outputs.out_dir.string()},
          {"snapshot", cfg.outputs.snapshot},
          {"log", cfg.outputs.log},
          {"summary", cfg.outputs.summary},
          {"csv", cfg.outputs.csv},
          {"input", cfg.outputs.input}}},
        {"jobs", cfg.jobs}};
}

RunReport run(const RunConfig& cfg) {
    RunReport rep;
    try {
        std::error_code ec;
        std::filesystem::create_directories(cfg.outputs.out_dir, ec);
        if (ec) throw Error(ErrorKind::IoError, "cannot create output directory " + cfg.outputs.out_dir.string());
        switch (cfg.command) {
            case Command::Soliton1D: rep = run_soliton(cfg); break;
            case Command::MinimizeAction:
            case Command::MinimizeEnergy: rep = run_minimize(cfg); break;
            case Command::GreensProbe: rep = run_greens(cfg); break;
            case Command::ShrinkSweep:
            case Command::ShrinkLStar: rep = run_sweep(cfg); break;
            case Command::ShrinkLStarStar: rep = run_lstarstar(cfg); break;
            case Command::ShrinkGammaStar: rep = run_gammastar(cfg); break;
            case Command::Verify: rep = run_verify(cfg); break;
        }
        const auto summary = out_path(cfg, cfg.outputs.summary, "summary.json");
        write_json(summary, rep.summary);
        rep.written.push_back(summary);
    } catch (const Error& e) {
        rep = RunReport{};
        rep.exit_code = 1;
        rep.summary = error_record(e);
    }
    return rep;
}

}  // namespace deltastrip
