// deltastrip command line front end.
//
// Every subcommand assembles a JSON run configuration (from --config when
// given, then the flags on top), validates it strictly and hands it to run().
// The run summary goes to stdout as JSON; errors go to stderr as JSON records.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "deltastrip/config.hpp"

using deltastrip::Json;

namespace {

template <typename T>
void put(Json& doc, const char* section, const char* key, const std::optional<T>& v) {
    if (v) doc[section][key] = *v;
}

struct ProblemFlags {
    std::optional<double> gamma, omega, mass, p, L;
    void add(CLI::App* app, bool with_mass = true, bool with_L = true) {
        app->add_option("--gamma", gamma, "Defect strength");
        app->add_option("--omega", omega, "Frequency");
        if (with_mass) app->add_option("--mass", mass, "Mass (per unit width on the strip)");
        app->add_option("--p", p, "Nonlinearity exponent");
        if (with_L) app->add_option("--L", L, "Strip width");
    }
    void apply(Json& doc) const {
        put(doc, "problem", "gamma", gamma);
        put(doc, "problem", "omega", omega);
        put(doc, "problem", "mass", mass);
        put(doc, "problem", "p", p);
        put(doc, "problem", "L", L);
    }
};

struct GridFlags {
    std::optional<double> X;
    std::optional<int> nx, ny;
    void add(CLI::App* app) {
        app->add_option("--X", X, "Half length of the truncated strip");
        app->add_option("--nx", nx, "Grid points in x (odd)");
        app->add_option("--ny", ny, "Grid points in y");
    }
    void apply(Json& doc) const {
        put(doc, "grid", "X", X);
        put(doc, "grid", "nx", nx);
        put(doc, "grid", "ny", ny);
    }
};

struct MinimizeFlags {
    bool sym = false;
    std::optional<std::string> start;
    std::optional<double> tol, perturb_y;
    std::optional<int> max_iters;
    void add(CLI::App* app) {
        app->add_flag("--sym", sym, "Restrict to fields even in x");
        app->add_option("--start", start, "soliton_extension | gaussian_bump | random | file");
        app->add_option("--tol", tol, "Gradient norm tolerance");
        app->add_option("--max-iters", max_iters, "Iteration cap");
        app->add_option("--perturb-y", perturb_y, "Transverse perturbation amplitude of the start");
    }
    void apply(Json& doc) const {
        if (sym) doc["minimize"]["symmetric_x"] = true;
        put(doc, "minimize", "start", start);
        put(doc, "minimize", "tol_grad", tol);
        put(doc, "minimize", "max_iters", max_iters);
        put(doc, "minimize", "perturb_y", perturb_y);
    }
};

Json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw deltastrip::Error(deltastrip::ErrorKind::IoError, "cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    // Parse once through the strict reader for line/column diagnostics.
    (void)deltastrip::parse_config(text);
    return Json::parse(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground states of the NLS with a delta defect line on a strip"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Seed for randomized starts");
    app.add_option("--jobs", jobs, "Parallel worker runs");
    app.add_option("--out-dir", out_dir, "Output directory");

    std::string command;
    std::optional<std::string> out_file, log_file, snapshot_in;
    ProblemFlags problem;
    GridFlags grid;
    MinimizeFlags minimize;

    auto* soliton = app.add_subcommand("soliton1d", "Line soliton profile, mass and energy");
    problem.add(soliton, true, false);
    grid.add(soliton);
    soliton->add_option("--out", out_file, "Profile CSV");
    soliton->callback([&] { command = "soliton1d"; });

    auto* min = app.add_subcommand("minimize", "Ground state minimization");
    min->require_subcommand(1);
    for (const char* mode : {"action", "energy"}) {
        auto* sub = min->add_subcommand(mode, std::string(mode) + " ground state");
        problem.add(sub);
        grid.add(sub);
        minimize.add(sub);
        sub->add_option("--out", out_file, "Snapshot path (JSON header + .bin)");
        sub->add_option("--log", log_file, "Iteration log CSV");
        sub->add_option("--input", snapshot_in, "Start snapshot for --start file");
        sub->callback([&command, mode] { command = std::string("minimize ") + mode; });
    }

    std::optional<double> xi, eta;
    std::optional<int> k_max;
    bool even_modes = false;
    auto* greens = app.add_subcommand("greens", "Green's function tools");
    greens->require_subcommand(1);
    auto* probe = greens->add_subcommand("probe", "Sample the Green's function on a slice");
    problem.add(probe, false);
    probe->add_option("--xi", xi, "Source x");
    probe->add_option("--eta", eta, "Source y");
    probe->add_option("--k-max", k_max, "Highest transverse mode");
    probe->add_flag("--even-modes-only", even_modes, "Sum only the modes cos(2 k pi y / L)");
    probe->add_option("--out", out_file, "CSV of (x, y, g)");
    probe->callback([&] { command = "greens probe"; });

    std::optional<double> mass_per_length, L_min, L_max;
    std::optional<int> n_L;
    std::optional<std::string> sweep_mode;
    bool no_optimize = false;
    auto* shrink = app.add_subcommand("shrink", "Shrinking-width experiments");
    shrink->require_subcommand(1);
    for (const char* name : {"sweep", "lstar"}) {
        auto* sub = shrink->add_subcommand(name, std::string(name) == "sweep" ? "Warm-started sweep over widths"
                                                                              : "Locate the width where minimizers "
                                                                                "start depending on y");
        sub->add_option("--gamma", problem.gamma, "Defect strength");
        sub->add_option("--p", problem.p, "Nonlinearity exponent");
        sub->add_option("--omega", problem.omega, "Frequency (action mode)");
        sub->add_option("--mass-per-length", mass_per_length, "Mass on the normalized strip");
        sub->add_option("--L-min", L_min, "Smallest width");
        sub->add_option("--L-max", L_max, "Largest width");
        sub->add_option("--n-L", n_L, "Number of widths");
        sub->add_option("--mode", sweep_mode, "mass_energy | nehari_action");
        grid.add(sub);
        minimize.add(sub);
        sub->add_option("--out", out_file, "Sweep CSV");
        sub->callback([&command, name] { command = std::string("shrink ") + name; });
    }
    auto* lss = shrink->add_subcommand("lstarstar", "Upper bound on the y-dependence threshold");
    lss->add_option("--mass", problem.mass, "Mass");
    lss->add_option("--gamma", problem.gamma, "Defect strength");
    lss->add_option("--p", problem.p, "Nonlinearity exponent");
    lss->add_flag("--no-optimize", no_optimize, "Skip the optimized profile search");
    lss->callback([&] { command = "shrink lstarstar"; });
    auto* gs = shrink->add_subcommand("gammastar", "Repulsive threshold from the split gamma = 0 minimizer");
    gs->add_option("--omega", problem.omega, "Frequency");
    gs->add_option("--L", problem.L, "Strip width");
    gs->add_option("--p", problem.p, "Nonlinearity exponent");
    grid.add(gs);
    minimize.add(gs);
    gs->add_option("--out", out_file, "Scan CSV");
    gs->callback([&] { command = "shrink gammastar"; });

    auto* verify = app.add_subcommand("verify", "Diagnostics of a stored field");
    verify->add_option("--snapshot", snapshot_in, "Snapshot header path")->required();
    verify->callback([&] { command = "verify"; });

    CLI11_PARSE(app, argc, argv);

    try {
        Json doc = config_path ? load_config(*config_path) : Json::object();
        doc["command"] = command;
        problem.apply(doc);
        grid.apply(doc);
        minimize.apply(doc);
        put(doc, "problem", "mass", mass_per_length);
        put(doc, "sweep", "L_min", L_min);
        put(doc, "sweep", "L_max", L_max);
        put(doc, "sweep", "n_L", n_L);
        if (L_min || L_max || n_L) doc["sweep"].erase("L_list");
        put(doc, "minimize", "mode", sweep_mode);
        if (no_optimize) doc["sweep"]["optimize_bound"] = false;
        put(doc, "greens", "xi", xi);
        put(doc, "greens", "eta", eta);
        put(doc, "greens", "k_max", k_max);
        if (even_modes) doc["greens"]["even_modes_only"] = true;
        put(doc, "minimize", "seed", seed);
        if (jobs) doc["jobs"] = *jobs;
        put(doc, "outputs", "out_dir", out_dir);
        put(doc, "outputs", "log", log_file);
        put(doc, "outputs", "input", snapshot_in);
        if (out_file) doc["outputs"][command.rfind("minimize", 0) == 0 ? "snapshot" : "csv"] = *out_file;

        const deltastrip::RunConfig cfg = deltastrip::config_from_json(doc);
        const deltastrip::RunReport rep = deltastrip::run(cfg);
        if (rep.exit_code == 1) {
            std::cerr << rep.summary.dump() << '\n';
        } else {
            std::cout << rep.summary.dump(2) << '\n';
        }
        return rep.exit_code;
    } catch (const deltastrip::Error& e) {
        std::cerr << deltastrip::error_record(e).dump() << '\n';
        return 1;
    }
}
