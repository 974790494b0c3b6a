#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "deltastrip/io.hpp"
#include "deltastrip/minimize.hpp"
#include "deltastrip/shrink.hpp"
#include "deltastrip/strip.hpp"

namespace deltastrip {

enum class Command {
    Soliton1D,
    MinimizeAction,
    MinimizeEnergy,
    GreensProbe,
    ShrinkSweep,
    ShrinkLStar,
    ShrinkLStarStar,
    ShrinkGammaStar,
    Verify,
};

std::string_view to_string(Command c);

struct GridSpec {
    double x_extent = 16.0;
    int nx = 257;
    int ny = 9;
};

struct SweepSpec {
    double L_min = 0.0625;
    double L_max = 2.0;
    int n_L = 6;
    /// Explicit widths; overrides the geometric L_min..L_max range when non-empty.
    std::vector<double> L_list;
    double y_threshold = 1e-10;
    int cold_sentinels = 3;
    double perturb_y = 0.05;
    /// Bisection width for shrink lstar.
    double lstar_width = 1e-2;
    bool optimize_bound = true;
};

struct GreensProbeSpec {
    double xi = 0.0;
    double eta = 0.5;
    int k_max = 0;
    bool even_modes_only = false;
    double x_min = -5.0;
    double x_max = 5.0;
    int n_x = 201;
    int n_y = 21;
};

struct OutputSpec {
    std::filesystem::path out_dir = ".";
    std::string snapshot = "field.json";
    std::string log = "log.csv";
    std::string summary = "summary.json";
    std::string csv;
    /// Snapshot read by verify and by minimize with start = file.
    std::string input;
};

struct RunConfig {
    Command command = Command::MinimizeAction;
    ProblemParams problem;
    /// True when problem.omega should be derived from problem.m (soliton1d).
    bool omega_from_mass = false;
    GridSpec grid;
    MinimizeConfig minimize;
    SweepSpec sweep;
    GreensProbeSpec greens;
    OutputSpec outputs;
    int jobs = 1;
};

/**
 * Strict JSON configuration. Top-level keys: command, problem, grid,
 * minimize, sweep, greens, outputs, jobs. Unknown keys, type mismatches and
 * inadmissible parameters raise ValidationError naming the offending field;
 * malformed JSON raises ParseError with line and column.
 */
RunConfig parse_config(std::string_view text);

/// Validates a JSON document already in memory (used by the CLI after
/// applying flag overrides).
RunConfig config_from_json(const Json& doc);

/// Serializes every field parse_config reads.
Json config_to_json(const RunConfig& cfg);

struct RunReport {
    /// 0 converged, 2 not converged, 1 error.
    int exit_code = 0;
    Json summary;
    std::vector<std::filesystem::path> written;
};

/// Dispatches the configured command and writes its outputs under
/// outputs.out_dir. Errors are returned as exit code 1 with a JSON error record
/// as the summary; nothing is thrown.
RunReport run(const RunConfig& cfg);

}  // namespace deltastrip
