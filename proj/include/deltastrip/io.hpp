#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "deltastrip/error.hpp"
#include "deltastrip/functionals.hpp"
#include "deltastrip/minimize.hpp"
#include "deltastrip/shrink.hpp"
#include "deltastrip/strip.hpp"

namespace deltastrip {

using Json = nlohmann::ordered_json;

struct Snapshot {
    Field field;
    ProblemParams params;
    /// Everything else recorded in the header (report, run metadata).
    Json meta;
};

/**
 * Writes a field as a JSON header at path plus a raw sidecar path + ".bin"
 * holding nx*ny little-endian float64 values in row-major (x-major) order.
 */
void write_snapshot(const std::filesystem::path& path, const Field& field, const ProblemParams& params,
                    const Json& meta = Json::object());

Snapshot read_snapshot(const std::filesystem::path& path);

/// Columns x, y, u with y in the normalized coordinate.
void write_field_csv(const std::filesystem::path& path, const Field& field);

/// Columns iter, objective, grad_norm, I, M, dy_norm.
void write_iteration_log(const std::filesystem::path& path, const std::vector<IterationRecord>& history);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRecord>& records);

void write_json(const std::filesystem::path& path, const Json& doc);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

Json to_json(const ProblemParams& params);
Json to_json(const FunctionalReport& report);
Json to_json(const StripGrid& grid);
Json to_json(const PohozaevResiduals& residuals);
Json to_json(const ShapeViolations& v);
Json to_json(const LStarStarBound& b);
Json error_record(const Error& e);

}  // namespace deltastrip
