#include "deltastrip/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace deltastrip {

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    return out;
}

std::filesystem::path sidecar(const std::filesystem::path& path) {
    std::filesystem::path bin = path;
    bin += ".bin";
    return bin;
}

template <typename T>
T field_of(const Json& doc, const char* key) {
    if (!doc.contains(key)) throw Error(ErrorKind::ParseError, std::string("snapshot header lacks '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorKind::ParseError, std::string("snapshot header field '") + key + "' has the wrong type");
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_snapshot(const std::filesystem::path& path, const Field& field, const ProblemParams& params,
                    const Json& meta) {
    static_assert(std::endian::native == std::endian::little, "snapshot sidecars are little-endian");
    const StripGrid& g = field.grid();
    Json header;
    header["format"] = "deltastrip-field";
    header["version"] = 1;
    header["grid"] = to_json(g);
    header["params"] = to_json(params);
    header["data"] = sidecar(path).filename().string();
    header["encoding"] = "float64-le row-major, index i*ny + j";
    header["meta"] = meta;
    {
        std::ofstream out = open_out(path);
        out << header.dump(2) << '\n';
    }
    std::ofstream bin = open_out(sidecar(path), std::ios::out | std::ios::binary);
    const auto& data = field.data();
    bin.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!bin) throw Error(ErrorKind::IoError, "failed writing " + sidecar(path).string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open snapshot " + path.string());
    Json header;
    try {
        header = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, "snapshot header " + path.string() + ": " + e.what());
    }
    if (field_of<std::string>(header, "format") != "deltastrip-field") {
        throw Error(ErrorKind::ParseError, "not a deltastrip field snapshot: " + path.string());
    }
    const Json grid = field_of<Json>(header, "grid");
    const StripGrid g =
        StripGrid::make(field_of<double>(grid, "X"), field_of<int>(grid, "nx"), field_of<int>(grid, "ny"));
    const Json pj = field_of<Json>(header, "params");
    Snapshot snap;
    snap.params.p = field_of<double>(pj, "p");
    snap.params.gamma = field_of<double>(pj, "gamma");
    snap.params.omega = field_of<double>(pj, "omega");
    snap.params.L = field_of<double>(pj, "L");
    snap.params.m = field_of<double>(pj, "mass");
    snap.meta = header.contains("meta") ? header["meta"] : Json::object();

    const std::filesystem::path bin_path = path.parent_path() / field_of<std::string>(header, "data");
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw Error(ErrorKind::IoError, "cannot open snapshot data " + bin_path.string());
    std::vector<double> values(g.size());
    bin.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (bin.gcount() != static_cast<std::streamsize>(values.size() * sizeof(double))) {
        throw Error(ErrorKind::ParseError, "snapshot data " + bin_path.string() + " is truncated");
    }
    snap.field = Field(g, std::move(values));
    return snap;
}

void write_field_csv(const std::filesystem::path& path, const Field& field) {
    std::ofstream out = open_out(path);
    const StripGrid& g = field.grid();
    out << "x,y,u\n";
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            out << format_double(g.x(i)) << ',' << format_double(g.y(j)) << ',' << format_double(field(i, j))
                << '\n';
        }
    }
}

void write_iteration_log(const std::filesystem::path& path, const std::vector<IterationRecord>& history) {
    std::ofstream out = open_out(path);
    out << "iter,objective,grad_norm,I,M,dy_norm\n";
    for (const IterationRecord& r : history) {
        out << r.iter << ',' << format_double(r.objective) << ',' << format_double(r.grad_norm) << ','
            << format_double(r.nehari) << ',' << format_double(r.mass) << ',' << format_double(r.dy_norm) << '\n';
    }
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRecord>& records) {
    std::ofstream out = open_out(path);
    out << "L,energy,dy_norm_scaled,recovered_omega,e1d_gap,h1_gap,y_independent,converged,"
           "action,pohozaev_omega,e1d_analytic_gap,grad_norm,iterations,cold_energy\n";
    for (const SweepRecord& r : records) {
        out << format_double(r.L) << ',' << format_double(r.energy) << ',' << format_double(r.dy_norm_scaled) << ','
            << format_double(r.recovered_omega) << ',' << format_double(r.e1d_gap) << ','
            << format_double(r.h1_gap) << ',' << (r.y_independent ? 1 : 0) << ',' << (r.converged ? 1 : 0) << ','
            << format_double(r.action) << ',' << format_double(r.pohozaev_omega) << ','
            << format_double(r.e1d_analytic_gap) << ',' << format_double(r.grad_norm) << ',' << r.iterations << ','
            << (r.cold_checked ? format_double(r.cold_energy) : std::string()) << '\n';
    }
}

void write_json(const std::filesystem::path& path, const Json& doc) {
    std::ofstream out = open_out(path);
    out << doc.dump(2) << '\n';
}

Json to_json(const ProblemParams& p) {
    return Json{{"p", p.p}, {"gamma", p.gamma}, {"omega", p.omega}, {"L", p.L}, {"mass", p.m}};
}

Json to_json(const FunctionalReport& r) {
    return Json{{"action", r.action},       {"nehari", r.nehari},       {"energy", r.energy},
                {"mass", r.mass},           {"trace", r.trace},         {"kinetic_x", r.kinetic_x},
                {"kinetic_y", r.kinetic_y}, {"potential", r.potential}, {"scale", r.scale}};
}

Json to_json(const StripGrid& g) { return Json{{"X", g.x_extent()}, {"nx", g.nx()}, {"ny", g.ny()}}; }

Json to_json(const PohozaevResiduals& r) {
    return Json{{"r1", r.r1}, {"r2", r.r2}, {"abs1", r.abs1}, {"abs2", r.abs2}};
}

Json to_json(const ShapeViolations& v) {
    return Json{{"positivity", v.positivity}, {"symmetry", v.symmetry}, {"monotone_x", v.monotone_x},
                {"monotone_y", v.monotone_y}, {"max_abs", v.max_abs}};
}

Json to_json(const LStarStarBound& b) {
    return Json{{"omega_m", b.omega_m},
                {"potential", b.potential},
                {"quotient_fixed", b.quotient_fixed},
                {"quotient_optimized", b.quotient_optimized},
                {"bound_sq_fixed", b.bound_fixed},
                {"bound_sq_optimized", b.bound_optimized},
                {"bound_fixed", b.sqrt_bound_fixed},
                {"bound_optimized", b.sqrt_bound_optimized}};
}

Json error_record(const Error& e) {
    return Json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
}

}  // namespace deltastrip
