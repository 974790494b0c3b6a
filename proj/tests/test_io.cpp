#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "support.hpp"

#include "deltastrip/config.hpp"
#include "deltastrip/io.hpp"
#include "deltastrip/soliton1d.hpp"

using namespace deltastrip;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("deltastrip_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

std::string error_message(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        return std::string(to_string(e.kind())) + ": " + e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("io") {
    TEST_CASE("format_double reads back exactly") {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-1e6, 1e6);
        for (int t = 0; t < 200; ++t) {
            const double v = u(rng) * std::pow(10.0, t % 20 - 10);
            CHECK(same_bits(std::stod(format_double(v)), v));
        }
        CHECK(format_double(0.5) == "0.5");
    }

    TEST_CASE("snapshot round trip reproduces the report to the last bit") {
        const fs::path dir = scratch_dir("snapshot");
        std::mt19937_64 rng(2);
        const StripGrid g = StripGrid::make(16.0, 65, 9);
        const Field u = testing::random_smooth_field(g, rng, true);
        ProblemParams pp;
        pp.p = 2.7;
        pp.gamma = -0.3;
        pp.omega = 1.1;
        pp.L = 0.45;
        pp.m = 0.9;
        const FunctionalReport before = eval_all(u, pp);
        write_snapshot(dir / "u.json", u, pp, Json{{"report", to_json(before)}});
        CHECK(fs::file_size(dir / "u.json.bin") == g.size() * sizeof(double));

        const Snapshot snap = read_snapshot(dir / "u.json");
        CHECK(snap.field.grid() == g);
        CHECK(snap.field.data() == u.data());
        CHECK(same_bits(snap.params.p, pp.p));
        CHECK(same_bits(snap.params.L, pp.L));
        const FunctionalReport after = eval_all(snap.field, snap.params);
        CHECK(same_bits(after.action, before.action));
        CHECK(same_bits(after.energy, before.energy));
        CHECK(same_bits(after.nehari, before.nehari));
        CHECK(snap.meta["report"] == to_json(after));
    }

    TEST_CASE("snapshot errors") {
        const fs::path dir = scratch_dir("snapshot_errors");
        CHECK_THROWS_AS(read_snapshot(dir / "missing.json"), Error);
        std::ofstream(dir / "bad.json") << "{\"format\": \"other\"}";
        CHECK_THROWS_AS(read_snapshot(dir / "bad.json"), Error);
        const StripGrid g = StripGrid::make(4.0, 9, 3);
        write_snapshot(dir / "short.json", Field(g), ProblemParams{});
        fs::resize_file(dir / "short.json.bin", 8);
        CHECK_THROWS_AS(read_snapshot(dir / "short.json"), Error);
    }

    TEST_CASE("csv writers") {
        const fs::path dir = scratch_dir("csv");
        const StripGrid g = StripGrid::make(4.0, 9, 3);
        write_field_csv(dir / "f.csv", Field(g));
        const std::string f = slurp(dir / "f.csv");
        CHECK(f.rfind("x,y,u\n", 0) == 0);
        CHECK(std::count(f.begin(), f.end(), '\n') == 1 + 27);

        std::vector<IterationRecord> hist(3);
        write_iteration_log(dir / "log.csv", hist);
        const std::string l = slurp(dir / "log.csv");
        CHECK(l.rfind("iter,objective,grad_norm,I,M,dy_norm\n", 0) == 0);
        CHECK(std::count(l.begin(), l.end(), '\n') == 4);
    }

    TEST_CASE("minimal valid document") {
        const RunConfig cfg = parse_config(R"({"problem": {"gamma": -1, "omega": 1, "p": 3}})");
        CHECK(cfg.command == Command::MinimizeAction);
        CHECK(cfg.problem.gamma == -1.0);
        CHECK(cfg.problem.p == 3.0);
    }

    TEST_CASE("validation names the field and the rule") {
        const std::string omega = error_message(
            R"({"command": "minimize action", "problem": {"gamma": -2, "omega": 0.9, "p": 3}})");
        CHECK(omega.find("validation_error") != std::string::npos);
        CHECK(omega.find("problem.omega") != std::string::npos);
        CHECK(omega.find("omega <= gamma^2/4") != std::string::npos);

        const std::string p = error_message(
            R"({"command": "minimize energy", "problem": {"gamma": -1, "p": 4, "mass": 1}})");
        CHECK(p.find("problem.p") != std::string::npos);
        CHECK(p.find("1<p<3") != std::string::npos);

        const std::string mode = error_message(
            R"({"command": "shrink sweep", "problem": {"gamma": -1, "p": 4}, "minimize": {"mode": "mass_energy"}})");
        CHECK(mode.find("1<p<3") != std::string::npos);

        CHECK(error_message(R"({"problem": {"omgea": 1}})").find("problem.omgea: unknown key") != std::string::npos);
        CHECK(error_message(R"({"grid": {"nx": 64}})").find("grid.nx") != std::string::npos);
        CHECK(error_message(R"({"grid": {"nx": "65"}})").find("grid.nx") != std::string::npos);
        CHECK(error_message(R"({"verbose": true})").find("verbose") != std::string::npos);
        CHECK(error_message(R"({"command": "minimise action"})").find("command") != std::string::npos);
    }

    TEST_CASE("malformed JSON reports line and column") {
        const std::string msg = error_message("{\n  \"problem\": {\n    \"gamma\": -1,\n  }\n}");
        CHECK(msg.find("parse_error") != std::string::npos);
        CHECK(msg.find("line 4") != std::string::npos);
        CHECK(msg.find("column") != std::string::npos);
    }

    TEST_CASE("config_to_json round trip") {
        const RunConfig cfg = parse_config(R"({"command": "shrink sweep",
            "problem": {"gamma": -1, "p": 2.5, "mass": 1},
            "grid": {"X": 16, "nx": 129, "ny": 5},
            "minimize": {"mode": "mass_energy", "seed": 7, "start": "random"},
            "sweep": {"L_list": [1, 0.5], "cold_sentinels": 0}, "jobs": 2})");
        const Json once = config_to_json(cfg);
        CHECK(config_to_json(config_from_json(once)) == once);
        CHECK(once["sweep"]["L_list"].size() == 2);
    }

    TEST_CASE("minimize energy run writes summary, snapshot and log") {
        const fs::path dir = scratch_dir("run_energy");
        RunConfig cfg = parse_config(R"({"command": "minimize energy",
            "problem": {"gamma": -1, "p": 2.5, "mass": 1, "L": 0.5},
            "grid": {"X": 16, "nx": 65, "ny": 9},
            "minimize": {"start": "random", "seed": 3}})");
        cfg.outputs.out_dir = dir;
        const RunReport rep = run(cfg);
        CHECK(rep.exit_code == 0);
        for (const char* key : {"E", "M", "omega", "dy_norm", "residuals"}) CHECK(rep.summary.contains(key));
        CHECK(fs::exists(dir / "summary.json"));
        CHECK(fs::exists(dir / "field.json"));
        CHECK(fs::exists(dir / "field.json.bin"));
        const std::string log1 = slurp(dir / "log.csv");
        CHECK(!log1.empty());

        const RunReport again = run(cfg);
        CHECK(again.exit_code == 0);
        CHECK(slurp(dir / "log.csv") == log1);

        RunConfig verify;
        verify.command = Command::Verify;
        verify.outputs.out_dir = dir / "verify";
        verify.outputs.input = (dir / "field.json").string();
        const RunReport v = run(verify);
        CHECK(v.exit_code == 0);
        CHECK(v.summary["matches_recorded_report"] == true);
    }

    TEST_CASE("non-converged runs exit with 2, errors with 1") {
        const fs::path dir = scratch_dir("run_codes");
        RunConfig cfg = parse_config(R"({"problem": {"gamma": -1, "omega": 1, "p": 3},
            "grid": {"X": 16, "nx": 65, "ny": 9}, "minimize": {"max_iters": 1, "start": "random"}})");
        cfg.outputs.out_dir = dir;
        CHECK(run(cfg).exit_code == 2);

        RunConfig bad;
        bad.command = Command::Verify;
        bad.outputs.out_dir = dir;
        bad.outputs.input = (dir / "nope.json").string();
        const RunReport r = run(bad);
        CHECK(r.exit_code == 1);
        CHECK(r.summary.contains("error"));
        CHECK(r.summary.contains("message"));
    }

    TEST_CASE("shrink sweep over 8 widths writes 8 rows") {
        const fs::path dir = scratch_dir("run_sweep");
        RunConfig cfg = parse_config(R"({"command": "shrink sweep",
            "problem": {"gamma": -1, "p": 2.5, "mass": 1},
            "grid": {"X": 16, "nx": 65, "ny": 5},
            "sweep": {"L_min": 0.125, "L_max": 2, "n_L": 8, "cold_sentinels": 1}})");
        cfg.outputs.out_dir = dir;
        const RunReport rep = run(cfg);
        CHECK(rep.exit_code == 0);
        std::ifstream in(dir / "sweep.csv");
        std::string header, line;
        std::getline(in, header);
        int rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == 8);
        for (const char* col : {"L", "energy", "dy_norm_scaled", "recovered_omega", "e1d_gap", "h1_gap",
                                "y_independent", "converged"}) {
            CHECK(header.find(col) != std::string::npos);
        }
    }

    TEST_CASE("soliton1d and lstarstar commands") {
        const fs::path dir = scratch_dir("run_misc");
        RunConfig sol = parse_config(R"({"command": "soliton1d", "problem": {"gamma": -1, "p": 3, "mass": 2}})");
        sol.outputs.out_dir = dir;
        const RunReport s = run(sol);
        CHECK(s.exit_code == 0);
        CHECK(s.summary.dump().find("omega") != std::string::npos);

        RunConfig lss = parse_config(R"({"command": "shrink lstarstar", "problem": {"gamma": 0, "p": 3, "mass": 1},
            "sweep": {"optimize_bound": false}})");
        lss.outputs.out_dir = dir;
        const RunReport b = run(lss);
        CHECK(b.exit_code == 0);
        CHECK(b.summary.dump().find("bound_sq_fixed") != std::string::npos);
    }
}
