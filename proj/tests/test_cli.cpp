#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "circlewave/config.hpp"
#include "circlewave/errors.hpp"
#include "circlewave/io.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using circlewave::read_text_file;

#ifndef CIRCLEWAVE_BIN
#error "CIRCLEWAVE_BIN must point at the CLI binary"
#endif
#ifndef CIRCLEWAVE_CONFIG_DIR
#error "CIRCLEWAVE_CONFIG_DIR must point at the bundled configs"
#endif

namespace {

const fs::path bin{CIRCLEWAVE_BIN};
const fs::path cfg_dir{CIRCLEWAVE_CONFIG_DIR};

struct RunResult {
    int exit_code;
    fs::path out;
};

RunResult run(const std::string& subcommand, const std::string& config,
              const std::string& tag, const std::string& extra = "") {
    const fs::path out = fs::temp_directory_path() / ("circlewave_cli_" + tag);
    fs::remove_all(out);
    fs::create_directories(out);
    std::ostringstream cmd;
    cmd << bin.string() << ' ' << subcommand << " --config " << (cfg_dir / config).string()
        << " --out " << out.string() << ' ' << extra << " > " << (out / "stdout.txt").string()
        << " 2> " << (out / "stderr.txt").string();
    const int raw = std::system(cmd.str().c_str());
    return {WEXITSTATUS(raw), out};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("simulate: heat config reproduces the decayed mode") {
    const RunResult r = run("simulate", "heat.json", "heat");
    REQUIRE(r.exit_code == 0);
    const auto rows = read_csv(r.out / "trajectory.csv");
    REQUIRE(!rows.empty());
    const auto& last = rows.back();
    REQUIRE(last.size() == 129);
    CHECK(std::stod(last[0]) == doctest::Approx(1.0));
    for (int j = 0; j < 128; ++j) {
        const double x = 2 * std::numbers::pi * j / 128;
        CHECK(std::abs(std::stod(last[static_cast<std::size_t>(j + 1)]) -
                       std::exp(-1.0) * std::sin(x)) < 1e-6);
    }
    CHECK(fs::exists(r.out / "trajectory.meta.json"));
    CHECK(fs::exists(r.out / "zeros.csv"));
    // phase series of the even flow: zero drift
    const auto phase = read_csv(r.out / "phase.csv");
    REQUIRE(!phase.empty());
    for (const auto& row : phase) CHECK(std::abs(std::stod(row[1])) < 1e-6);
}

TEST_CASE("classify: rotating wave config") {
    const RunResult r = run("classify", "rotating_wave.json", "wave");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(read_text_file(r.out / "report.json"));
    CHECK(rep.at("verdict") == "rotating_wave");
    CHECK(std::abs(rep.at("wave_speed").get<double>() + 0.4) < 0.004);
}

TEST_CASE("classify: periodic symmetric config is a periodic point") {
    const RunResult r = run("classify", "periodic_symmetric.json", "periodic");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(read_text_file(r.out / "report.json"));
    CHECK(rep.at("verdict") == "periodic_point");
    CHECK(rep.at("residuals").at("fixed_point").get<double>() <= 1e-6);
}

TEST_CASE("simulate consumes a trajectory CSV as initial data") {
    const RunResult first = run("simulate", "heat.json", "chain1");
    REQUIRE(first.exit_code == 0);
    // continue from the dumped final state
    const fs::path chained = first.out / "chained.json";
    json cfg = {{"f", "0"},
                {"solver", {{"N", 128}, {"dt", 0.001}, {"t_end", 1.0}, {"record_stride", 1000}}},
                {"initial", {{"file", (first.out / "trajectory.csv").string()}}}};
    circlewave::write_text_file(chained, cfg.dump(2));
    const fs::path out2 = first.out / "stage2";
    fs::create_directories(out2);
    const std::string cmd = bin.string() + " simulate --config " + chained.string() + " --out " +
                            out2.string() + " > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    const auto rows = read_csv(out2 / "trajectory.csv");
    const auto& last = rows.back();
    for (int j = 0; j < 128; ++j) {
        const double x = 2 * std::numbers::pi * j / 128;
        // two chained unit-time heat flows: e^{-2} sin x
        CHECK(std::abs(std::stod(last[static_cast<std::size_t>(j + 1)]) -
                       std::exp(-2.0) * std::sin(x)) < 2e-6);
    }
}

TEST_CASE("pipeline: simulate a wave, classify from its CSV") {
    const fs::path out = fs::temp_directory_path() / "circlewave_cli_pipeline";
    fs::remove_all(out);
    fs::create_directories(out);
    json stage1 = {{"f", "2*u - u^3 + 0.4*p"},
                   {"solver",
                    {{"N", 128}, {"dt", 0.001}, {"t_end", 25.0}, {"record_stride", 500}}},
                   {"initial", {{"expression", "1.1*sin(x)"}}}};
    circlewave::write_text_file(out / "stage1.json", stage1.dump(2));
    std::string cmd = bin.string() + " simulate --config " + (out / "stage1.json").string() +
                      " --out " + out.string() + " > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);

    json stage2 = stage1;
    stage2["solver"]["t_end"] = 20.0;
    stage2["solver"]["record_stride"] = 200;
    stage2["initial"] = {{"file", (out / "trajectory.csv").string()}};
    circlewave::write_text_file(out / "stage2.json", stage2.dump(2));
    cmd = bin.string() + " classify --config " + (out / "stage2.json").string() + " --out " +
          out.string() + " > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    const json rep = json::parse(read_text_file(out / "report.json"));
    CHECK(rep.at("verdict") == "rotating_wave");
    CHECK(std::abs(rep.at("wave_speed").get<double>() + 0.4) < 0.004);
}

TEST_CASE("config validation rejects conflicting initial-data sources") {
    using circlewave::ExperimentConfig;
    const std::string dual =
        R"cfg({"f": "u", "initial": {"expression": "sin(x)", "file": "x.csv"}})cfg";
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(dual), circlewave::ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text("not json"), circlewave::ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"f": "u", "T": -1.0})"),
                    circlewave::ConfigError);
}

TEST_CASE("spectrum: constant state b = 0.5") {
    const RunResult r = run("spectrum", "spectrum_half.json", "spectrum");
    REQUIRE(r.exit_code == 0);
    const auto rows = read_csv(r.out / "spectrum.csv");
    REQUIRE(rows.size() == 5);
    CHECK(std::abs(std::stod(rows[0][1]) - 0.5) < 0.05);
    const double want[5] = {0.5, -0.5, -0.5, -3.5, -3.5};
    for (int i = 0; i < 5; ++i) CHECK(std::abs(std::stod(rows[static_cast<std::size_t>(i)][1]) - want[i]) < 0.05);
}

TEST_CASE("subshift demo table") {
    const RunResult r = run("subshift", "subshift.json", "subshift");
    REQUIRE(r.exit_code == 0);
    const auto rows = read_csv(r.out / "subshift_demo.txt");
    // header + 8 rows + 2 comment lines
    int data_rows = 0;
    for (const auto& row : rows) {
        if (row[0] == "n" || row[0].rfind("#", 0) == 0) continue;
        ++data_rows;
        const int n = std::stoi(row[0]);
        CHECK(std::stod(row[1]) == std::ldexp(1.0, -n));
        CHECK(std::stod(row[2]) == std::ldexp(1.0, -n));
    }
    CHECK(data_rows == 8);
}

TEST_CASE("sweep over lambda") {
    const RunResult r = run("sweep", "sweep_lambda.json", "sweep", "--jobs 2");
    REQUIRE(r.exit_code == 0);
    const auto rows = read_csv(r.out / "aggregate.csv");
    REQUIRE(rows.size() == 4); // header + 3 points
    double prev_amplitude = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::string verdict = rows[i][3];
        CHECK((verdict == "homogeneous_equilibrium" || verdict == "rotating_wave"));
        CHECK(rows[i].back() == "ok");
        const double amplitude = std::stod(rows[i][6]);
        CHECK(amplitude > prev_amplitude); // wave amplitude grows with lambda
        prev_amplitude = amplitude;
        CHECK(fs::exists(r.out / ("point_00" + std::to_string(i - 1)) / "report.json"));
    }
}

TEST_CASE("sweep isolates per-point failures") {
    const fs::path out = fs::temp_directory_path() / "circlewave_cli_sweepfail";
    fs::remove_all(out);
    fs::create_directories(out);
    // u' = u^3 - lam*u from 0.5: decays for lam > 0.25, blows up for tiny lam
    json cfg = {{"f", "u^3 - lam*u"},
                {"params", {{"lam", 1.0}}},
                {"solver",
                 {{"N", 32}, {"dt", 0.002}, {"t_end", 40.0}, {"record_stride", 200},
                  {"blowup_threshold", 1e4}}},
                {"initial", {{"expression", "0.5"}}},
                {"sweep", {{"param", "lam"}, {"values", {0.01, 1.0}}}}};
    const fs::path cfg_path = out / "sweep.json";
    circlewave::write_text_file(cfg_path, cfg.dump(2));
    const std::string cmd = bin.string() + " sweep --config " + cfg_path.string() + " --out " +
                            out.string() + " --jobs 1 > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0); // per-point isolation: sweep succeeds
    const auto rows = read_csv(out / "aggregate.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].back() != "ok"); // lam = 0.01 blew up
    CHECK(fs::exists(out / "point_000" / "error.txt"));
    CHECK(rows[2].back() == "ok"); // lam = 1.0 decayed to the zero state
    CHECK(rows[2][3] == "homogeneous_equilibrium");
    CHECK(fs::exists(out / "point_001" / "report.json"));
}

TEST_CASE("parse error exits with code 2 and a diagnostic") {
    const RunResult r = run("simulate", "parse_error.json", "parse_error");
    CHECK(r.exit_code == 2);
    const std::string err = read_text_file(r.out / "stderr.txt");
    CHECK(err.find("offset 3") != std::string::npos);
    CHECK_FALSE(fs::exists(r.out / "trajectory.csv")); // no partial CSV
}

TEST_CASE("blow-up exits with code 3") {
    const RunResult r = run("simulate", "blowup.json", "blowup");
    CHECK(r.exit_code == 3);
    CHECK_FALSE(fs::exists(r.out / "trajectory.csv"));
}

TEST_CASE("evaluation domain errors exit with code 4") {
    const RunResult r = run("simulate", "numerical_failure.json", "numfail");
    CHECK(r.exit_code == 4);
    CHECK_FALSE(fs::exists(r.out / "trajectory.csv"));
}

TEST_CASE("missing config exits with code 2") {
    const RunResult r = run("simulate", "no_such_config.json", "missing");
    CHECK(r.exit_code == 2);
}

TEST_CASE("determinism: identical configs give byte-identical CSVs") {
    const RunResult a = run("simulate", "heat.json", "det_a");
    const RunResult b = run("simulate", "heat.json", "det_b");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(read_text_file(a.out / "trajectory.csv") == read_text_file(b.out / "trajectory.csv"));
    CHECK(read_text_file(a.out / "zeros.csv") == read_text_file(b.out / "zeros.csv"));

    const RunResult c = run("zeros", "rotating_wave.json", "det_c");
    const RunResult d = run("zeros", "rotating_wave.json", "det_d");
    REQUIRE(c.exit_code == 0);
    CHECK(read_text_file(c.out / "zeros.csv") == read_text_file(d.out / "zeros.csv"));

    // sweep aggregates are assembled after the parallel fan-out completes
    const RunResult e = run("sweep", "sweep_lambda.json", "det_e", "--jobs 2");
    const RunResult f = run("sweep", "sweep_lambda.json", "det_f", "--jobs 2");
    REQUIRE(e.exit_code == 0);
    CHECK(read_text_file(e.out / "aggregate.csv") == read_text_file(f.out / "aggregate.csv"));
}

TEST_CASE("CIRCLEWAVE_OUT overrides --out") {
    const fs::path env_out = fs::temp_directory_path() / "circlewave_cli_envout";
    fs::remove_all(env_out);
    fs::create_directories(env_out);
    const fs::path flag_out = fs::temp_directory_path() / "circlewave_cli_flagout";
    fs::remove_all(flag_out);
    fs::create_directories(flag_out);
    const std::string cmd = "CIRCLEWAVE_OUT=" + env_out.string() + " " + bin.string() +
                            " subshift --config " + (cfg_dir / "subshift.json").string() +
                            " --out " + flag_out.string() + " > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(env_out / "subshift_demo.txt"));
    CHECK_FALSE(fs::exists(flag_out / "subshift_demo.txt"));
}
