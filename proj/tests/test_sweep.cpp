// test_sweep.cpp — sweep driver, serialization round-trips, plot output, and
// the CLI command cores.

#include "susyosc/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace susyosc;

namespace {

SweepConfig small_config() {
    SweepConfig config;
    config.omega1 = 1.0;
    config.alpha2 = 0.5;
    config.t_min = 0.4;
    config.t_max = 1.2;
    config.points = 5;
    return config;
}

std::string strip_timestamp_lines(const std::string& text) {
    std::istringstream in(text);
    std::string out, line;
    while (std::getline(in, line)) {
        if (line.rfind("# timestamp", 0) == 0) continue;
        out += line + "\n";
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("format_double_roundtrips_bitwise") {
    const double values[] = {0.1,    1.0 / 3.0,          4.0 / 3.0, std::exp(-0.5),
                             1e-300, 0.2757205647717832, 0.0,       12345.678901234567,
                             1e30,   -7.25};
    for (const double v : values) {
        const std::string text = format_double(v);
        char* end = nullptr;
        const double back = std::strtod(text.c_str(), &end);
        CHECK(*end == '\0');
        CHECK(back == v);
    }
}

TEST_CASE("temperature_grid_is_uniform_and_inclusive") {
    const SweepConfig config = small_config();
    const std::vector<double> grid = config.temperature_grid();
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == 0.4);
    CHECK(grid.back() == 1.2);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(grid[i] > grid[i - 1]);
        CHECK(std::abs(grid[i] - grid[i - 1] - 0.2) < 1e-12);
    }
}

TEST_CASE("sweep_config_validation") {
    SweepConfig config = small_config();
    config.t_min = -0.1;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = small_config();
    config.t_max = config.t_min;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = small_config();
    config.points = 1;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = small_config();
    config.tail_tolerance = 0.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = small_config();
    config.workers = -2;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("small_sweep_is_monotonic_and_accurate") {
    const SweepResult result = run_thermal_sweep(small_config());
    REQUIRE(result.rows.size() == 5);
    CHECK(sweep_monotonic(result.rows));
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const ObservableRecord& r = result.rows[i];
        CHECK(!r.flagged);
        CHECK(std::abs(r.E0_over_omega1 - r.E0_closed_form) < 1e-6);
        CHECK(std::abs(r.witten_numeric - r.witten_closed_form) < 1e-6);
        if (i > 0) CHECK(r.T_over_omega1 > result.rows[i - 1].T_over_omega1);
    }
    CHECK(!result.timestamp.empty());
}

TEST_CASE("csv_roundtrip_is_bit_exact") {
    const SweepResult result = run_thermal_sweep(small_config());
    const std::vector<ObservableRecord> parsed = parse_sweep_csv(sweep_csv(result));
    REQUIRE(parsed.size() == result.rows.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        const ObservableRecord& a = result.rows[i];
        const ObservableRecord& b = parsed[i];
        CHECK(a.beta == b.beta);
        CHECK(a.T_over_omega1 == b.T_over_omega1);
        CHECK(a.E0_over_omega1 == b.E0_over_omega1);
        CHECK(a.E0_closed_form == b.E0_closed_form);
        CHECK(a.gibbs_oracle == b.gibbs_oracle);
        CHECK(a.witten_numeric == b.witten_numeric);
        CHECK(a.witten_closed_form == b.witten_closed_form);
        CHECK(a.goldstino_norm_numeric == b.goldstino_norm_numeric);
        CHECK(a.goldstino_norm_closed_form == b.goldstino_norm_closed_form);
        CHECK(a.N_b_used == b.N_b_used);
        CHECK(a.tail_mass == b.tail_mass);
        CHECK(a.flagged == b.flagged);
    }
}

TEST_CASE("sweep_output_is_deterministic_across_worker_counts") {
    SweepConfig one = small_config();
    one.workers = 1;
    SweepConfig two = small_config();
    two.workers = 2;
    const std::string csv_one = strip_timestamp_lines(sweep_csv(run_thermal_sweep(one)));
    const std::string csv_two = strip_timestamp_lines(sweep_csv(run_thermal_sweep(two)));
    CHECK(csv_one == csv_two);
}

TEST_CASE("parse_sweep_csv_rejects_malformed_input") {
    CHECK_THROWS_AS(parse_sweep_csv("# only comments\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_csv("beta,wrong,header\n1,2,3\n"), std::invalid_argument);

    const SweepResult result = run_thermal_sweep(small_config());
    std::string csv = sweep_csv(result);
    CHECK_THROWS_AS(parse_sweep_csv(csv + "1,2,3\n"), std::invalid_argument);
    CHECK_THROWS_AS(
        parse_sweep_csv(csv + "x,2,3,4,5,6,7,8,9,10,11,0\n"), std::invalid_argument);
}

TEST_CASE("sweep_json_structure") {
    SweepConfig config = small_config();
    config.points = 2;
    config.t_min = 0.5;
    config.t_max = 1.0;
    const nlohmann::json j = sweep_json(run_thermal_sweep(config));
    CHECK(j.at("provenance").at("engine") == kEngineVersion);
    CHECK(j.at("provenance").at("config").at("points") == 2);
    REQUIRE(j.at("rows").size() == 2);
    const nlohmann::json& row = j.at("rows").at(0);
    for (const char* key : {"beta", "T_over_omega1", "E0_over_omega1", "E0_closed_form",
                            "gibbs_oracle", "witten_numeric", "witten_closed_form",
                            "goldstino_norm_numeric", "goldstino_norm_closed_form",
                            "N_b_used", "tail_mass", "flagged"}) {
        CHECK(row.contains(key));
    }
}

TEST_CASE("sweep_svg_renders_two_series") {
    SweepConfig config = small_config();
    config.points = 3;
    const SweepResult result = run_thermal_sweep(config);
    const std::string svg = sweep_svg(result);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("T / omega1") != std::string::npos);
    const std::size_t first = svg.find("<polyline");
    REQUIRE(first != std::string::npos);
    CHECK(svg.find("<polyline", first + 1) != std::string::npos);

    const std::string dat = sweep_dat(result);
    int lines = 0;
    for (const char c : dat) lines += (c == '\n');
    CHECK(lines == 1 + 3);  // column-header comment + one line per row

    SweepResult too_small = result;
    too_small.rows.resize(1);
    CHECK_THROWS_AS(sweep_svg(too_small), std::invalid_argument);
}

TEST_CASE("goldstino_csv_shape") {
    SweepConfig config = small_config();
    config.points = 2;
    const std::string csv = goldstino_csv(run_thermal_sweep(config));
    CHECK(csv.find("beta,T_over_omega1,goldstino_norm_numeric,goldstino_norm_closed_form,"
                   "N_b_used\n") != std::string::npos);
    int data_lines = 0;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#' && line.rfind("beta", 0) != 0) ++data_lines;
    }
    CHECK(data_lines == 2);
}

TEST_CASE("with_extension_handles_paths") {
    CHECK(with_extension("out.csv", "svg") == "out.svg");
    CHECK(with_extension("dir.v1/out", "svg") == "dir.v1/out.svg");
    CHECK(with_extension("noext", "svg") == "noext.svg");
    CHECK(with_extension("a/b/c.json", "dat") == "a/b/c.dat");
}

TEST_CASE("cmd_frequencies_documents") {
    const nlohmann::json ok = cmd_frequencies(5.0, 2.0);
    CHECK(std::abs(ok.at("omega1_minus").get<double>() - 1.0) < 1e-12);
    CHECK(std::abs(ok.at("omega1_plus").get<double>() - 4.0) < 1e-12);
    CHECK(!ok.at("degenerate").get<bool>());
    CHECK(!ok.contains("error"));

    const nlohmann::json complex_roots = cmd_frequencies(3.0, 2.0);
    CHECK(complex_roots.at("error") == "complex_roots");
    CHECK(complex_roots.at("omega2") == 3.0);

    const nlohmann::json invalid = cmd_frequencies(-5.0, 2.0);
    CHECK(invalid.at("error") == "invalid_parameters");
}

TEST_CASE("cmd_verify_passes_and_detects_detuning") {
    const ModelParams params{1.0, 0.5};
    FockSpaceConfig cfg;
    cfg.boson_cutoff = 48;
    cfg.guard_band = displacement_aware_guard(48, params.lambda());

    const nlohmann::json good = cmd_verify(params, cfg);
    CHECK(good.at("all_passed").get<bool>());
    CHECK(good.at("checks").size() == 18);
    CHECK(std::abs(good.at("ground_energy").get<double>()) < 1e-9);
    CHECK(good.at("notes").empty());

    const nlohmann::json detuned = cmd_verify(params, cfg, 0.0, 2.0);
    CHECK(!detuned.at("all_passed").get<bool>());
    CHECK(detuned.at("params").at("omega2") == 2.0);
    REQUIRE(detuned.at("notes").size() == 1);
}

TEST_CASE("cmd_spectrum_emits_levels") {
    const ModelParams params{1.0, 0.5};
    FockSpaceConfig cfg;
    cfg.boson_cutoff = 32;
    cfg.guard_band = displacement_aware_guard(32, params.lambda());
    const std::string csv = cmd_spectrum(params, 7, cfg);
    CHECK(csv.find("index,eigenvalue,multiplicity\n") != std::string::npos);
    CHECK(csv.find("0,") != std::string::npos);
    int data_lines = 0;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#' && line.rfind("index", 0) != 0) ++data_lines;
    }
    CHECK(data_lines == 4);  // levels 0..3 cover the lowest 7 states
}

TEST_CASE("resolve_worker_count_sources") {
    CHECK(resolve_worker_count(2) == 2);
    setenv(kWorkerEnvVar, "3", 1);
    CHECK(resolve_worker_count(0) == 3);
    setenv(kWorkerEnvVar, "not-a-number", 1);
    CHECK(resolve_worker_count(0) >= 1);
    setenv(kWorkerEnvVar, "0", 1);
    CHECK(resolve_worker_count(0) >= 1);
    unsetenv(kWorkerEnvVar);
    CHECK(resolve_worker_count(0) >= 1);
}

TEST_CASE("write_text_file_reports_failures") {
    CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x/out.txt", "data"),
                    std::runtime_error);
}

TEST_CASE("cmd_thermal_sweep_writes_outputs") {
    SweepConfig config = small_config();
    config.points = 3;
    config.t_min = 0.5;
    config.t_max = 1.0;
    config.output_path = "test_sweep_out.csv";
    config.emit_plot = true;

    const SweepResult result = cmd_thermal_sweep(config);
    REQUIRE(result.rows.size() == 3);
    const std::vector<ObservableRecord> parsed = parse_sweep_csv(slurp("test_sweep_out.csv"));
    CHECK(parsed.size() == 3);
    CHECK(slurp("test_sweep_out.svg").find("<svg") != std::string::npos);
    CHECK(!slurp("test_sweep_out.dat").empty());
    std::remove("test_sweep_out.csv");
    std::remove("test_sweep_out.svg");
    std::remove("test_sweep_out.dat");

    SweepConfig json_config = config;
    json_config.emit_plot = false;
    json_config.format = SweepFormat::json;
    json_config.output_path = "test_sweep_out.json";
    cmd_thermal_sweep(json_config);
    const nlohmann::json j = nlohmann::json::parse(slurp("test_sweep_out.json"));
    CHECK(j.at("rows").size() == 3);
    std::remove("test_sweep_out.json");

    SweepConfig bad = config;
    bad.output_path.clear();
    bad.emit_plot = true;
    CHECK_THROWS_AS(cmd_thermal_sweep(bad), std::invalid_argument);
}
