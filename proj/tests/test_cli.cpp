#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = BRAGGSIM_BIN;

int run(const std::string& args) {
    const std::string cmd = kBin + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

const char* kFastConfig = R"({
  "dispersion": {"kind": "constant", "indices": [2.75, 2.55]},
  "grating": {"kappa_per_nm": 7e-5, "length_nm": 60000},
  "noise": {"sigma_width_nm": 1.2, "seed": 9},
  "trials": 6
})";

}  // namespace

TEST_CASE("help and missing subcommand") {
    CHECK(run("--help") == 0);
    CHECK(run("") != 0);
}

TEST_CASE("unknown config fields fail validation with exit code 2") {
    write_file("bad_config.json", R"({"grating": {"kapa_per_nm": 1e-4}})");
    CHECK(run("simulate --config bad_config.json --out cli_bad") == 2);
    const auto err = slurp("cli_stderr.txt");
    CHECK(err.find("grating.kapa_per_nm") != std::string::npos);
}

TEST_CASE("invalid values fail validation with exit code 2") {
    write_file("bad_value.json", R"({"trials": -3})");
    CHECK(run("montecarlo --config bad_value.json --out cli_bad2") == 2);
}

TEST_CASE("simulate output is byte-deterministic") {
    write_file("fast_config.json", kFastConfig);
    REQUIRE(run("simulate --config fast_config.json --out cli_a --seed 5") == 0);
    REQUIRE(run("simulate --config fast_config.json --out cli_b --seed 5") == 0);
    CHECK(slurp("cli_a/spectrum.csv") == slurp("cli_b/spectrum.csv"));
    CHECK(slurp("cli_a/metrics.json") == slurp("cli_b/metrics.json"));
    CHECK(!slurp("cli_a/spectrum.csv").empty());

    REQUIRE(run("simulate --config fast_config.json --out cli_c --seed 6") == 0);
    CHECK(slurp("cli_a/spectrum.csv") != slurp("cli_c/spectrum.csv"));
}

TEST_CASE("analyze agrees with the metrics emitted by simulate") {
    write_file("fast_config.json", kFastConfig);
    REQUIRE(run("simulate --config fast_config.json --out cli_sim") == 0);
    REQUIRE(run("analyze cli_sim/spectrum.csv --out cli_an") == 0);
    const json sim = json::parse(slurp("cli_sim/metrics.json"));
    const json an = json::parse(slurp("cli_an/metrics.json"));
    // Off-band conventions differ (dedicated windows vs grid edges), so
    // compare the window-independent quantities.
    CHECK(std::abs(sim["true"]["notch_level_db"].get<double>() -
                   an["notch_level_db"].get<double>()) < 1e-9);
    CHECK(std::abs(sim["true"]["center_nm"].get<double>() -
                   an["center_nm"].get<double>()) < 1e-6);
}

TEST_CASE("montecarlo emits stats and a per-trial table") {
    write_file("fast_config.json", kFastConfig);
    REQUIRE(run("montecarlo --config fast_config.json --out cli_mc --trials 5") == 0);
    const json stats = json::parse(slurp("cli_mc/stats.json"));
    CHECK(stats["trials"].get<int>() == 5);
    CHECK(stats["median_rejection_db"].get<double>() > 0.0);
    const auto table = slurp("cli_mc/trials.csv");
    CHECK(table.find("trial,rejection_db") == 0);
    // Header plus five rows.
    CHECK(std::count(table.begin(), table.end(), '\n') == 6);
}

TEST_CASE("effective config reparses to the identical run") {
    write_file("fast_config.json", kFastConfig);
    REQUIRE(run("simulate --config fast_config.json --out cli_e1") == 0);
    REQUIRE(run("simulate --config cli_e1/effective_config.json --out cli_e2") == 0);
    CHECK(slurp("cli_e1/spectrum.csv") == slurp("cli_e2/spectrum.csv"));
    json e1 = json::parse(slurp("cli_e1/effective_config.json"));
    json e2 = json::parse(slurp("cli_e2/effective_config.json"));
    // Only the output directory may differ between the two runs.
    e1.erase("output_dir");
    e2.erase("output_dir");
    CHECK(e1 == e2);
}

TEST_CASE("missing input files exit with the I/O code") {
    CHECK(run("analyze does_not_exist.csv") == 4);
    CHECK(run("simulate --config does_not_exist.json --out cli_x") == 4);
}
