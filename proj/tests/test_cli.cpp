#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

// End-to-end checks against the installed CLI binary; the test runner
// exports MIXLAB_CLI with its path.

namespace {

std::string cli_path() {
    const char* p = std::getenv("MIXLAB_CLI");
    REQUIRE_MESSAGE(p != nullptr, "MIXLAB_CLI not set");
    return p;
}

int run_cli(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string capture_cli(const std::string& args) {
    std::string tmp = "cli_capture.txt";
    std::string cmd = cli_path() + " " + args + " > " + tmp + " 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(tmp.c_str());
    return ss.str();
}

void write_config(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), ("missing file: " + path).c_str());
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("list-experiments prints all seven kinds") {
    std::string out = capture_cli("list-experiments --json");
    nlohmann::json j = nlohmann::json::parse(out);
    REQUIRE(j.is_array());
    CHECK(j.size() == 7);
    bool found_shift = false;
    for (const auto& e : j) found_shift |= e.at("kind") == "shift-mixing";
    CHECK(found_shift);
    CHECK(run_cli("list-experiments") == 0);
}

TEST_CASE("invalid invocations exit with code 2") {
    CHECK(run_cli("run") == 2);                       // missing --config
    CHECK(run_cli("run --config does_not_exist.json") == 2);

    write_config("cfg_nokind.json", {{"seed", 1}});
    CHECK(run_cli("run --config cfg_nokind.json --out out_nokind") == 2);

    write_config("cfg_unknown.json",
                 {{"experiment", "frobnicate"}, {"seed", 1}});
    CHECK(run_cli("run --config cfg_unknown.json --out out_unknown") == 2);

    // missing seed is a config validation error
    write_config("cfg_noseed.json", {{"experiment", "haar-null"}});
    CHECK(run_cli("run --config cfg_noseed.json --out out_noseed") == 2);
}

TEST_CASE("numerical guard trips exit with code 3") {
    // an arc this short cannot host a depth-10 Cantor family
    write_config("cfg_guard.json", {{"experiment", "cantor-fourier"},
                                    {"seed", 1},
                                    {"arc_lo", 0.0},
                                    {"arc_hi", 1e-9},
                                    {"depth", 10}});
    CHECK(run_cli("run --config cfg_guard.json --out out_guard") == 3);
}

TEST_CASE("a small run produces summary, manifest and csv artifacts") {
    write_config("cfg_small.json", {{"experiment", "haar-null"},
                                    {"seed", 3},
                                    {"dim", 32},
                                    {"n_terms", 64}});
    CHECK(run_cli("run --config cfg_small.json --out out_small") == 0);

    nlohmann::json summary = read_json("out_small/summary.json");
    CHECK(summary.at("experiment") == "haar-null");
    CHECK(summary.at("seed") == 3);

    nlohmann::json manifest = read_json("out_small/manifest.json");
    CHECK(manifest.at("schema_version") == 1);
    CHECK(manifest.at("experiment") == "haar-null");
    CHECK(manifest.at("content_hash").get<std::string>().size() == 16);
    CHECK(manifest.contains("wall_time_ms"));
}

TEST_CASE("rerunning the same config reproduces the content hash") {
    write_config("cfg_rep.json", {{"experiment", "shift-mixing"},
                                  {"seed", 11},
                                  {"dim", 16},
                                  {"nodes", 128},
                                  {"horizon", 64}});
    CHECK(run_cli("run --config cfg_rep.json --out out_rep1") == 0);
    CHECK(run_cli("run --config cfg_rep.json --out out_rep2") == 0);
    std::string h1 = read_json("out_rep1/manifest.json").at("content_hash");
    std::string h2 = read_json("out_rep2/manifest.json").at("content_hash");
    CHECK(h1 == h2);
}

TEST_CASE("--seed overrides the config seed") {
    write_config("cfg_seed.json", {{"experiment", "haar-null"},
                                   {"seed", 3},
                                   {"dim", 32},
                                   {"n_terms", 64}});
    CHECK(run_cli("run --config cfg_seed.json --out out_seed --seed 9") == 0);
    CHECK(read_json("out_seed/summary.json").at("seed") == 9);
}
