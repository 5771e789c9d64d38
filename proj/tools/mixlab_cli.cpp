#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mixlab/common.hpp"
#include "mixlab/experiments.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_guard = 3;

int do_run(const std::string& config_path, const std::string& out_flag,
           bool json_out, bool seed_set, std::uint64_t seed) {
    std::ifstream f(config_path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open config " << config_path << "\n";
        return exit_invalid;
    }
    nlohmann::json config;
    try {
        config = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: config parse: " << e.what() << "\n";
        return exit_invalid;
    }
    if (seed_set) config["seed"] = seed;

    std::string out_dir = out_flag;
    if (out_dir.empty() && config.is_object() && config.contains("out") &&
        config.at("out").is_string())
        out_dir = config.at("out").get<std::string>();
    if (out_dir.empty()) out_dir = "mixlab-out";

    nlohmann::json summary;
    try {
        summary = mixlab::experiments::run(config, out_dir);
    } catch (const mixlab::GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return exit_guard;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: config schema: " << e.what() << "\n";
        return exit_invalid;
    }

    if (json_out) {
        std::cout << summary.dump(2) << "\n";
    } else {
        std::cout << summary.value("experiment", "?") << ": ";
        if (summary.contains("verdict"))
            std::cout << summary.at("verdict").get<std::string>();
        else
            std::cout << "done";
        std::cout << " (outputs in " << out_dir << ")\n";
    }
    return exit_ok;
}

void print_list(bool json_out) {
    nlohmann::json kinds = mixlab::experiments::list();
    if (json_out) {
        std::cout << kinds.dump(2) << "\n";
        return;
    }
    for (const auto& k : kinds) {
        std::cout << k.at("kind").get<std::string>() << "\t"
                  << k.at("description").get<std::string>() << "\t(optional:";
        for (const auto& o : k.at("optional"))
            std::cout << " " << o.get<std::string>();
        std::cout << ")\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixlab experiment runner"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    bool json_out = false;
    std::uint64_t seed = 0;

    CLI::App* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("--config", config_path, "config JSON path")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--json", json_out, "print the summary as JSON");
    CLI::Option* seed_opt =
        run->add_option("--seed", seed, "override the config seed");

    CLI::App* list = app.add_subcommand("list-experiments", "describe experiment kinds");
    bool list_json = false;
    list->add_flag("--json", list_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_invalid;
    }

    if (run->parsed())
        return do_run(config_path, out_dir, json_out, seed_opt->count() > 0, seed);
    print_list(list_json);
    return exit_ok;
}
